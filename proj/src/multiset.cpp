#include "mgr/multiset.hpp"

#include <algorithm>
#include <sstream>

#include "mgr/errors.hpp"

namespace mgr {

CountMultiset::CountMultiset(std::vector<long long> counts) {
    std::sort(counts.begin(), counts.end());
    for (long long c : counts) {
        if (!entries_.empty() && entries_.back().first == c)
            ++entries_.back().second;
        else
            entries_.push_back({c, 1});
    }
}

long long CountMultiset::total_multiplicity() const {
    long long total = 0;
    for (const auto& [c, m] : entries_) total += m;
    return total;
}

long long CountMultiset::total_count() const {
    long long total = 0;
    for (const auto& [c, m] : entries_) total += c * m;
    return total;
}

std::string CountMultiset::format() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) out << ' ';
        out << entries_[i].first << '^' << entries_[i].second;
    }
    return out.str();
}

std::string CountMultiset::format_machine() const {
    std::ostringstream out;
    for (const auto& [c, m] : entries_) out << c << ' ' << m << '\n';
    return out.str();
}

CountMultiset CountMultiset::parse(const std::string& text) {
    CountMultiset result;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        auto caret = token.find('^');
        if (caret == std::string::npos) throw ParseError("multiset entry lacks '^': " + token);
        long long count = 0, mult = 0;
        try {
            count = std::stoll(token.substr(0, caret));
            mult = std::stoll(token.substr(caret + 1));
        } catch (const std::exception&) {
            throw ParseError("bad multiset entry: " + token);
        }
        if (mult <= 0) throw ParseError("multiset multiplicity must be positive: " + token);
        if (!result.entries_.empty() && result.entries_.back().first >= count)
            throw ParseError("multiset counts must be strictly increasing");
        result.entries_.push_back({count, mult});
    }
    return result;
}

} // namespace mgr
