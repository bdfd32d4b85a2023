#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mgr {

/// Multiset of per-flow coloring counts, kept canonical: entries sorted by
/// strictly increasing count, multiplicities positive.
class CountMultiset {
public:
    CountMultiset() = default;
    /// Collates a flat list of counts.
    explicit CountMultiset(std::vector<long long> counts);

    const std::vector<std::pair<long long, long long>>& entries() const { return entries_; }
    long long total_multiplicity() const;
    /// Sum of count * multiplicity over all entries.
    long long total_count() const;
    bool empty() const { return entries_.empty(); }

    /// Canonical text: "c1^m1 c2^m2 ..." ascending by count; "" when empty.
    std::string format() const;
    /// One "count multiplicity" pair per line.
    std::string format_machine() const;
    /// Parses the canonical text format (used by regression fixtures).
    static CountMultiset parse(const std::string& text);

    bool operator==(const CountMultiset&) const = default;

private:
    std::vector<std::pair<long long, long long>> entries_;
};

} // namespace mgr
