#include "mgr/specparse.hpp"

#include <sstream>
#include <vector>

#include "mgr/errors.hpp"

namespace mgr {
namespace {

struct Cursor {
    std::vector<std::string> tokens;
    std::size_t pos = 0;

    bool done() const { return pos >= tokens.size(); }
    const std::string& peek() const {
        if (done()) throw ParseError("unexpected end of spec");
        return tokens[pos];
    }
    std::string next() {
        if (done()) throw ParseError("unexpected end of spec");
        return tokens[pos++];
    }
};

Cursor tokenize(const std::string& spec) {
    Cursor cur;
    std::istringstream in(spec);
    std::string tok;
    while (in >> tok) cur.tokens.push_back(tok);
    return cur;
}

long long parse_int(const std::string& tok, const char* what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("expected ") + what + ", got '" + tok + "'");
    }
}

std::vector<long long> parse_int_list(const std::string& tok, const char* what) {
    std::vector<long long> values;
    std::string piece;
    std::istringstream in(tok);
    while (std::getline(in, piece, ',')) values.push_back(parse_int(piece, what));
    if (values.empty()) throw ParseError(std::string("empty ") + what + " list");
    return values;
}

FiniteGroup parse_group(Cursor& cur) {
    std::string kind = cur.next();
    if (kind == "Z") return FiniteGroup::cyclic(static_cast<int>(parse_int(cur.next(), "group order")));
    if (kind == "sym3") return FiniteGroup::symmetric3();
    throw ParseError("unknown group spec '" + kind + "'");
}

FiniteRack parse_rack(Cursor& cur) {
    std::string kind = cur.next();
    if (kind == "dihedral") return make_dihedral(static_cast<int>(parse_int(cur.next(), "order")));
    if (kind == "cyclic") return make_cyclic(static_cast<int>(parse_int(cur.next(), "order")));
    if (kind == "conj") return make_conjugation(parse_group(cur));
    if (kind == "ts") {
        int m = static_cast<int>(parse_int(cur.next(), "coefficient modulus"));
        auto to_ints = [](const std::vector<long long>& v) {
            return std::vector<int>(v.begin(), v.end());
        };
        std::vector<int> mod = to_ints(parse_int_list(cur.next(), "modulus coefficient"));
        PolyQuotientRing ring(m, mod);
        std::vector<int> tc = to_ints(parse_int_list(cur.next(), "t coefficient"));
        std::vector<int> sc = to_ints(parse_int_list(cur.next(), "s coefficient"));
        return make_ts_rack(ring, ring.from_coeffs(tc), ring.from_coeffs(sc));
    }
    if (kind == "power") {
        FiniteRack base = parse_rack(cur);
        int n = static_cast<int>(parse_int(cur.next(), "tuple length"));
        std::vector<long long> exps;
        std::vector<int> idxs;
        // The exponent/index part is "e1,..,em/i1,..,im"; a bare "/" means
        // m = 0, and it may be omitted entirely at the end of the spec.
        if (!cur.done()) {
            std::string tok = cur.next();
            std::string epart, ipart;
            if (auto slash = tok.find('/'); slash != std::string::npos) {
                epart = tok.substr(0, slash);
                ipart = tok.substr(slash + 1);
            } else {
                epart = tok;
                if (cur.next() != "/") throw ParseError("expected '/' between exponents and indices");
                ipart = cur.next();
            }
            if (!epart.empty()) exps = parse_int_list(epart, "exponent");
            if (!ipart.empty())
                for (long long i : parse_int_list(ipart, "index")) idxs.push_back(static_cast<int>(i));
        }
        return make_power_rack(base, n, exps, idxs);
    }
    throw ParseError("unknown rack spec '" + kind + "'");
}

void expect_done(const Cursor& cur) {
    if (!cur.done()) throw ParseError("trailing tokens in spec: '" + cur.peek() + "'");
}

} // namespace

FiniteRack parse_rack_spec(const std::string& spec) {
    Cursor cur = tokenize(spec);
    FiniteRack r = parse_rack(cur);
    expect_done(cur);
    return r;
}

FiniteGroup parse_group_spec(const std::string& spec) {
    Cursor cur = tokenize(spec);
    FiniteGroup g = parse_group(cur);
    expect_done(cur);
    return g;
}

GFamily parse_family_spec(const std::string& spec) {
    Cursor cur = tokenize(spec);
    if (cur.next() != "zfamily") throw ParseError("family spec must start with 'zfamily'");
    FiniteRack r = parse_rack(cur);
    expect_done(cur);
    return gfamily_from_rack(r);
}

MultipleGroupRack parse_mgr_spec(const std::string& spec) {
    Cursor cur = tokenize(spec);
    if (cur.peek() == "conj") {
        cur.next();
        FiniteGroup g = parse_group(cur);
        expect_done(cur);
        return MultipleGroupRack::conjugation(g);
    }
    return associated_mgr(parse_family_spec(spec));
}

} // namespace mgr
