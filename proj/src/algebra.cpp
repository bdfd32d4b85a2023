#include "mgr/algebra.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

#include "mgr/errors.hpp"

namespace mgr {

std::string VerifyReport::summary() const {
    if (ok) return "ok";
    std::ostringstream out;
    for (std::size_t i = 0; i < failures.size(); ++i) {
        if (i) out << "; ";
        out << failures[i];
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// FiniteRack

FiniteRack::FiniteRack(SquareTable op, std::string name) : op_(std::move(op)), name_(std::move(name)) {
    const int n = op_.size();
    if (n <= 0) throw InvalidParameter("rack must have at least one element");
    if (n > table_cap()) throw InvalidParameter("rack size exceeds table cap");
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int v = op_.at(x, y);
            if (v < 0 || v >= n) throw InvalidParameter("rack table entry out of range");
        }
    // Inverse table exists iff every column is a permutation.
    inv_ = SquareTable(n, -1);
    has_inverses_ = true;
    for (int y = 0; y < n && has_inverses_; ++y) {
        for (int x = 0; x < n; ++x) {
            int v = op_.at(x, y);
            if (inv_.at(v, y) != -1) {
                has_inverses_ = false;
                break;
            }
            inv_.set(v, y, x);
        }
    }
    if (!has_inverses_) inv_ = SquareTable();
}

int FiniteRack::op_inv(int x, int y) const {
    if (!has_inverses_) throw InvalidOperation("rack has no inverse table (some S_y is not bijective)");
    return inv_.at(x, y);
}

int FiniteRack::pow(int x, long long k, int y) const {
    if (k >= 0) {
        for (long long i = 0; i < k; ++i) x = op_.at(x, y);
    } else {
        for (long long i = 0; i > k; --i) x = op_inv(x, y);
    }
    return x;
}

const SquareTable& FiniteRack::inverse_table() const {
    if (!has_inverses_) throw InvalidOperation("rack has no inverse table (some S_y is not bijective)");
    return inv_;
}

// ---------------------------------------------------------------------------
// FiniteGroup

FiniteGroup::FiniteGroup(SquareTable mul, std::string name) : mul_(std::move(mul)), name_(std::move(name)) {
    const int n = mul_.size();
    if (n <= 0) throw InvalidParameter("group must have at least one element");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int v = mul_.at(a, b);
            if (v < 0 || v >= n) throw InvalidParameter("group table entry out of range");
        }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (mul_.at(mul_.at(a, b), c) != mul_.at(a, mul_.at(b, c)))
                    throw AxiomViolation("group multiplication is not associative");
    identity_ = -1;
    for (int e = 0; e < n; ++e) {
        bool works = true;
        for (int a = 0; a < n; ++a)
            if (mul_.at(e, a) != a || mul_.at(a, e) != a) {
                works = false;
                break;
            }
        if (works) {
            identity_ = e;
            break;
        }
    }
    if (identity_ < 0) throw AxiomViolation("group has no identity element");
    inv_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (mul_.at(a, b) == identity_ && mul_.at(b, a) == identity_) {
                inv_[a] = b;
                break;
            }
        if (inv_[a] < 0) throw AxiomViolation("group element without inverse");
    }
}

FiniteGroup FiniteGroup::cyclic(int n) {
    if (n < 1) throw InvalidParameter("cyclic group order must be >= 1");
    SquareTable mul(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) mul.set(a, b, (a + b) % n);
    return FiniteGroup(std::move(mul), "Z" + std::to_string(n));
}

FiniteGroup FiniteGroup::symmetric3() {
    // Permutations of {0,1,2} in lexicographic one-line order.
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> p{0, 1, 2};
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    SquareTable mul(6);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            std::array<int, 3> ab; // apply a, then b
            for (int i = 0; i < 3; ++i) ab[i] = perms[b][perms[a][i]];
            int idx = static_cast<int>(std::find(perms.begin(), perms.end(), ab) - perms.begin());
            mul.set(a, b, idx);
        }
    return FiniteGroup(std::move(mul), "sym3");
}

bool FiniteGroup::is_abelian() const {
    const int n = size();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (mul_.at(a, b) != mul_.at(b, a)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// PolyQuotientRing

PolyQuotientRing::PolyQuotientRing(int coeff_modulus, std::vector<int> modulus_coeffs)
    : m_(coeff_modulus), modulus_(std::move(modulus_coeffs)) {
    if (m_ < 2) throw InvalidParameter("coefficient modulus must be >= 2");
    if (modulus_.size() < 2) throw InvalidParameter("modulus polynomial must have degree >= 1");
    for (int& c : modulus_) c = ((c % m_) + m_) % m_;
    deg_ = static_cast<int>(modulus_.size()) - 1;
    if (modulus_[deg_] != 1) throw InvalidParameter("modulus polynomial must be monic");
    // t is invertible exactly when the constant term is a unit mod m.
    int c0 = modulus_[0];
    bool unit = false;
    for (int u = 0; u < m_; ++u)
        if (c0 * u % m_ == 1) unit = true;
    if (!unit) throw InvalidParameter("constant term of the modulus must be a unit mod m");
    long long sz = 1;
    for (int i = 0; i < deg_; ++i) {
        sz *= m_;
        if (sz > table_cap()) throw InvalidParameter("ring size exceeds table cap");
    }
    size_ = static_cast<int>(sz);
}

int PolyQuotientRing::one() const {
    std::vector<int> c(deg_, 0);
    c[0] = 1;
    return from_coeffs(c);
}

int PolyQuotientRing::gen_t() const {
    std::vector<int> c(deg_, 0);
    if (deg_ >= 2)
        c[1] = 1;
    else
        c[0] = ((-modulus_[0]) % m_ + m_) % m_; // t = -c0 when deg == 1
    return from_coeffs(c);
}

int PolyQuotientRing::from_coeffs(std::span<const int> coeffs) const {
    std::vector<int> c(deg_, 0);
    if (static_cast<int>(coeffs.size()) > deg_)
        throw InvalidParameter("coefficient vector longer than the residue degree");
    for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = ((coeffs[i] % m_) + m_) % m_;
    return static_cast<int>(lex_index(c, m_));
}

std::vector<int> PolyQuotientRing::coeffs(int a) const { return lex_digits(a, m_, deg_); }

int PolyQuotientRing::add(int a, int b) const {
    auto ca = coeffs(a), cb = coeffs(b);
    for (int i = 0; i < deg_; ++i) ca[i] = (ca[i] + cb[i]) % m_;
    return static_cast<int>(lex_index(ca, m_));
}

int PolyQuotientRing::neg(int a) const {
    auto ca = coeffs(a);
    for (int& c : ca) c = (m_ - c) % m_;
    return static_cast<int>(lex_index(ca, m_));
}

int PolyQuotientRing::mul(int a, int b) const {
    auto ca = coeffs(a), cb = coeffs(b);
    std::vector<int> prod(2 * deg_ - 1, 0);
    for (int i = 0; i < deg_; ++i) {
        if (ca[i] == 0) continue;
        for (int j = 0; j < deg_; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % m_;
    }
    // Reduce by the monic modulus: t^deg = -(lower terms).
    for (int k = static_cast<int>(prod.size()) - 1; k >= deg_; --k) {
        int c = prod[k];
        if (c == 0) continue;
        prod[k] = 0;
        for (int i = 0; i < deg_; ++i)
            prod[k - deg_ + i] = ((prod[k - deg_ + i] - c * modulus_[i]) % m_ + m_) % m_;
    }
    prod.resize(deg_);
    return static_cast<int>(lex_index(prod, m_));
}

std::optional<int> PolyQuotientRing::inverse(int a) const {
    for (int b = 0; b < size_; ++b)
        if (mul(a, b) == one()) return b;
    return std::nullopt;
}

std::string PolyQuotientRing::format_element(int a) const {
    auto c = coeffs(a);
    std::ostringstream out;
    bool first = true;
    for (int i = 0; i < deg_; ++i) {
        if (c[i] == 0) continue;
        if (!first) out << "+";
        first = false;
        if (i == 0 || c[i] != 1) out << c[i];
        if (i >= 1) out << (c[i] != 1 ? "*t" : "t");
        if (i >= 2) out << "^" << i;
    }
    if (first) out << "0";
    return out.str();
}

// ---------------------------------------------------------------------------
// Constructions

FiniteRack make_dihedral(int q) {
    if (q < 2) throw InvalidParameter("dihedral quandle requires q >= 2");
    SquareTable op(q);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) op.set(a, b, ((2 * b - a) % q + q) % q);
    return FiniteRack(std::move(op), "R" + std::to_string(q));
}

FiniteRack make_cyclic(int n) {
    if (n < 1) throw InvalidParameter("cyclic rack requires n >= 1");
    SquareTable op(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) op.set(a, b, (a + 1) % n);
    return FiniteRack(std::move(op), "C" + std::to_string(n));
}

FiniteRack make_conjugation(const FiniteGroup& g) {
    const int n = g.size();
    SquareTable op(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) op.set(a, b, g.mul(g.mul(g.inverse(b), a), b));
    return FiniteRack(std::move(op), "Conj(" + g.name() + ")");
}

FiniteRack make_ts_rack(const PolyQuotientRing& ring, int t, int s) {
    if (!ring.inverse(t)) throw InvalidParameter("(t,s)-rack requires t invertible");
    // s(t+s-1) = 0 is exactly what right self-distributivity needs.
    int rel = ring.mul(s, ring.add(ring.add(t, s), ring.neg(ring.one())));
    if (rel != ring.zero()) throw AxiomViolation("(t,s)-rack requires s(t+s-1) = 0");
    const int n = ring.size();
    SquareTable op(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) op.set(x, y, ring.add(ring.mul(t, x), ring.mul(s, y)));
    return FiniteRack(std::move(op), "ts-rack");
}

FiniteRack make_power_rack(const FiniteRack& x, int n, const std::vector<long long>& exponents,
                           const std::vector<int>& indices) {
    if (n < 1) throw InvalidParameter("power rack requires n >= 1");
    if (exponents.size() != indices.size())
        throw InvalidParameter("power rack needs matching exponent and index lists");
    for (int i : indices)
        if (i < 1 || i > n) throw InvalidParameter("power rack index out of range");
    const int base = x.size();
    long long sz = 1;
    for (int i = 0; i < n; ++i) {
        sz *= base;
        if (sz > table_cap()) throw InvalidParameter("power rack size exceeds table cap");
    }
    const int total = static_cast<int>(sz);
    const int m = static_cast<int>(exponents.size());

    SquareTable op(total);
    std::vector<int> ydigits(n);
    // The same map c -> c *^{e_1} y_{i_1} ... *^{e_m} y_{i_m} hits every
    // coordinate, so tabulate it once per right-hand tuple.
    std::vector<int> transform(base);
    for (int yi = 0; yi < total; ++yi) {
        ydigits = lex_digits(yi, base, n);
        for (int c = 0; c < base; ++c) {
            int v = c;
            for (int k = 0; k < m; ++k) v = x.pow(v, exponents[k], ydigits[indices[k] - 1]);
            transform[c] = v;
        }
        std::vector<int> xd(n);
        for (int xi = 0; xi < total; ++xi) {
            xd = lex_digits(xi, base, n);
            for (int& d : xd) d = transform[d];
            op.set(xi, yi, static_cast<int>(lex_index(xd, base)));
        }
    }
    FiniteRack result(std::move(op), x.name() + "^" + std::to_string(n));
    VerifyReport report = verify_rack(result);
    if (!report.ok) throw AxiomViolation("power rack failed re-verification: " + report.summary());
    return result;
}

// ---------------------------------------------------------------------------
// Predicates and invariants

VerifyReport verify_rack(const FiniteRack& x) {
    VerifyReport report;
    const int n = x.size();
    const SquareTable& op = x.table();
    std::vector<char> seen(n);
    for (int y = 0; y < n; ++y) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int a = 0; a < n; ++a) {
            int v = op.at(a, y);
            if (seen[v]) {
                std::ostringstream msg;
                msg << "S_" << y << " is not a bijection: column " << y << " repeats value " << v;
                report.fail(msg.str());
                y = n; // first bad column only
                break;
            }
            seen[v] = 1;
        }
    }
    for (int xx = 0; xx < n; ++xx)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (op.at(op.at(xx, y), z) != op.at(op.at(xx, z), op.at(y, z))) {
                    std::ostringstream msg;
                    msg << "self-distributivity fails at (x,y,z)=(" << xx << "," << y << "," << z
                        << "): (x*y)*z=" << op.at(op.at(xx, y), z) << " but (x*z)*(y*z)="
                        << op.at(op.at(xx, z), op.at(y, z));
                    report.fail(msg.str());
                    return report;
                }
    return report;
}

bool is_quandle(const FiniteRack& x) {
    for (int a = 0; a < x.size(); ++a)
        if (x.op(a, a) != a) return false;
    return true;
}

long long rack_type(const FiniteRack& x) {
    const int n = x.size();
    if (!x.has_inverses()) throw InvalidOperation("rack_type requires bijective columns");
    // lcm over all columns of the permutation order of S_y, via cycle lengths.
    long long type = 1;
    std::vector<char> visited(n);
    for (int y = 0; y < n; ++y) {
        std::fill(visited.begin(), visited.end(), 0);
        for (int start = 0; start < n; ++start) {
            if (visited[start]) continue;
            int len = 0, cur = start;
            do {
                visited[cur] = 1;
                cur = x.op(cur, y);
                ++len;
            } while (cur != start);
            long long g = std::gcd(type, static_cast<long long>(len));
            __int128 l = static_cast<__int128>(type) / g * len;
            if (l > static_cast<__int128>(1) << 62) throw std::overflow_error("rack type overflows");
            type = static_cast<long long>(l);
        }
    }
    return type;
}

} // namespace mgr
