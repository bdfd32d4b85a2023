#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mgr/util.hpp"

namespace mgr {

/// Outcome of an exhaustive axiom check. Verifiers stop at the first
/// counterexample of each axiom (lexicographic scan order), so failure
/// messages are deterministic.
struct VerifyReport {
    bool ok = true;
    std::vector<std::string> failures;

    void fail(std::string msg) {
        ok = false;
        failures.push_back(std::move(msg));
    }
    std::string summary() const;
};

/// Finite rack (X, *) on elements {0..n-1} as an explicit operation table.
///
/// op(x, y) = x * y. The inverse table op_inv(x, y) = S_y^{-1}(x) exists as
/// soon as every column of the table is a permutation; constructing from an
/// arbitrary table is allowed so that verify_rack can report on non-racks.
class FiniteRack {
public:
    explicit FiniteRack(SquareTable op, std::string name = "rack");

    int size() const { return op_.size(); }
    const std::string& name() const { return name_; }

    int op(int x, int y) const { return op_.at(x, y); }
    int op_inv(int x, int y) const;

    /// x *^k y (k-fold application of S_y; negative k uses the inverse).
    int pow(int x, long long k, int y) const;

    bool has_inverses() const { return has_inverses_; }
    const SquareTable& table() const { return op_; }
    const SquareTable& inverse_table() const;

private:
    SquareTable op_;
    SquareTable inv_;
    bool has_inverses_ = false;
    std::string name_;
};

/// Finite group as a multiplication table with identity and inverses.
/// Construction checks associativity, identity and inverse laws exhaustively.
class FiniteGroup {
public:
    explicit FiniteGroup(SquareTable mul, std::string name = "group");

    /// Z_n, additive.
    static FiniteGroup cyclic(int n);
    /// Symmetric group on {0,1,2}; elements are permutations enumerated in
    /// lexicographic one-line order, mul(a,b) = "apply a, then b".
    static FiniteGroup symmetric3();

    int size() const { return mul_.size(); }
    const std::string& name() const { return name_; }
    int mul(int a, int b) const { return mul_.at(a, b); }
    int identity() const { return identity_; }
    int inverse(int a) const { return inv_[a]; }
    bool is_abelian() const;

private:
    SquareTable mul_;
    std::vector<int> inv_;
    int identity_ = 0;
    std::string name_;
};

/// The ring Z_m[t] / (f) for a monic modulus f with unit constant term,
/// tabulated on the m^deg(f) residue polynomials. Elements are encoded by
/// the lexicographic index of their coefficient vector, constant term first.
class PolyQuotientRing {
public:
    PolyQuotientRing(int coeff_modulus, std::vector<int> modulus_coeffs);

    int size() const { return size_; }
    int coeff_modulus() const { return m_; }
    int degree() const { return deg_; }

    int zero() const { return 0; }
    int one() const;
    /// The class of the indeterminate t.
    int gen_t() const;

    int add(int a, int b) const;
    int neg(int a) const;
    int mul(int a, int b) const;
    /// Multiplicative inverse by exhaustive search, if one exists.
    std::optional<int> inverse(int a) const;

    int from_coeffs(std::span<const int> coeffs) const;
    std::vector<int> coeffs(int a) const;
    std::string format_element(int a) const;

private:
    int m_;
    int deg_;
    int size_;
    std::vector<int> modulus_; // length deg_+1, constant first, monic
};

// Rack constructions.

/// Dihedral quandle R_q on Z_q: a * b = 2b - a.
FiniteRack make_dihedral(int q);
/// Cyclic rack C_n on Z_n: a * b = a + 1.
FiniteRack make_cyclic(int n);
/// Conjugation quandle of a group: a * b = b^{-1} a b.
FiniteRack make_conjugation(const FiniteGroup& g);
/// (t,s)-rack on the ring itself: x * y = t x + s y. Requires t invertible
/// and s(t+s-1) = 0 (the latter throws AxiomViolation when it fails).
FiniteRack make_ts_rack(const PolyQuotientRing& ring, int t, int s);
/// Rack on X^n: every coordinate of the left tuple is hit by
/// *^{e_1} y_{i_1} ... *^{e_m} y_{i_m}. Tuples are encoded by lex_index with
/// radix |X| (first coordinate most significant). Indices are 1-based.
/// The result is re-verified; the exponent/index data always yields a rack.
FiniteRack make_power_rack(const FiniteRack& x, int n, const std::vector<long long>& exponents,
                           const std::vector<int>& indices);

// Rack predicates and invariants.

/// Checks that every S_y is a bijection and that right self-distributivity
/// (x*y)*z = (x*z)*(y*z) holds on all triples.
VerifyReport verify_rack(const FiniteRack& x);
/// True iff x * x = x for all x.
bool is_quandle(const FiniteRack& x);
/// Least n > 0 with a *^n b = a for all a, b: the lcm of the orders of the
/// column permutations S_b.
long long rack_type(const FiniteRack& x);

} // namespace mgr
