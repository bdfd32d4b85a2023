#pragma once

#include <string>
#include <vector>

#include "mgr/algebra.hpp"

namespace mgr {

/// G-family of racks: a carrier set {0..n-1} with one binary operation *^g
/// per group element g, each stored as a table.
class GFamily {
public:
    GFamily(int carrier_size, FiniteGroup group, std::vector<SquareTable> ops,
            std::string name = "family");

    int carrier_size() const { return carrier_size_; }
    const FiniteGroup& group() const { return group_; }
    const std::string& name() const { return name_; }

    /// x *^g y.
    int op(int g, int x, int y) const { return ops_[g].at(x, y); }
    const SquareTable& op_table(int g) const { return ops_[g]; }
    SquareTable& mutable_op_table(int g) { return ops_[g]; } // for mutation tests

private:
    int carrier_size_;
    FiniteGroup group_;
    std::vector<SquareTable> ops_;
    std::string name_;
};

/// Multiple group rack: a disjoint union of groups G_0, ..., G_{k-1} with a
/// rack operation on the union. Elements are flattened to {0..|M|-1}
/// component by component; the partial product is defined within components.
class MultipleGroupRack {
public:
    /// Builds the partial product, identities and inverses from the groups;
    /// the rack operation table is taken as given (use verify_mgr to check).
    MultipleGroupRack(std::vector<FiniteGroup> components, SquareTable rack_op,
                      std::string name = "mgr");

    /// A single component G with a * b = b^{-1} a b. Always an MGR (in fact
    /// a multiple conjugation quandle); colorings by it are exactly G-flows.
    static MultipleGroupRack conjugation(const FiniteGroup& g);

    int size() const { return size_; }
    int component_count() const { return static_cast<int>(components_.size()); }
    const FiniteGroup& component(int i) const { return components_[i]; }
    const std::string& name() const { return name_; }

    int component_of(int e) const { return comp_of_[e]; }
    int local_of(int e) const { return local_of_[e]; }
    int element(int comp, int local) const { return offsets_[comp] + local; }
    int identity_of(int comp) const { return element(comp, components_[comp].identity()); }

    /// Product within a component; InvalidOperation across components.
    int product(int a, int b) const;
    /// Group inverse within the element's component.
    int inverse(int a) const;

    int rack_op(int x, int y) const { return op_.at(x, y); }
    /// z with rack_op(z, y) = x; requires every column of the rack table to
    /// be a permutation (always true for genuine MGRs).
    int rack_op_inv(int x, int y) const;

    bool has_inverses() const { return has_inverses_; }
    const SquareTable& rack_table() const { return op_; }
    SquareTable& mutable_rack_table();                    // for mutation tests
    void corrupt_product(int a, int b, int value);        // for mutation tests

private:
    std::vector<FiniteGroup> components_;
    std::vector<int> offsets_;
    std::vector<int> comp_of_;
    std::vector<int> local_of_;
    SquareTable op_;
    SquareTable op_inv_;
    SquareTable product_; // -1 where undefined (cross-component)
    std::vector<int> inverse_;
    bool has_inverses_ = false;
    int size_ = 0;
    std::string name_;

    void rebuild_op_inverse();
};

/// The Z_{type X}-family of racks carried by a finite rack: *^k is the
/// k-fold power operation x *^k y.
GFamily gfamily_from_rack(const FiniteRack& x);

/// Exhaustive check of the two G-family axiom schemes.
VerifyReport verify_gfamily(const GFamily& f);

/// True iff x *^g x = x for all x, g.
bool is_gfamily_of_quandles(const GFamily& f);

/// The associated multiple group rack of F: one copy of G per carrier
/// element, (x,g)*(y,h) = (x *^h y, h^{-1} g h), (x,g)(x,h) = (x, gh).
/// Element (x,g) is flattened to x*|G| + g.
MultipleGroupRack associated_mgr(const GFamily& f);

/// Exhaustive check of the three MGR axiom schemes, including that the two
/// products in (ab)*x = (a*x)(b*x) land in one common component.
VerifyReport verify_mgr(const MultipleGroupRack& m);

/// True iff the within-component operation is conjugation: a*b = b^{-1}ab.
bool is_mcq(const MultipleGroupRack& m);

} // namespace mgr
