#include "mgr/family.hpp"

#include <sstream>

#include "mgr/errors.hpp"

namespace mgr {

// ---------------------------------------------------------------------------
// GFamily

GFamily::GFamily(int carrier_size, FiniteGroup group, std::vector<SquareTable> ops, std::string name)
    : carrier_size_(carrier_size), group_(std::move(group)), ops_(std::move(ops)), name_(std::move(name)) {
    if (carrier_size_ < 1) throw InvalidParameter("family carrier must be non-empty");
    if (static_cast<int>(ops_.size()) != group_.size())
        throw InvalidParameter("family needs one operation table per group element");
    long long cells = static_cast<long long>(group_.size()) * carrier_size_ * carrier_size_;
    if (cells > 256ll * 1024 * 1024) throw InvalidParameter("family tables exceed the memory budget");
    for (const SquareTable& t : ops_) {
        if (t.size() != carrier_size_) throw InvalidParameter("family table has wrong size");
        for (int x = 0; x < carrier_size_; ++x)
            for (int y = 0; y < carrier_size_; ++y)
                if (t.at(x, y) < 0 || t.at(x, y) >= carrier_size_)
                    throw InvalidParameter("family table entry out of range");
    }
}

GFamily gfamily_from_rack(const FiniteRack& x) {
    long long type = rack_type(x);
    if (type > table_cap()) throw InvalidParameter("rack type exceeds table cap");
    const int t = static_cast<int>(type);
    const int n = x.size();
    std::vector<SquareTable> ops;
    ops.reserve(t);
    // *^0 is the identity in the first argument; *^{k+1} = S_y after *^k.
    SquareTable cur(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) cur.set(a, b, a);
    ops.push_back(cur);
    for (int k = 1; k < t; ++k) {
        SquareTable next(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) next.set(a, b, x.op(ops[k - 1].at(a, b), b));
        ops.push_back(std::move(next));
    }
    return GFamily(n, FiniteGroup::cyclic(t), std::move(ops), "Z" + std::to_string(t) + "-family(" + x.name() + ")");
}

VerifyReport verify_gfamily(const GFamily& f) {
    VerifyReport report;
    const int n = f.carrier_size();
    const FiniteGroup& g = f.group();
    const int e = g.identity();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (f.op(e, x, y) != x) {
                std::ostringstream msg;
                msg << "x*^e y != x at (x,y)=(" << x << "," << y << ")";
                report.fail(msg.str());
                return report;
            }
            for (int a = 0; a < g.size(); ++a)
                for (int b = 0; b < g.size(); ++b)
                    if (f.op(g.mul(a, b), x, y) != f.op(b, f.op(a, x, y), y)) {
                        std::ostringstream msg;
                        msg << "x*^{gh}y != (x*^g y)*^h y at (x,y,g,h)=(" << x << "," << y << "," << a
                            << "," << b << ")";
                        report.fail(msg.str());
                        return report;
                    }
        }
    for (int a = 0; a < g.size(); ++a)
        for (int b = 0; b < g.size(); ++b) {
            const int conj = g.mul(g.mul(g.inverse(b), a), b);
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    for (int z = 0; z < n; ++z)
                        if (f.op(b, f.op(a, x, y), z) != f.op(conj, f.op(b, x, z), f.op(b, y, z))) {
                            std::ostringstream msg;
                            msg << "(x*^g y)*^h z != (x*^h z)*^{h^-1 gh}(y*^h z) at (x,y,z,g,h)=(" << x
                                << "," << y << "," << z << "," << a << "," << b << ")";
                            report.fail(msg.str());
                            return report;
                        }
        }
    return report;
}

bool is_gfamily_of_quandles(const GFamily& f) {
    for (int a = 0; a < f.group().size(); ++a)
        for (int x = 0; x < f.carrier_size(); ++x)
            if (f.op(a, x, x) != x) return false;
    return true;
}

// ---------------------------------------------------------------------------
// MultipleGroupRack

MultipleGroupRack::MultipleGroupRack(std::vector<FiniteGroup> components, SquareTable rack_op,
                                     std::string name)
    : components_(std::move(components)), op_(std::move(rack_op)), name_(std::move(name)) {
    if (components_.empty()) throw InvalidParameter("MGR needs at least one component");
    offsets_.reserve(components_.size());
    for (const FiniteGroup& g : components_) {
        offsets_.push_back(size_);
        size_ += g.size();
        if (size_ > table_cap()) throw InvalidParameter("MGR size exceeds table cap");
    }
    comp_of_.resize(size_);
    local_of_.resize(size_);
    for (int c = 0; c < component_count(); ++c)
        for (int l = 0; l < components_[c].size(); ++l) {
            comp_of_[offsets_[c] + l] = c;
            local_of_[offsets_[c] + l] = l;
        }
    if (op_.size() != size_) throw InvalidParameter("MGR rack table has wrong size");
    for (int x = 0; x < size_; ++x)
        for (int y = 0; y < size_; ++y)
            if (op_.at(x, y) < 0 || op_.at(x, y) >= size_)
                throw InvalidParameter("MGR rack table entry out of range");
    product_ = SquareTable(size_, -1);
    inverse_.resize(size_);
    for (int a = 0; a < size_; ++a) {
        const FiniteGroup& g = components_[comp_of_[a]];
        inverse_[a] = element(comp_of_[a], g.inverse(local_of_[a]));
        for (int b = 0; b < size_; ++b)
            if (comp_of_[a] == comp_of_[b])
                product_.set(a, b, element(comp_of_[a], g.mul(local_of_[a], local_of_[b])));
    }
    rebuild_op_inverse();
}

void MultipleGroupRack::rebuild_op_inverse() {
    op_inv_ = SquareTable(size_, -1);
    has_inverses_ = true;
    for (int y = 0; y < size_ && has_inverses_; ++y)
        for (int x = 0; x < size_; ++x) {
            int v = op_.at(x, y);
            if (op_inv_.at(v, y) != -1) {
                has_inverses_ = false;
                break;
            }
            op_inv_.set(v, y, x);
        }
    if (!has_inverses_) op_inv_ = SquareTable();
}

MultipleGroupRack MultipleGroupRack::conjugation(const FiniteGroup& g) {
    const int n = g.size();
    SquareTable op(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) op.set(a, b, g.mul(g.mul(g.inverse(b), a), b));
    return MultipleGroupRack({g}, std::move(op), "ConjMGR(" + g.name() + ")");
}

int MultipleGroupRack::product(int a, int b) const {
    int p = product_.at(a, b);
    if (p < 0) throw InvalidOperation("MGR product across components");
    return p;
}

int MultipleGroupRack::inverse(int a) const { return inverse_[a]; }

int MultipleGroupRack::rack_op_inv(int x, int y) const {
    if (!has_inverses_) throw InvalidOperation("MGR rack table has a non-bijective column");
    return op_inv_.at(x, y);
}

SquareTable& MultipleGroupRack::mutable_rack_table() { return op_; }

void MultipleGroupRack::corrupt_product(int a, int b, int value) {
    product_.set(a, b, value);
}

MultipleGroupRack associated_mgr(const GFamily& f) {
    const int n = f.carrier_size();
    const FiniteGroup& g = f.group();
    const int gs = g.size();
    const long long size = static_cast<long long>(n) * gs;
    if (size > table_cap()) throw InvalidParameter("associated MGR size exceeds table cap");
    SquareTable op(static_cast<int>(size));
    for (int x = 0; x < n; ++x)
        for (int a = 0; a < gs; ++a)
            for (int y = 0; y < n; ++y)
                for (int b = 0; b < gs; ++b) {
                    int xr = f.op(b, x, y);
                    int ar = g.mul(g.mul(g.inverse(b), a), b);
                    op.set(x * gs + a, y * gs + b, xr * gs + ar);
                }
    std::vector<FiniteGroup> components(n, g);
    return MultipleGroupRack(std::move(components), std::move(op), "MGR(" + f.name() + ")");
}

VerifyReport verify_mgr(const MultipleGroupRack& m) {
    VerifyReport report;
    const int n = m.size();
    // x*(ab) = (x*a)*b and x*e = x, for a,b in one component.
    for (int a = 0; a < n; ++a) {
        const int ca = m.component_of(a);
        for (int b = 0; b < n; ++b) {
            if (m.component_of(b) != ca) continue;
            const int ab = m.product(a, b);
            for (int x = 0; x < n; ++x)
                if (m.rack_op(x, ab) != m.rack_op(m.rack_op(x, a), b)) {
                    std::ostringstream msg;
                    msg << "x*(ab) != (x*a)*b at (x,a,b)=(" << x << "," << a << "," << b << ")";
                    report.fail(msg.str());
                    return report;
                }
        }
    }
    for (int c = 0; c < m.component_count(); ++c) {
        const int e = m.identity_of(c);
        for (int x = 0; x < n; ++x)
            if (m.rack_op(x, e) != x) {
                std::ostringstream msg;
                msg << "x*e != x at x=" << x << ", component " << c;
                report.fail(msg.str());
                return report;
            }
    }
    // (x*y)*z = (x*z)*(y*z).
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const int xy = m.rack_op(x, y);
            for (int z = 0; z < n; ++z)
                if (m.rack_op(xy, z) != m.rack_op(m.rack_op(x, z), m.rack_op(y, z))) {
                    std::ostringstream msg;
                    msg << "(x*y)*z != (x*z)*(y*z) at (x,y,z)=(" << x << "," << y << "," << z << ")";
                    report.fail(msg.str());
                    return report;
                }
        }
    // (ab)*x = (a*x)(b*x) with a*x, b*x in one common component.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (m.component_of(a) != m.component_of(b)) continue;
            const int ab = m.product(a, b);
            for (int x = 0; x < n; ++x) {
                const int ax = m.rack_op(a, x), bx = m.rack_op(b, x);
                if (m.component_of(ax) != m.component_of(bx)) {
                    std::ostringstream msg;
                    msg << "a*x and b*x land in different components at (a,b,x)=(" << a << "," << b
                        << "," << x << ")";
                    report.fail(msg.str());
                    return report;
                }
                if (m.rack_op(ab, x) != m.product(ax, bx)) {
                    std::ostringstream msg;
                    msg << "(ab)*x != (a*x)(b*x) at (a,b,x)=(" << a << "," << b << "," << x << ")";
                    report.fail(msg.str());
                    return report;
                }
            }
        }
    return report;
}

bool is_mcq(const MultipleGroupRack& m) {
    for (int a = 0; a < m.size(); ++a)
        for (int b = 0; b < m.size(); ++b) {
            if (m.component_of(a) != m.component_of(b)) continue;
            int conj = m.product(m.product(m.inverse(b), a), b);
            if (m.rack_op(a, b) != conj) return false;
        }
    return true;
}

} // namespace mgr
