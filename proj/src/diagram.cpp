#include "mgr/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "mgr/errors.hpp"

namespace mgr {

int SurfaceDiagram::arc_id(const std::string& name) const {
    auto it = std::find(arc_names.begin(), arc_names.end(), name);
    return it == arc_names.end() ? -1 : static_cast<int>(it - arc_names.begin());
}

// ---------------------------------------------------------------------------
// Parsing and structural validation

namespace {

struct EndUse {
    enum Kind { Free, CrossUnder, VertexEnd, Glued } kind = Free;
    int where = -1; // crossing/vertex/gluing index
};

[[noreturn]] void diagram_error(int line, const std::string& msg) {
    std::ostringstream out;
    if (line > 0) out << "line " << line << ": ";
    out << msg;
    throw ParseError(out.str());
}

struct Builder {
    SurfaceDiagram d;
    std::map<std::string, int> ids;
    std::vector<std::vector<int>> declared_circles;
    std::vector<EndUse> head_use, tail_use;
    std::vector<int> succ; // head(a) -> tail(succ[a]), -1 when open

    int lookup(const std::string& name, int line) {
        auto it = ids.find(name);
        if (it == ids.end()) diagram_error(line, "undeclared arc '" + name + "'");
        return it->second;
    }

    void consume_head(int arc, EndUse use, int line) {
        if (head_use[arc].kind != EndUse::Free)
            diagram_error(line, "head of arc '" + d.arc_names[arc] +
                                    "' used twice; strand orientations are inconsistent "
                                    "(a vertex would be a source or a sink)");
        head_use[arc] = use;
    }
    void consume_tail(int arc, EndUse use, int line) {
        if (tail_use[arc].kind != EndUse::Free)
            diagram_error(line, "tail of arc '" + d.arc_names[arc] +
                                    "' used twice; strand orientations are inconsistent "
                                    "(a vertex would be a source or a sink)");
        tail_use[arc] = use;
    }

    bool has_vertex_end(int arc) const {
        return head_use[arc].kind == EndUse::VertexEnd || tail_use[arc].kind == EndUse::VertexEnd;
    }

    void finalize();
};

void Builder::finalize() {
    const int n = d.arc_count();
    // Explicitly declared circles: consecutive arcs must already chain through
    // a crossing, or get glued here.
    for (const std::vector<int>& circle : declared_circles) {
        const int k = static_cast<int>(circle.size());
        for (int arc : circle)
            if (has_vertex_end(arc))
                diagram_error(0, "arc '" + d.arc_names[arc] +
                                     "' is declared in a circle but ends at a vertex");
        for (int i = 0; i < k; ++i) {
            int a = circle[i], b = circle[(i + 1) % k];
            if (succ[a] == b) continue; // already chained by a crossing
            if (head_use[a].kind == EndUse::Free && tail_use[b].kind == EndUse::Free) {
                head_use[a] = {EndUse::Glued, static_cast<int>(d.gluings.size())};
                tail_use[b] = {EndUse::Glued, static_cast<int>(d.gluings.size())};
                d.gluings.push_back({a, b});
                succ[a] = b;
            } else {
                diagram_error(0, "circle declaration conflicts with the strand structure at arc '" +
                                     d.arc_names[a] + "'");
            }
        }
    }
    // Automatic closure of open chains without vertex ends.
    for (int a = 0; a < n; ++a) {
        if (tail_use[a].kind != EndUse::Free) continue;
        int z = a;
        while (succ[z] != -1) z = succ[z];
        if (head_use[z].kind == EndUse::VertexEnd)
            diagram_error(0, "dangling arc end: tail of '" + d.arc_names[a] + "' is unattached");
        // head of z is free: close the strand into a circle.
        head_use[z] = {EndUse::Glued, static_cast<int>(d.gluings.size())};
        tail_use[a] = {EndUse::Glued, static_cast<int>(d.gluings.size())};
        d.gluings.push_back({z, a});
        succ[z] = a;
    }
    for (int a = 0; a < n; ++a)
        if (head_use[a].kind == EndUse::Free)
            diagram_error(0, "dangling arc end: head of '" + d.arc_names[a] + "' is unattached");
    // Collect circle components: succ-cycles among arcs without vertex ends.
    std::vector<char> visited(n, 0);
    for (int a = 0; a < n; ++a) {
        if (visited[a] || has_vertex_end(a)) continue;
        std::vector<int> cycle;
        int cur = a;
        do {
            visited[cur] = 1;
            cycle.push_back(cur);
            cur = succ[cur];
        } while (cur != a);
        d.circles.push_back(std::move(cycle));
    }
}

} // namespace

SurfaceDiagram parse_diagram(const std::string& text) {
    Builder b;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    struct PendingCrossing {
        std::string over, under_in, under_out;
        int sign, line;
    };
    struct PendingVertex {
        DiagramVertex::Kind kind;
        std::string a, bb, c;
        int line;
    };
    std::vector<PendingCrossing> crossings;
    std::vector<PendingVertex> vertices;
    std::vector<std::pair<std::vector<std::string>, int>> circles;

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string keyword;
        if (!(ls >> keyword)) continue;
        if (keyword == "arc") {
            std::string name;
            if (!(ls >> name)) diagram_error(lineno, "expected 'arc <id>'");
            if (b.ids.count(name)) diagram_error(lineno, "arc '" + name + "' declared twice");
            b.ids[name] = b.d.arc_count();
            b.d.arc_names.push_back(name);
            std::string extra;
            if (ls >> extra) diagram_error(lineno, "trailing tokens after arc declaration");
        } else if (keyword == "circle") {
            std::vector<std::string> names;
            std::string name;
            while (ls >> name) names.push_back(name);
            if (names.empty()) diagram_error(lineno, "expected 'circle <id ...>'");
            circles.push_back({std::move(names), lineno});
        } else if (keyword == "crossing") {
            PendingCrossing c;
            std::string sign;
            if (!(ls >> c.over >> c.under_in >> c.under_out >> sign))
                diagram_error(lineno, "expected 'crossing <over> <under_in> <under_out> <+|->'");
            if (sign == "+")
                c.sign = +1;
            else if (sign == "-")
                c.sign = -1;
            else
                diagram_error(lineno, "crossing sign must be '+' or '-'");
            c.line = lineno;
            crossings.push_back(std::move(c));
        } else if (keyword == "vertex") {
            PendingVertex v;
            std::string kind;
            if (!(ls >> kind >> v.a >> v.bb >> v.c))
                diagram_error(lineno, "expected 'vertex merge|split <arc> <arc> <arc>'");
            if (kind == "merge")
                v.kind = DiagramVertex::Kind::Merge;
            else if (kind == "split")
                v.kind = DiagramVertex::Kind::Split;
            else
                diagram_error(lineno, "vertex kind must be 'merge' or 'split'");
            v.line = lineno;
            vertices.push_back(std::move(v));
        } else {
            diagram_error(lineno, "unknown directive '" + keyword + "'");
        }
    }

    const int n = b.d.arc_count();
    b.head_use.resize(n);
    b.tail_use.resize(n);
    b.succ.assign(n, -1);

    for (const auto& c : crossings) {
        Crossing cr{b.lookup(c.over, c.line), b.lookup(c.under_in, c.line),
                    b.lookup(c.under_out, c.line), c.sign};
        int idx = static_cast<int>(b.d.crossings.size());
        b.consume_head(cr.under_in, {EndUse::CrossUnder, idx}, c.line);
        b.consume_tail(cr.under_out, {EndUse::CrossUnder, idx}, c.line);
        b.succ[cr.under_in] = cr.under_out;
        b.d.crossings.push_back(cr);
    }
    for (const auto& v : vertices) {
        DiagramVertex dv{v.kind, b.lookup(v.a, v.line), b.lookup(v.bb, v.line), b.lookup(v.c, v.line)};
        int idx = static_cast<int>(b.d.vertices.size());
        if (dv.kind == DiagramVertex::Kind::Merge) {
            b.consume_head(dv.a, {EndUse::VertexEnd, idx}, v.line);
            b.consume_head(dv.b, {EndUse::VertexEnd, idx}, v.line);
            b.consume_tail(dv.c, {EndUse::VertexEnd, idx}, v.line);
        } else {
            b.consume_head(dv.a, {EndUse::VertexEnd, idx}, v.line);
            b.consume_tail(dv.b, {EndUse::VertexEnd, idx}, v.line);
            b.consume_tail(dv.c, {EndUse::VertexEnd, idx}, v.line);
        }
        b.d.vertices.push_back(dv);
    }
    for (const auto& [names, line] : circles) {
        std::vector<int> arcs;
        arcs.reserve(names.size());
        for (const std::string& name : names) arcs.push_back(b.lookup(name, line));
        b.declared_circles.push_back(std::move(arcs));
    }
    b.finalize();
    return std::move(b.d);
}

// ---------------------------------------------------------------------------
// Surface statistics

namespace {

/// Strand decomposition: arcs chained through crossings and gluings.
struct Strands {
    // Per strand: ordered arcs; endpoint slots (vertex*3 + position) or -1
    // for circles.
    struct Strand {
        std::vector<int> arcs;
        int start_slot = -1;
        int end_slot = -1;
    };
    std::vector<Strand> strands;
    std::vector<int> strand_of_arc;
};

/// Vertex slot bookkeeping: slot s = 3*vertex + position, position being the
/// index in the (ccw) listed order. Returns per-arc (tail_slot, head_slot),
/// -1 when the end is not at a vertex.
void vertex_slots(const SurfaceDiagram& d, std::vector<int>& tail_slot, std::vector<int>& head_slot) {
    tail_slot.assign(d.arc_count(), -1);
    head_slot.assign(d.arc_count(), -1);
    for (std::size_t v = 0; v < d.vertices.size(); ++v) {
        const DiagramVertex& vx = d.vertices[v];
        const int base = static_cast<int>(v) * 3;
        if (vx.kind == DiagramVertex::Kind::Merge) {
            head_slot[vx.a] = base + 0;
            head_slot[vx.b] = base + 1;
            tail_slot[vx.c] = base + 2;
        } else {
            head_slot[vx.a] = base + 0;
            tail_slot[vx.b] = base + 1;
            tail_slot[vx.c] = base + 2;
        }
    }
}

Strands build_strands(const SurfaceDiagram& d) {
    const int n = d.arc_count();
    std::vector<int> succ(n, -1), pred(n, -1);
    for (const Crossing& c : d.crossings) {
        succ[c.under_in] = c.under_out;
        pred[c.under_out] = c.under_in;
    }
    for (const auto& [a, bb] : d.gluings) {
        succ[a] = bb;
        pred[bb] = a;
    }
    std::vector<int> tail_slot, head_slot;
    vertex_slots(d, tail_slot, head_slot);

    Strands s;
    s.strand_of_arc.assign(n, -1);
    std::vector<char> visited(n, 0);
    // Vertex-to-vertex strands: start from arcs whose tail is at a vertex.
    for (int a = 0; a < n; ++a) {
        if (tail_slot[a] < 0) continue;
        Strands::Strand st;
        st.start_slot = tail_slot[a];
        int cur = a;
        while (true) {
            visited[cur] = 1;
            s.strand_of_arc[cur] = static_cast<int>(s.strands.size());
            st.arcs.push_back(cur);
            if (head_slot[cur] >= 0) {
                st.end_slot = head_slot[cur];
                break;
            }
            cur = succ[cur];
        }
        s.strands.push_back(std::move(st));
    }
    // Remaining strands are circles.
    for (int a = 0; a < n; ++a) {
        if (visited[a]) continue;
        Strands::Strand st;
        int cur = a;
        do {
            visited[cur] = 1;
            s.strand_of_arc[cur] = static_cast<int>(s.strands.size());
            st.arcs.push_back(cur);
            cur = succ[cur];
        } while (cur != a);
        s.strands.push_back(std::move(st));
    }
    return s;
}

} // namespace

std::string SurfaceStats::format() const {
    std::ostringstream out;
    out << "V=" << graph_vertices << " E=" << graph_edges << " chi=" << euler_characteristic
        << " boundary=" << boundary_components << " genus=" << genus;
    return out.str();
}

SurfaceStats surface_stats(const SurfaceDiagram& d) {
    Strands strands = build_strands(d);
    const int nv = static_cast<int>(d.vertices.size());

    std::vector<int> edge_strands; // strands with vertex endpoints
    int circle_count = 0;
    for (std::size_t i = 0; i < strands.strands.size(); ++i) {
        if (strands.strands[i].start_slot >= 0)
            edge_strands.push_back(static_cast<int>(i));
        else
            ++circle_count;
    }
    const int ne = static_cast<int>(edge_strands.size());

    // Darts: 2 per vertex-to-vertex strand. Dart 2k runs start->end of edge
    // k, dart 2k+1 the other way. out_dart[slot] = the dart leaving it.
    std::vector<int> out_dart(3 * nv, -1);
    for (int k = 0; k < ne; ++k) {
        const auto& st = strands.strands[edge_strands[k]];
        out_dart[st.start_slot] = 2 * k;
        out_dart[st.end_slot] = 2 * k + 1;
    }
    auto head_slot_of = [&](int dart) {
        const auto& st = strands.strands[edge_strands[dart / 2]];
        return (dart % 2 == 0) ? st.end_slot : st.start_slot;
    };
    // Boundary walk: from a dart, hop to the far end and leave along the
    // counterclockwise-next slot there.
    auto next_dart = [&](int dart) {
        int slot = head_slot_of(dart);
        int vertex = slot / 3, pos = slot % 3;
        return out_dart[vertex * 3 + (pos + 1) % 3];
    };

    // Connected components of the underlying graph (circles are isolated
    // components; crossings do not connect anything).
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int k = 0; k < ne; ++k) {
        const auto& st = strands.strands[edge_strands[k]];
        parent[find(st.start_slot / 3)] = find(st.end_slot / 3);
    }

    // Boundary components per graph component, via dart orbits.
    std::map<int, int> comp_boundaries, comp_vertices, comp_edges;
    std::vector<char> dart_seen(2 * ne, 0);
    for (int start = 0; start < 2 * ne; ++start) {
        if (dart_seen[start]) continue;
        int cur = start;
        do {
            dart_seen[cur] = 1;
            cur = next_dart(cur);
        } while (cur != start);
        ++comp_boundaries[find(head_slot_of(start) / 3)];
    }
    for (int v = 0; v < nv; ++v) ++comp_vertices[find(v)];
    for (int k = 0; k < ne; ++k) ++comp_edges[find(strands.strands[edge_strands[k]].start_slot / 3)];

    SurfaceStats stats;
    stats.graph_vertices = nv;
    stats.graph_edges = ne + circle_count;
    stats.euler_characteristic = nv - ne; // each circle contributes 0
    stats.boundary_components = 2 * circle_count;
    stats.genus = 0;
    stats.connected_components = static_cast<int>(comp_vertices.size()) + circle_count;
    for (const auto& [root, b] : comp_boundaries) {
        int chi = comp_vertices[root] - comp_edges[root];
        int twice_genus = 2 - chi - b;
        if (twice_genus < 0 || twice_genus % 2 != 0)
            throw InvalidOperation("inconsistent ribbon structure (non-orientable trace)");
        stats.genus += twice_genus / 2;
        stats.boundary_components += b;
    }
    return stats;
}

// ---------------------------------------------------------------------------
// Coloring engines

namespace {

/// Backtracking search over arc colors with unit propagation: a constraint
/// with all but one incident arc colored forces (or refutes) the last one.
/// Values are MGR elements (Mode::Mgr) or family carrier elements together
/// with a fixed flow (Mode::FamilyFlow).
class ColoringEngine {
public:
    enum class Mode { Mgr, FamilyFlow };

    ColoringEngine(const SurfaceDiagram& d, const MultipleGroupRack& m)
        : d_(d), mode_(Mode::Mgr), mgr_(&m), domain_(m.size()) {
        build_constraints();
    }

    ColoringEngine(const SurfaceDiagram& d, const GFamily& f, const Flow& phi)
        : d_(d), mode_(Mode::FamilyFlow), family_(&f), phi_(&phi), domain_(f.carrier_size()) {
        build_constraints();
    }

    long long count() {
        long long total = 0;
        run([&](const std::vector<int>&) { ++total; });
        return total;
    }

    void enumerate(const std::function<void(const std::vector<int>&)>& sink) { run(sink); }

private:
    struct Cons {
        enum Kind { Cross, Product, Equal } kind;
        // Cross: a=over, b=under_in, c=under_out, sign.
        // Product: a*b = c within one component (from merges and splits).
        // Equal: a == b (vertex equalities in family mode, strand gluings).
        int a = -1, b = -1, c = -1, sign = +1;
    };

    const SurfaceDiagram& d_;
    Mode mode_;
    const MultipleGroupRack* mgr_ = nullptr;
    const GFamily* family_ = nullptr;
    const Flow* phi_ = nullptr;
    int domain_;
    std::vector<Cons> cons_;
    std::vector<std::vector<int>> incident_;
    std::vector<int> val_;
    std::vector<int> trail_;

    void add_cons(Cons c) {
        int id = static_cast<int>(cons_.size());
        cons_.push_back(c);
        for (int arc : {c.a, c.b, c.c})
            if (arc >= 0) incident_[arc].push_back(id);
    }

    void build_constraints() {
        incident_.resize(d_.arc_count());
        for (const Crossing& c : d_.crossings)
            add_cons({Cons::Cross, c.over, c.under_in, c.under_out, c.sign});
        for (const DiagramVertex& v : d_.vertices) {
            // merge: in_left * in_right = out; split: out_left * out_right = in.
            int l = (v.kind == DiagramVertex::Kind::Merge) ? v.a : v.b;
            int r = (v.kind == DiagramVertex::Kind::Merge) ? v.b : v.c;
            int o = (v.kind == DiagramVertex::Kind::Merge) ? v.c : v.a;
            if (mode_ == Mode::Mgr) {
                add_cons({Cons::Product, l, r, o, +1});
            } else {
                add_cons({Cons::Equal, l, o, -1, +1});
                add_cons({Cons::Equal, r, o, -1, +1});
            }
        }
        for (const auto& [a, b] : d_.gluings) add_cons({Cons::Equal, a, b, -1, +1});
    }

    bool set(int arc, int value) {
        if (val_[arc] != -1) return val_[arc] == value;
        val_[arc] = value;
        trail_.push_back(arc);
        for (int cid : incident_[arc])
            if (!apply(cons_[cid])) return false;
        return true;
    }

    bool apply(const Cons& c) {
        switch (c.kind) {
        case Cons::Equal: {
            int va = val_[c.a], vb = val_[c.b];
            if (va != -1 && vb != -1) return va == vb;
            if (va != -1) return set(c.b, va);
            if (vb != -1) return set(c.a, vb);
            return true;
        }
        case Cons::Cross:
            return mode_ == Mode::Mgr ? apply_cross_mgr(c) : apply_cross_family(c);
        case Cons::Product:
            return apply_product(c);
        }
        return true;
    }

    bool apply_cross_mgr(const Cons& c) {
        int over = val_[c.a], in = val_[c.b], out = val_[c.c];
        if (over == -1) return true;
        if (in != -1) {
            int expect = (c.sign > 0) ? mgr_->rack_op(in, over) : mgr_->rack_op_inv(in, over);
            return (out != -1) ? out == expect : set(c.c, expect);
        }
        if (out != -1) {
            int expect = (c.sign > 0) ? mgr_->rack_op_inv(out, over) : mgr_->rack_op(out, over);
            return set(c.b, expect);
        }
        return true;
    }

    bool apply_cross_family(const Cons& c) {
        int over = val_[c.a], in = val_[c.b], out = val_[c.c];
        if (over == -1) return true;
        const FiniteGroup& g = family_->group();
        int exp = (*phi_)[c.a];
        if (c.sign < 0) exp = g.inverse(exp);
        if (in != -1) {
            int expect = family_->op(exp, in, over);
            return (out != -1) ? out == expect : set(c.c, expect);
        }
        if (out != -1) return set(c.b, family_->op(g.inverse(exp), out, over));
        return true;
    }

    bool apply_product(const Cons& c) {
        int l = val_[c.a], r = val_[c.b], o = val_[c.c];
        int known = (l != -1) + (r != -1) + (o != -1);
        if (known < 2) return true;
        if (l != -1 && r != -1) {
            if (mgr_->component_of(l) != mgr_->component_of(r)) return false;
            int expect = mgr_->product(l, r);
            return (o != -1) ? o == expect : set(c.c, expect);
        }
        if (o != -1 && r != -1) {
            if (mgr_->component_of(o) != mgr_->component_of(r)) return false;
            return set(c.a, mgr_->product(o, mgr_->inverse(r)));
        }
        // o and l known.
        if (mgr_->component_of(o) != mgr_->component_of(l)) return false;
        return set(c.b, mgr_->product(mgr_->inverse(l), o));
    }

    void run(const std::function<void(const std::vector<int>&)>& sink) {
        val_.assign(d_.arc_count(), -1);
        trail_.clear();
        search(0, sink);
    }

    void search(int from, const std::function<void(const std::vector<int>&)>& sink) {
        int arc = from;
        while (arc < d_.arc_count() && val_[arc] != -1) ++arc;
        if (arc == d_.arc_count()) {
            sink(val_);
            return;
        }
        for (int v = 0; v < domain_; ++v) {
            std::size_t mark = trail_.size();
            if (set(arc, v)) search(arc + 1, sink);
            while (trail_.size() > mark) {
                val_[trail_.back()] = -1;
                trail_.pop_back();
            }
        }
    }
};

} // namespace

std::vector<Flow> enumerate_flows(const SurfaceDiagram& d, const FiniteGroup& g) {
    MultipleGroupRack conj = MultipleGroupRack::conjugation(g);
    std::vector<Flow> flows;
    ColoringEngine engine(d, conj);
    engine.enumerate([&](const std::vector<int>& assignment) { flows.push_back(assignment); });
    return flows;
}

long long count_colorings_mgr(const SurfaceDiagram& d, const MultipleGroupRack& m) {
    ColoringEngine engine(d, m);
    return engine.count();
}

long long count_colorings_for_flow(const SurfaceDiagram& d, const GFamily& f, const Flow& phi) {
    if (static_cast<int>(phi.size()) != d.arc_count())
        throw InvalidParameter("flow does not cover all arcs");
    ColoringEngine engine(d, f, phi);
    return engine.count();
}

CountMultiset count_per_flow(const SurfaceDiagram& d, const GFamily& f, int workers) {
    std::vector<Flow> flows = enumerate_flows(d, f.group());
    std::vector<long long> counts(flows.size());
    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) counts[i] = count_colorings_for_flow(d, f, flows[i]);
    };
    workers = std::max(1, std::min<int>(workers, static_cast<int>(flows.size())));
    if (workers <= 1) {
        run_range(0, flows.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (flows.size() + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            std::size_t begin = w * chunk, end = std::min(flows.size(), begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (std::thread& th : pool) th.join();
    }
    return CountMultiset(std::move(counts));
}

// ---------------------------------------------------------------------------
// Circle reversal

SurfaceDiagram reverse_circle(const SurfaceDiagram& d, int circle_index) {
    if (circle_index < 0 || circle_index >= static_cast<int>(d.circles.size()))
        throw InvalidOperation("no such circle component");
    const std::vector<int>& circle = d.circles[circle_index];
    std::vector<char> in_circle(d.arc_count(), 0);
    for (int arc : circle) in_circle[arc] = 1;

    SurfaceDiagram out = d;
    for (Crossing& c : out.crossings) {
        int flips = 0;
        if (in_circle[c.over]) ++flips;
        if (in_circle[c.under_in]) {
            // under_in and under_out lie on the same strand, so both belong
            // to the reversed circle; the under-passage swaps direction.
            std::swap(c.under_in, c.under_out);
            ++flips;
        }
        if (flips % 2 == 1) c.sign = -c.sign;
    }
    // Gluings inside the circle reverse head/tail roles.
    for (auto& [a, b] : out.gluings)
        if (in_circle[a] && in_circle[b]) std::swap(a, b);
    // Keep the circle's arc list in strand order for the reversed strand.
    std::vector<int>& arcs = out.circles[circle_index];
    std::reverse(arcs.begin() + 1, arcs.end());
    return out;
}

// ---------------------------------------------------------------------------
// Compilation into a constraint system

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

/// Linear form over free flow variables with Z_t coefficients.
struct LinForm {
    std::map<int, int> coeffs; // flow var -> coefficient mod t
    int constant = 0;

    static LinForm var(int v) {
        LinForm f;
        f.coeffs[v] = 1;
        return f;
    }
    LinForm plus(const LinForm& o, int t) const {
        LinForm f = *this;
        for (const auto& [v, c] : o.coeffs) {
            int nc = ((f.coeffs.count(v) ? f.coeffs[v] : 0) + c) % t;
            if (nc == 0)
                f.coeffs.erase(v);
            else
                f.coeffs[v] = nc;
        }
        f.constant = (f.constant + o.constant) % t;
        return f;
    }
    LinForm minus(const LinForm& o, int t) const { return plus(o.scaled(t - 1, t), t); }
    LinForm scaled(int k, int t) const {
        LinForm f;
        for (const auto& [v, c] : coeffs) {
            int nc = c * k % t;
            if (nc != 0) f.coeffs[v] = nc;
        }
        f.constant = constant * k % t;
        return f;
    }
    bool operator==(const LinForm&) const = default;

    GroupWord to_group_word(int t) const {
        GroupWord w;
        w.constant = constant;
        for (const auto& [v, c] : coeffs)
            for (int i = 0; i < c; ++i) w.terms.push_back({v, +1});
        return w;
    }
};

} // namespace

ConstraintSystem diagram_to_system(const SurfaceDiagram& d, const GFamily& f,
                                   const std::string& family_spec) {
    const FiniteGroup& g = f.group();
    if (!g.is_abelian())
        throw InvalidOperation("diagram_to_system requires an abelian (cyclic) flow group");
    const int t = g.size();
    const int n = d.arc_count();

    // Color variables: arcs identified at vertices and gluings.
    UnionFind colors(n);
    for (const DiagramVertex& v : d.vertices) {
        colors.unite(v.a, v.b);
        colors.unite(v.a, v.c);
    }
    for (const auto& [a, b] : d.gluings) colors.unite(a, b);

    // Flow classes: arcs identified under crossings (conjugation is trivial
    // in an abelian group) and gluings.
    UnionFind flows(n);
    for (const Crossing& c : d.crossings) flows.unite(c.under_in, c.under_out);
    for (const auto& [a, b] : d.gluings) flows.unite(a, b);

    // Solve the vertex equations greedily: unknown classes become free
    // variables; residual equations must be identities.
    std::vector<std::optional<LinForm>> form(n);
    std::vector<std::string> flow_names;
    struct VertexEq {
        int out, left, right; // flow(out) = flow(left) + flow(right)
    };
    std::vector<VertexEq> eqs;
    for (const DiagramVertex& v : d.vertices) {
        if (v.kind == DiagramVertex::Kind::Merge)
            eqs.push_back({flows.find(v.c), flows.find(v.a), flows.find(v.b)});
        else
            eqs.push_back({flows.find(v.a), flows.find(v.b), flows.find(v.c)});
    }
    std::vector<int> class_order;
    for (int a = 0; a < n; ++a)
        if (flows.find(a) == a) class_order.push_back(a);

    auto propagate = [&]() {
        bool progress = true;
        while (progress) {
            progress = false;
            for (const VertexEq& eq : eqs) {
                const bool ko = form[eq.out].has_value(), kl = form[eq.left].has_value(),
                           kr = form[eq.right].has_value();
                if (ko + kl + kr != 2) continue;
                if (!ko)
                    form[eq.out] = form[eq.left]->plus(*form[eq.right], t);
                else if (!kl)
                    form[eq.left] = form[eq.out]->minus(*form[eq.right], t);
                else
                    form[eq.right] = form[eq.out]->minus(*form[eq.left], t);
                progress = true;
            }
        }
    };
    propagate();
    for (int cls : class_order) {
        if (form[cls]) continue;
        int var = static_cast<int>(flow_names.size());
        flow_names.push_back("f_" + d.arc_names[cls]);
        form[cls] = LinForm::var(var);
        propagate();
    }
    for (const VertexEq& eq : eqs)
        if (!(*form[eq.out] == form[eq.left]->plus(*form[eq.right], t)))
            throw InvalidOperation(
                "flow space of this diagram is not freely parameterized; the system "
                "format cannot express residual flow relations");

    // Color variable order and names.
    std::vector<int> rep_to_var(n, -1);
    std::vector<std::string> color_names;
    for (int a = 0; a < n; ++a) {
        int rep = colors.find(a);
        if (rep_to_var[rep] == -1) {
            rep_to_var[rep] = static_cast<int>(color_names.size());
            color_names.push_back("x_" + d.arc_names[rep]);
        }
    }

    std::vector<std::pair<RackWord, RackWord>> relations;
    for (const Crossing& c : d.crossings) {
        LinForm exp = *form[flows.find(c.over)];
        GroupWord gw = exp.to_group_word(t);
        if (c.sign < 0) gw = gw.negated();
        RackWord rhs = RackWord::combine(RackWord::leaf(rep_to_var[colors.find(c.under_in)]), gw,
                                         RackWord::leaf(rep_to_var[colors.find(c.over)]));
        relations.push_back({RackWord::leaf(rep_to_var[colors.find(c.under_out)]), std::move(rhs)});
    }

    ConstraintSystem sys{f, t, std::move(flow_names), std::move(color_names), std::move(relations),
                         family_spec};
    return sys;
}

} // namespace mgr
