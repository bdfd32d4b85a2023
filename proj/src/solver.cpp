#include "mgr/solver.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "mgr/errors.hpp"
#include "mgr/specparse.hpp"
#include "mgr/util.hpp"

namespace mgr {

// ---------------------------------------------------------------------------
// Words

int GroupWord::eval(std::span<const int> flow, int modulus) const {
    long long sum = constant;
    for (const auto& [var, sign] : terms) sum += sign * flow[var];
    return static_cast<int>(((sum % modulus) + modulus) % modulus);
}

GroupWord GroupWord::negated() const {
    GroupWord out;
    out.constant = -constant;
    out.terms.reserve(terms.size());
    for (const auto& [var, sign] : terms) out.terms.push_back({var, -sign});
    return out;
}

RackWord RackWord::leaf(int color_var) {
    RackWord w;
    w.nodes.push_back({color_var, -1, -1, {}});
    w.root = 0;
    return w;
}

RackWord RackWord::combine(const RackWord& left, GroupWord exponent, const RackWord& right) {
    RackWord w = left;
    const int offset = static_cast<int>(w.nodes.size());
    for (Node node : right.nodes) {
        if (node.color_var < 0) {
            node.left += offset;
            node.right += offset;
        }
        w.nodes.push_back(std::move(node));
    }
    w.nodes.push_back({-1, left.root, right.root + offset, std::move(exponent)});
    w.root = static_cast<int>(w.nodes.size()) - 1;
    return w;
}

int RackWord::max_color_var() const {
    int mx = -1;
    for (const Node& n : nodes) mx = std::max(mx, n.color_var);
    return mx;
}

int eval_rack_word(const RackWord& w, std::span<const int> colors, std::span<const int> flow,
                   const GFamily& f) {
    const int modulus = f.group().size();
    // Nodes are built bottom-up, so children always precede parents.
    std::vector<int> value(w.nodes.size());
    for (std::size_t i = 0; i < w.nodes.size(); ++i) {
        const RackWord::Node& n = w.nodes[i];
        if (n.color_var >= 0)
            value[i] = colors[n.color_var];
        else
            value[i] = f.op(n.exponent.eval(flow, modulus), value[n.left], value[n.right]);
    }
    return value[w.root];
}

// ---------------------------------------------------------------------------
// System file parser

namespace {

struct Token {
    enum Kind { LParen, RParen, StarL, RBrack, Ident, Int, Minus, Plus, Eq };
    Kind kind;
    std::string text;
    long long value = 0;
    int col = 0;
};

[[noreturn]] void syntax_error(int line, int col, const std::string& msg) {
    std::ostringstream out;
    out << "line " << line << ", column " << col << ": " << msg;
    throw ParseError(out.str());
}

std::vector<Token> lex_line(const std::string& line, int lineno) {
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        int col = static_cast<int>(i) + 1;
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '(') {
            toks.push_back({Token::LParen, "(", 0, col});
            ++i;
        } else if (c == ')') {
            toks.push_back({Token::RParen, ")", 0, col});
            ++i;
        } else if (c == ']') {
            toks.push_back({Token::RBrack, "]", 0, col});
            ++i;
        } else if (c == '=') {
            toks.push_back({Token::Eq, "=", 0, col});
            ++i;
        } else if (c == '-') {
            toks.push_back({Token::Minus, "-", 0, col});
            ++i;
        } else if (c == '+') {
            toks.push_back({Token::Plus, "+", 0, col});
            ++i;
        } else if (c == '*') {
            if (i + 1 >= line.size() || line[i + 1] != '[')
                syntax_error(lineno, col, "expected '*[' to open an exponent");
            toks.push_back({Token::StarL, "*[", 0, col});
            i += 2;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
            Token t{Token::Int, line.substr(i, j - i), 0, col};
            t.value = std::stoll(t.text);
            toks.push_back(std::move(t));
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < line.size() &&
                   (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
                ++j;
            toks.push_back({Token::Ident, line.substr(i, j - i), 0, col});
            i = j;
        } else {
            syntax_error(lineno, col, std::string("unexpected character '") + c + "'");
        }
    }
    return toks;
}

struct WordParser {
    const std::vector<Token>& toks;
    std::size_t pos = 0;
    int lineno;
    const std::map<std::string, int>& flow_vars;
    const std::map<std::string, int>& color_vars;
    const std::map<std::string, RackWord>& lets;

    const Token& peek() const {
        if (pos >= toks.size()) syntax_error(lineno, -1, "unexpected end of line");
        return toks[pos];
    }
    const Token& next() {
        const Token& t = peek();
        ++pos;
        return t;
    }
    bool done() const { return pos >= toks.size(); }

    GroupWord parse_gexpr() {
        GroupWord w;
        while (peek().kind != Token::RBrack) {
            int sign = 1;
            if (peek().kind == Token::Minus) {
                sign = -1;
                next();
            } else if (peek().kind == Token::Plus) {
                next();
            }
            const Token& t = next();
            if (t.kind == Token::Int) {
                w.constant += sign * t.value;
            } else if (t.kind == Token::Ident) {
                auto it = flow_vars.find(t.text);
                if (it == flow_vars.end())
                    syntax_error(lineno, t.col, "undeclared flow variable '" + t.text + "'");
                w.terms.push_back({it->second, sign});
            } else {
                syntax_error(lineno, t.col, "expected a flow variable or integer in exponent");
            }
        }
        next(); // consume ']'
        return w;
    }

    RackWord parse_word() {
        const Token& t = next();
        if (t.kind == Token::Ident) {
            if (auto it = color_vars.find(t.text); it != color_vars.end())
                return RackWord::leaf(it->second);
            if (auto it = lets.find(t.text); it != lets.end()) return it->second;
            syntax_error(lineno, t.col, "undeclared color variable '" + t.text + "'");
        }
        if (t.kind != Token::LParen) syntax_error(lineno, t.col, "expected a variable or '('");
        RackWord left = parse_word();
        const Token& star = next();
        if (star.kind != Token::StarL) syntax_error(lineno, star.col, "expected '*['");
        GroupWord exp = parse_gexpr();
        RackWord right = parse_word();
        const Token& close = next();
        if (close.kind != Token::RParen) syntax_error(lineno, close.col, "expected ')'");
        return RackWord::combine(left, std::move(exp), right);
    }
};

} // namespace

ConstraintSystem parse_system(const std::string& text) {
    std::optional<GFamily> family;
    std::string family_spec;
    std::optional<int> declared_modulus;
    std::vector<std::string> flow_names, color_names;
    std::map<std::string, int> flow_vars, color_vars;
    std::map<std::string, RackWord> lets;
    std::vector<std::pair<RackWord, RackWord>> relations;

    auto check_fresh = [&](const std::string& name, int lineno) {
        if (flow_vars.count(name) || color_vars.count(name) || lets.count(name))
            syntax_error(lineno, -1, "name '" + name + "' already declared");
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string keyword;
        if (!(ls >> keyword) || keyword[0] == '#') continue;
        if (keyword == "family") {
            if (family) syntax_error(lineno, 1, "duplicate family line");
            std::string rest;
            std::getline(ls, rest);
            auto hash = rest.find('#');
            if (hash != std::string::npos) rest.erase(hash);
            family_spec = rest;
            while (!family_spec.empty() && std::isspace(static_cast<unsigned char>(family_spec.front())))
                family_spec.erase(family_spec.begin());
            while (!family_spec.empty() && std::isspace(static_cast<unsigned char>(family_spec.back())))
                family_spec.pop_back();
            try {
                family = parse_family_spec(family_spec);
            } catch (const std::exception& e) {
                syntax_error(lineno, 1, std::string("bad family spec: ") + e.what());
            }
        } else if (keyword == "group") {
            std::string z;
            int t = 0;
            if (!(ls >> z >> t) || z != "Z" || t < 1)
                syntax_error(lineno, 1, "expected 'group Z <t>'");
            declared_modulus = t;
        } else if (keyword == "flow" || keyword == "var") {
            std::string name;
            while (ls >> name) {
                if (name[0] == '#') break;
                check_fresh(name, lineno);
                if (keyword == "flow") {
                    flow_vars[name] = static_cast<int>(flow_names.size());
                    flow_names.push_back(name);
                } else {
                    color_vars[name] = static_cast<int>(color_names.size());
                    color_names.push_back(name);
                }
            }
        } else if (keyword == "let" || keyword == "rel") {
            auto toks = lex_line(line, lineno);
            // Skip the keyword identifier itself.
            std::vector<Token> body(toks.begin() + 1, toks.end());
            if (keyword == "let") {
                if (body.size() < 2 || body[0].kind != Token::Ident || body[1].kind != Token::Eq)
                    syntax_error(lineno, 1, "expected 'let <name> = <word>'");
                std::string name = body[0].text;
                check_fresh(name, lineno);
                std::vector<Token> word_toks(body.begin() + 2, body.end());
                WordParser p{word_toks, 0, lineno, flow_vars, color_vars, lets};
                RackWord w = p.parse_word();
                if (!p.done()) syntax_error(lineno, p.peek().col, "trailing tokens after word");
                lets.emplace(std::move(name), std::move(w));
            } else {
                // Split at the top-level '='.
                int depth = 0;
                std::size_t eq = body.size();
                for (std::size_t i = 0; i < body.size(); ++i) {
                    if (body[i].kind == Token::LParen) ++depth;
                    if (body[i].kind == Token::RParen) --depth;
                    if (body[i].kind == Token::Eq && depth == 0) {
                        eq = i;
                        break;
                    }
                }
                if (eq == body.size()) syntax_error(lineno, 1, "relation lacks '='");
                std::vector<Token> lhs_toks(body.begin(), body.begin() + eq);
                std::vector<Token> rhs_toks(body.begin() + eq + 1, body.end());
                WordParser pl{lhs_toks, 0, lineno, flow_vars, color_vars, lets};
                RackWord lhs = pl.parse_word();
                if (!pl.done()) syntax_error(lineno, pl.peek().col, "trailing tokens after word");
                WordParser pr{rhs_toks, 0, lineno, flow_vars, color_vars, lets};
                RackWord rhs = pr.parse_word();
                if (!pr.done()) syntax_error(lineno, pr.peek().col, "trailing tokens after word");
                relations.push_back({std::move(lhs), std::move(rhs)});
            }
        } else {
            syntax_error(lineno, 1, "unknown directive '" + keyword + "'");
        }
    }
    if (!family) throw ParseError("system lacks a family line");
    if (declared_modulus && *declared_modulus != family->group().size()) {
        std::ostringstream msg;
        msg << "declared flow group Z" << *declared_modulus << " does not match the family's group Z"
            << family->group().size();
        throw ParseError(msg.str());
    }
    ConstraintSystem sys{std::move(*family), 0, std::move(flow_names), std::move(color_names),
                         std::move(relations), std::move(family_spec)};
    sys.flow_modulus = sys.family.group().size();
    return sys;
}

// ---------------------------------------------------------------------------
// Counting

namespace {

/// Postorder program for one side of a relation; exponents are resolved per
/// flow into a shared slot array.
struct Program {
    struct Instr {
        int color_var;  // >= 0: push colors[color_var]
        int exp_slot;   // otherwise: pop right, pop left, push op(g, l, r)
    };
    std::vector<Instr> instrs;

    int eval(const GFamily& f, std::span<const int> colors, std::span<const int> gvals,
             std::vector<int>& stack) const {
        stack.clear();
        for (const Instr& ins : instrs) {
            if (ins.color_var >= 0) {
                stack.push_back(colors[ins.color_var]);
            } else {
                int r = stack.back();
                stack.pop_back();
                int l = stack.back();
                stack.pop_back();
                stack.push_back(f.op(gvals[ins.exp_slot], l, r));
            }
        }
        return stack.back();
    }
};

struct CompiledRelation {
    Program lhs, rhs;
    int last_var; // largest color variable index used
};

struct CompiledSystem {
    std::vector<GroupWord> exponents;
    std::vector<CompiledRelation> relations;
    std::vector<std::vector<int>> by_last_var; // relation ids, grouped by last_var
};

Program compile_word(const RackWord& w, std::vector<GroupWord>& exponents) {
    Program prog;
    // Emit postorder via explicit stack.
    std::vector<std::pair<int, bool>> work{{w.root, false}};
    while (!work.empty()) {
        auto [idx, expanded] = work.back();
        work.pop_back();
        const RackWord::Node& n = w.nodes[idx];
        if (n.color_var >= 0) {
            prog.instrs.push_back({n.color_var, -1});
        } else if (!expanded) {
            work.push_back({idx, true});
            work.push_back({n.right, false});
            work.push_back({n.left, false});
        } else {
            exponents.push_back(n.exponent);
            prog.instrs.push_back({-1, static_cast<int>(exponents.size()) - 1});
        }
    }
    return prog;
}

CompiledSystem compile_system(const ConstraintSystem& s) {
    CompiledSystem cs;
    cs.by_last_var.resize(s.color_vars.size());
    for (const auto& [lhs, rhs] : s.relations) {
        CompiledRelation rel{compile_word(lhs, cs.exponents), compile_word(rhs, cs.exponents),
                             std::max(lhs.max_color_var(), rhs.max_color_var())};
        if (rel.last_var < 0 || rel.last_var >= static_cast<int>(s.color_vars.size()))
            throw InvalidOperation("relation uses an out-of-range color variable");
        cs.by_last_var[rel.last_var].push_back(static_cast<int>(cs.relations.size()));
        cs.relations.push_back(std::move(rel));
    }
    return cs;
}

/// Backtracking over color variables in declaration order; each relation is
/// checked as soon as its last variable is bound.
long long count_colors(const ConstraintSystem& s, const CompiledSystem& cs,
                       std::span<const int> gvals) {
    const int nvars = static_cast<int>(s.color_vars.size());
    const int domain = s.family.carrier_size();
    if (nvars == 0) return 1; // only the empty assignment, and relations need variables
    std::vector<int> colors(nvars, 0);
    std::vector<int> stack;
    long long found = 0;
    int depth = 0;
    std::vector<int> choice(nvars, 0);
    while (depth >= 0) {
        if (choice[depth] == domain) {
            choice[depth] = 0;
            --depth;
            if (depth >= 0) ++choice[depth];
            continue;
        }
        colors[depth] = choice[depth];
        bool ok = true;
        for (int rel_id : cs.by_last_var[depth]) {
            const CompiledRelation& rel = cs.relations[rel_id];
            if (rel.lhs.eval(s.family, colors, gvals, stack) !=
                rel.rhs.eval(s.family, colors, gvals, stack)) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            ++choice[depth];
            continue;
        }
        if (depth == nvars - 1) {
            ++found;
            ++choice[depth];
        } else {
            ++depth;
        }
    }
    return found;
}

} // namespace

CountMultiset count_per_flow_system(const ConstraintSystem& s, int workers) {
    const int t = s.flow_modulus;
    const int f = static_cast<int>(s.flow_vars.size());
    long long total = 1;
    for (int i = 0; i < f; ++i) {
        total *= t;
        if (total > 100'000'000) throw InvalidParameter("flow space too large to enumerate");
    }
    CompiledSystem cs = compile_system(s);
    std::vector<long long> counts(total);

    auto run_range = [&](long long begin, long long end) {
        std::vector<int> flow(f);
        std::vector<int> gvals(cs.exponents.size());
        for (long long idx = begin; idx < end; ++idx) {
            flow = lex_digits(idx, t, f);
            for (std::size_t e = 0; e < cs.exponents.size(); ++e)
                gvals[e] = cs.exponents[e].eval(flow, t);
            counts[idx] = count_colors(s, cs, gvals);
        }
    };

    workers = std::max(1, std::min<int>(workers, static_cast<int>(total)));
    if (workers == 1) {
        run_range(0, total);
    } else {
        std::vector<std::thread> pool;
        long long chunk = (total + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            long long begin = w * chunk, end = std::min(total, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (std::thread& th : pool) th.join();
    }
    return CountMultiset(std::move(counts));
}

// ---------------------------------------------------------------------------
// Formatting

namespace {

std::string format_gexpr(const GroupWord& w, const ConstraintSystem& s) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [var, sign] : w.terms) {
        if (!first) out << ' ';
        if (sign < 0) out << '-';
        out << s.flow_vars[var];
        first = false;
    }
    if (w.constant != 0 || first) {
        if (!first) out << ' ';
        out << w.constant;
    }
    return out.str();
}

std::string format_node(const RackWord& w, int idx, const ConstraintSystem& s) {
    const RackWord::Node& n = w.nodes[idx];
    if (n.color_var >= 0) return s.color_vars[n.color_var];
    return "(" + format_node(w, n.left, s) + " *[" + format_gexpr(n.exponent, s) + "] " +
           format_node(w, n.right, s) + ")";
}

} // namespace

std::string format_word(const RackWord& w, const ConstraintSystem& s) {
    return format_node(w, w.root, s);
}

std::string format_system(const ConstraintSystem& s) {
    std::ostringstream out;
    out << "family " << s.family_spec << '\n';
    out << "group Z " << s.flow_modulus << '\n';
    if (!s.flow_vars.empty()) {
        out << "flow";
        for (const std::string& v : s.flow_vars) out << ' ' << v;
        out << '\n';
    }
    if (!s.color_vars.empty()) {
        out << "var";
        for (const std::string& v : s.color_vars) out << ' ' << v;
        out << '\n';
    }
    for (const auto& [lhs, rhs] : s.relations)
        out << "rel " << format_word(lhs, s) << " = " << format_word(rhs, s) << '\n';
    return out.str();
}

} // namespace mgr
