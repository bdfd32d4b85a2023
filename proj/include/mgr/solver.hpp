#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mgr/family.hpp"
#include "mgr/multiset.hpp"

namespace mgr {

/// Word in the (additive, cyclic) flow group: signed flow variables plus an
/// integer constant, summed mod t.
struct GroupWord {
    std::vector<std::pair<int, int>> terms; // (flow variable index, +1/-1)
    long long constant = 0;

    int eval(std::span<const int> flow, int modulus) const;
    GroupWord negated() const;
};

/// Rack word over a G-family: leaf = color variable, inner node =
/// (left *^[exponent] right).
struct RackWord {
    struct Node {
        int color_var = -1; // >= 0 for leaves
        int left = -1;
        int right = -1;
        GroupWord exponent;
    };
    std::vector<Node> nodes;
    int root = -1;

    static RackWord leaf(int color_var);
    static RackWord combine(const RackWord& left, GroupWord exponent, const RackWord& right);
    /// Largest color-variable index used, -1 when none.
    int max_color_var() const;
};

/// Flow-parameterized system of rack-word equalities over a G-family with a
/// cyclic flow group Z_t.
struct ConstraintSystem {
    GFamily family;
    int flow_modulus; // |Z_t|, equals family.group().size()
    std::vector<std::string> flow_vars;
    std::vector<std::string> color_vars;
    std::vector<std::pair<RackWord, RackWord>> relations;
    std::string family_spec; // original spec text, kept for formatting
};

/// Parses the line-oriented system format:
///   family <family-spec>
///   group Z <t>
///   flow <idents...>
///   var <idents...>
///   let <ident> = <word>
///   rel <word> = <word>
/// with word := atom | '(' word '*[' gexpr ']' word ')' and gexpr a
/// space-separated sum of signed flow variables and integer constants.
/// Lines starting with '#' are comments. Let-bound names are inlined.
ConstraintSystem parse_system(const std::string& text);

/// Evaluates a rack word; exponent words evaluate in Z_t and select *^g.
int eval_rack_word(const RackWord& w, std::span<const int> colors, std::span<const int> flow,
                   const GFamily& f);

/// For each of the t^{#flow_vars} flow assignments, counts the color
/// assignments satisfying every relation. The flow loop may run on several
/// workers; the result is deterministic.
CountMultiset count_per_flow_system(const ConstraintSystem& s, int workers = 1);

std::string format_word(const RackWord& w, const ConstraintSystem& s);
std::string format_system(const ConstraintSystem& s);

} // namespace mgr
