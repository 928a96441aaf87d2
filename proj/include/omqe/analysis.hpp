#ifndef OMQE_ANALYSIS_HPP
#define OMQE_ANALYSIS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omqe/model.hpp"
#include "omqe/reasoner.hpp"

namespace omqe {

// Hyperedges over query variables; the index of an edge is its node id in
// a join tree.
using Hypergraph = std::vector<std::vector<Var>>;

struct JoinTree {
    std::size_t nodes = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // undirected, (removed ear, witness)
};

// An atom of the FA-extension: fresh symbol over the extended variable list.
struct ExtAtom {
    std::string symbol;
    std::vector<Var> vars;
    std::size_t origin;  // index of the atom of the base query
};

enum class AnswerMode { Extended, Original };

struct ExtendedQuery {
    CQ base;
    std::vector<ExtAtom> atoms;
    std::vector<Var> extended;  // x̄⁺
    std::vector<Var> answers;   // x̄⁺ or x̄, depending on the mode
    AnswerMode mode = AnswerMode::Extended;

    Hypergraph hypergraph() const;
};

// x̄ followed by the variables reachable from it on functional paths that
// are not already in x̄, in variable order.
std::vector<Var> functional_closure(const Reasoner& r, const CQ& q, const std::vector<Var>& xs);

ExtendedQuery fa_extension(const Reasoner& r, const CQ& q, AnswerMode mode);

// GYO reduction; removes the least ear first (witness: least containing edge).
std::optional<JoinTree> join_tree(const Hypergraph& h);
std::optional<JoinTree> is_acyclic(const CQ& q);
std::optional<JoinTree> is_acyclic(const ExtendedQuery& q);
// Acyclic after adding a head edge over the answer variables (the head is
// the last node of the returned tree).
std::optional<JoinTree> is_free_connex(const CQ& q);
std::optional<JoinTree> is_free_connex(const ExtendedQuery& q);

Hypergraph hypergraph_of(const CQ& q);

// Gaifman graph over variables: adjacency lists, sorted.
std::vector<std::vector<Var>> gaifman(const Hypergraph& h, std::size_t num_vars);
// Shortest chordless cycle of length >= 4 (smallest vertex first), if any.
std::optional<std::vector<Var>> chordless_cycle(const Hypergraph& h, std::size_t num_vars);
// A clique of the Gaifman graph no hyperedge covers, minimal under inclusion.
std::optional<std::vector<Var>> uncovered_clique(const Hypergraph& h, std::size_t num_vars);
// y0 … yk, k >= 2: simple, chordless, endpoints in `answers`, inner vertices not.
std::optional<std::vector<Var>> bad_path(const Hypergraph& h, std::size_t num_vars, const std::vector<Var>& answers);

bool self_join_free(const CQ& q);
bool connected(const CQ& q);

struct Verdict {
    bool base_acyclic = false;
    bool base_free_connex = false;
    bool ext_acyclic = false;        // q⁺(x̄⁺)
    bool ext_free_connex = false;
    bool orig_acyclic = false;       // q⁺(x̄)
    bool orig_free_connex = false;
    bool self_join_free = false;
    bool connected = false;
    bool chordal = false;            // Gaifman graph of q⁺
    bool conformal = false;
    std::optional<std::vector<Var>> cycle;     // witness for non-chordality
    std::optional<std::vector<Var>> clique;    // witness for non-conformality
    std::optional<std::vector<Var>> path;      // bad path of q⁺(x̄⁺)

    bool complete_cdlin = false;     // complete answers: linear preprocessing, constant delay
    bool partial_dlc = false;        // minimal partial answers: constant delay
    std::string complete_note;
    std::string partial_note;
};

Verdict classify(const Reasoner& r, const OMQ& q);

std::string print_extended(const ExtendedQuery& q);
std::string print_verdict(const Verdict& v, const CQ& q);

}  // namespace omqe

#endif
