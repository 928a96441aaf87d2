#ifndef OMQE_HARDNESS_HPP
#define OMQE_HARDNESS_HPP

#include <cstddef>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "omqe/model.hpp"
#include "omqe/reasoner.hpp"

namespace omqe {

/*
 * Databases that encode triangle detection, hyperclique detection and
 * (Boolean) matrix multiplication into the answers of a fixed OMQ. They
 * serve as correctness checks for the classification and as inputs of
 * controllable size for benchmarks.
 *
 * The core part D0 uses constants <x, f> where x is a query variable and f
 * assigns graph vertices (or matrix indexes) to the variables of Y that are
 * reachable from x on a functional path of q. Every core constant then gets
 * copies of pieces of a finite tree D_tree so that the ontology derives at
 * it whatever it could derive anywhere.
 */

class NotApplicable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DepthCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Edge = std::pair<int, int>;
using Hyperedge = std::vector<int>;
using Matrix = std::set<std::pair<int, int>>;  // the 1-entries

// ⟨x, f⟩: f[i] is the value of y_i, defined exactly for y_i ∈ Y_x.
struct AssignmentConstant {
    Var x = 0;
    std::vector<std::optional<int>> f;
    bool operator==(const AssignmentConstant&) const = default;
};

// Canonical name: the variable name followed by "__i-v" for each defined
// position i with value v.
std::string encode(const CQ& q, const AssignmentConstant& c);

// The prefix of D_ω over Σ whose words have length at most `depth`: words
// are reduced (no R directly followed by R⁻), so every node has at most
// one neighbour in each direction and functionality always holds.
struct TreeGadget {
    Database tree;
    std::vector<std::vector<RoleId>> words;  // node i is words[i]; node 0 is ε
    std::vector<Id> nodes;                   // constant of node i
    int depth = 0;

    struct Fragment {
        RoleId role;
        std::vector<std::size_t> members;  // node indexes, ε first
        std::vector<UnaryFact> unary;      // over node indexes
        std::vector<BinaryFact> binary;    // over node indexes
    };
    std::vector<Fragment> fragments;  // D_R for every R over the roles of Σ
};

// Maximum depth tried by build_d_tree: OMQE_DEPTH_CAP when set, else 10.
int depth_cap();

// Smallest depth k >= 1 at which D_tree entails every non-empty concept
// name at ε. Throws DepthCapExceeded.
TreeGadget build_d_tree(Reasoner& r, const Signature& sigma, int cap = depth_cap());

// Copies of D_R glued to c for every R over Σ without an R-edge at c.
void attach_trees(Database& d, const TreeGadget& t, const std::vector<Id>& at);

struct Reduction {
    Database db;
    std::vector<Var> y;                                // Y = y_0 … y_k
    std::unordered_map<Id, AssignmentConstant> core;   // adom(D0)
    std::size_t core_facts = 0;                        // |D0| without the trees
    int tree_depth = 0;
};

// Y_x for every variable of q (indexes into y).
std::vector<std::vector<std::size_t>> reachable_targets(const Reasoner& r, const CQ& q, const std::vector<Var>& y);

// Chordless cycle y_0 … y_k (k >= 3) of the Gaifman graph of q⁺; taken
// from the classification unless given. Throws NotApplicable when q is not
// self-join free and connected, the ontology has role inclusions, or q⁺ is
// chordal.
Reduction gen_triangle_db(Reasoner& r, const OMQ& q, const std::vector<Edge>& g,
                          std::optional<std::vector<Var>> cycle = std::nullopt);

// Y = y_0 … y_k is a clique of q⁺ that no atom covers while every proper
// subset is covered; hyperedges must have k elements. A hyperedge's
// serializations are read as the injective assignments of its vertices to
// the variables of Y an atom sees.
Reduction gen_hyperclique_db(Reasoner& r, const OMQ& q, const std::vector<Hyperedge>& h,
                             std::optional<std::vector<Var>> clique = std::nullopt);

// Needs q⁺(x̄⁺) acyclic but not free-connex; y_0 … y_k is a bad path.
struct MMReduction : Reduction {
    std::size_t first = 0;   // answer position whose variable reaches y_0
    std::size_t second = 0;  // answer position whose variable reaches y_k
};
MMReduction gen_mm_db(Reasoner& r, const OMQ& q, const Matrix& m1, const Matrix& m2,
                      std::optional<std::vector<Var>> path = std::nullopt);

// (f_{x1}(y_0), f_{x2}(y_k)) when both positions hold core constants.
std::optional<std::pair<int, int>> extract_entry(const MMReduction& m, const std::vector<Id>& answer);

// O = {A ⊑ ∃f⁻.⊤, func(f)}, q(x,z,y) :- r1(x,u1), f(z,u1), f(z,u2), r2(u2,y).
OMQ bmm_omq();
struct BmmInstance {
    OMQ omq;
    Database db;
};
// r1(a,c), A(c) for (a,c) ∈ M1; r2(c,b), A(c) for (c,b) ∈ M2.
BmmInstance gen_bmm_instance(const Matrix& m1, const Matrix& m2);

// n×n matrix, each entry set with the given probability.
Matrix random_matrix(std::mt19937_64& rng, int n, double density);

// Text inputs: one edge / hyperedge per line as integers; matrices as
// "<1|2> <row> <column>". '#' starts a comment.
std::vector<std::vector<int>> parse_int_rows(std::string_view text);
std::pair<Matrix, Matrix> parse_matrices(std::string_view text);

}  // namespace omqe

#endif
