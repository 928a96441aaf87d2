#ifndef OMQE_UMODEL_HPP
#define OMQE_UMODEL_HPP

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "omqe/chase.hpp"
#include "omqe/model.hpp"
#include "omqe/reasoner.hpp"

namespace omqe {

// c ρ1 M1 … ρn Mn. The origin is a constant of the database.
struct Trace {
    Id origin = 0;
    std::vector<std::pair<RoleSet, ConceptType>> steps;

    std::size_t length() const { return steps.size(); }
    bool operator==(const Trace&) const = default;
};

inline constexpr Id kNoOrigin = std::numeric_limits<Id>::max();

// Where an anonymous element came from.
struct NullInfo {
    Id origin = kNoOrigin;  // database constant at the root of its tree; kNoOrigin for detached copies
    Id parent = kNoOrigin;  // kNoOrigin for the root of a detached copy
    RoleSet rho;            // roles from parent to this element
    ConceptType type;
    int depth = 0;          // distance from the tree root
    int kind = -1;          // detached copies: index of the copied kind; -1 otherwise
};

struct UniversalModel {
    Database facts;                               // includes the chase of the input
    std::vector<Id> constants;                    // adom of the input database
    absl::flat_hash_map<Id, NullInfo> provenance;  // one entry per null
    int depth = 0;                                // trace length bound used for attached trees
    int copy_depth = 0;                           // depth bound inside detached copies

    bool is_null(Id e) const { return provenance.count(e) > 0; }
};

class MalformedWitness : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModelTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultFactBudget = 20'000'000;

// One-step extensions of t. `chased` must be ch(D) for the database the
// trace refers to.
std::vector<Trace> trace_successors(Reasoner& r, const Database& chased, const Trace& t);

// ch(D) plus every trace of length at most `depth`. Throws Unsatisfiable.
UniversalModel build_universal(Reasoner& r, const Database& d, int depth,
                               std::size_t fact_budget = kDefaultFactBudget);

// U_{D,Q}: attached trees of depth |var(q)| and one detached copy per kind of
// tree node (see the implementation notes). Throws Unsatisfiable.
UniversalModel build_u_dq(Reasoner& r, const Database& d, const CQ& q,
                          std::size_t fact_budget = kDefaultFactBudget);

// Every piece has exactly one null-free fact; null sets are pairwise disjoint.
std::vector<Database> witness_decomposition(const UniversalModel& u);

// Boolean tree CQs with at most n variables over the given signature that
// satisfy the functionality assertions of o, one per isomorphism class.
// Throws ModelTooLarge once more than `budget` queries would be produced.
std::vector<CQ> cl_q(const Ontology& o, const Signature& sig, int n, std::size_t budget = 1'000'000);

// Canonical code of a tree CQ; equal codes iff isomorphic. Requires a tree.
std::string tree_code(const CQ& p);

}  // namespace omqe

#endif
