#ifndef OMQE_ORACLE_HPP
#define OMQE_ORACLE_HPP

#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "omqe/model.hpp"
#include "omqe/reasoner.hpp"
#include "omqe/wildcard.hpp"

namespace omqe {

/*
 * Reference implementations. Nothing here uses the reasoner, the Horn chase,
 * the universal-model builder or the enumeration engine: the oracle runs its
 * own depth-bounded chase (existential rules applied to arbitrary, possibly
 * non-normalized concepts, functionality enforced by merging elements) and
 * its own backtracking homomorphism search. The depth bound is raised until
 * the observed result stops changing.
 */

class InstanceTooLarge : public std::runtime_error {
public:
    explicit InstanceTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct OracleOptions {
    int extra_depth = 2;                  // depth beyond |var(q)| + |concept names|
    int stable_rounds = 2;                // consecutive depths that must agree
    int max_depth = 40;
    std::size_t element_budget = 400000;  // InstanceTooLarge above this
    std::size_t candidate_budget = 200000;
};

using ConstTuple = std::vector<Id>;

// Facts over adom(d) entailed by O and d; nullopt-like flag for unsatisfiable.
struct OracleChase {
    bool satisfiable = true;
    Database facts;  // meaningful only when satisfiable
};
OracleChase oracle_chase(const Ontology& o, const Database& d, const OracleOptions& opt = {});

// {A | D_m, O ⊨ A(c)}.
ConceptType oracle_entailed_concepts(const Ontology& o, const ConceptType& m, const OracleOptions& opt = {});

// Certain answers. Throws std::domain_error when d is unsatisfiable.
std::set<ConstTuple> brute_answers(const OMQ& q, const Database& d, const OracleOptions& opt = {});

// Minimal partial answers by testing every candidate wildcard tuple.
std::set<WildcardTuple> brute_minimal_partial(const OMQ& q, const Database& d, WildcardMode mode,
                                              const OracleOptions& opt = {});
// All partial answers (not only minimal ones).
std::set<WildcardTuple> brute_partial(const OMQ& q, const Database& d, WildcardMode mode,
                                      const OracleOptions& opt = {});

// q(d) over the database itself, no ontology; nulls count as constants.
std::set<ConstTuple> oracle_evaluate(const CQ& q, const Database& d);

// Greatest simulation from I to J as a set of (element of I, element of J).
using Simulation = std::set<std::pair<Id, Id>>;
Simulation greatest_simulation(const Database& i, const Database& j);
bool is_simulation(const Simulation& s, const Database& i, const Database& j);

bool brute_triangle(const std::vector<std::pair<int, int>>& edges);
// A (k+1)-set all of whose k-subsets are hyperedges.
bool brute_hyperclique(const std::vector<std::vector<int>>& hyperedges, int k);
std::set<std::pair<int, int>> brute_mat_product(const std::set<std::pair<int, int>>& m1,
                                                const std::set<std::pair<int, int>>& m2);

}  // namespace omqe

#endif
