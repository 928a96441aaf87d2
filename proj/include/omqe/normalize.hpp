#ifndef OMQE_NORMALIZE_HPP
#define OMQE_NORMALIZE_HPP

#include <vector>

#include "omqe/model.hpp"

namespace omqe {

/*
 * Normal-form shapes of concept inclusions:
 *   top ⊑ A,   A1 ⊑ A,   A1 ⊓ A2 ⊑ A,   A1 ⊑ ∃R.A2,   ∃R.A1 ⊑ A2
 * where A2 on an existential right-hand side and A1 under an existential on
 * the left may be top. Fresh names start with "_N".
 */
Ontology normalize(const Ontology& o);

enum class NormalShape { TopIncl, Conj, ExistsRhs, ExistsLhs, NotNormal };
NormalShape shape_of(const ConceptInclusion& ci);

// Flat view of a normalized ontology.
struct NormalAxioms {
    struct Conj {
        Id a1;
        Id a2;  // == a1 for the single-name case
        Id rhs;
    };
    struct ExistsRhs {
        Id lhs;
        RoleId role;
        Id filler;  // may be kTop
    };
    struct ExistsLhs {
        RoleId role;
        Id filler;  // may be kTop
        Id rhs;
    };
    std::vector<Id> top_incl;
    std::vector<Conj> conj;
    std::vector<ExistsRhs> ex_rhs;
    std::vector<ExistsLhs> ex_lhs;
};

// Throws std::invalid_argument when some axiom is not in normal form.
NormalAxioms flatten(const Ontology& normalized);

}  // namespace omqe

#endif
