#ifndef OMQE_REASONER_HPP
#define OMQE_REASONER_HPP

#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container_hash/hash.hpp>

#include "omqe/model.hpp"
#include "omqe/normalize.hpp"

namespace omqe {

// Sorted, duplicate-free sets.
using ConceptType = std::vector<Id>;
using RoleSet = std::vector<RoleId>;

struct SuccessorRequirement {
    RoleSet roles;
    ConceptType target;
    bool operator==(const SuccessorRequirement&) const = default;
};

class Reasoner {
public:
    // Normalizes o when it is not flagged as normalized.
    explicit Reasoner(const Ontology& o);

    const Ontology& ontology() const { return onto_; }
    const NormalAxioms& axioms() const { return ax_; }
    // Roles (both directions) of role names occurring in the ontology.
    const RoleSet& roles() const { return roles_; }
    // Concept names of the normalized ontology (fresh names included).
    const ConceptType& concepts() const { return concepts_; }

    ConceptType entailed_concepts(const ConceptType& m);
    std::vector<SuccessorRequirement> maximal_succs(const ConceptType& m);
    bool entails_succ(const ConceptType& m, const RoleSet& rho, const ConceptType& m2);

    bool entails_func(RoleId r) const;
    bool entails_role_incl(RoleId r, RoleId s) const;
    // {S | r ⊑* S}, sorted, contains r.
    const RoleSet& super_roles(RoleId r) const;
    // Closure of a role set under entailed inclusions.
    RoleSet close_roles(const RoleSet& rho) const;

    // {A2 | ∃S.A1 ⊑ A2, inv(S) ∈ rho, A1 ∈ parent ∪ {top}}: what a node whose
    // parent has type `parent` learns through edges R(parent,node), R ∈ rho.
    ConceptType push(const ConceptType& parent, const RoleSet& rho) const;
    // {A2 | ∃S.A1 ⊑ A2, S ∈ rho, A1 ∈ child ∪ {top}}.
    ConceptType uppush(const ConceptType& child, const RoleSet& rho) const;
    // Local closure under top and conjunction axioms only.
    ConceptType close_local(ConceptType m) const;

    std::size_t context_count() const { return keys_.size(); }

private:
    struct Group {
        RoleSet rho;
        ConceptType targets;
        int child = -1;  // context index, -1 when absorbed
    };
    struct State {
        ConceptType type;
        ConceptType up_concepts;
        RoleSet up_roles;
        std::vector<Group> groups;
        std::vector<int> dependents;
        bool queued = false;
    };
    using Key = std::pair<RoleSet, ConceptType>;

    int context(const RoleSet& rho_in, const ConceptType& seed);
    void evaluate(int i);
    void solve();
    bool absorbed(const Group& g, const RoleSet& rho_in) const;

    Ontology onto_;
    NormalAxioms ax_;
    RoleSet roles_;
    ConceptType concepts_;

    std::unordered_map<Id, std::vector<std::pair<Id, Id>>> conj_by_;  // A -> (partner, rhs)
    std::unordered_map<Id, std::vector<std::pair<RoleId, Id>>> exr_by_;  // A -> (R, B)
    std::unordered_map<RoleId, std::vector<std::pair<Id, Id>>> exl_by_;  // S -> (A1, A2)
    std::unordered_map<RoleId, RoleSet> sup_;
    std::unordered_map<RoleId, bool> func_;

    std::vector<Key> keys_;
    std::vector<State> states_;
    std::unordered_map<Key, int, boost::hash<Key>> index_;
    std::vector<int> work_;

    std::unordered_map<ConceptType, ConceptType, boost::hash<ConceptType>> type_cache_;
    std::unordered_map<ConceptType, std::vector<SuccessorRequirement>, boost::hash<ConceptType>> succ_cache_;
};

// Small sorted-set helpers shared by several modules.
namespace sets {
template <class T>
void normalize(std::vector<T>& v);
template <class T>
std::vector<T> unite(const std::vector<T>& a, const std::vector<T>& b);
template <class T>
bool subset(const std::vector<T>& a, const std::vector<T>& b);
template <class T>
bool contains(const std::vector<T>& a, const T& x);
}  // namespace sets

}  // namespace omqe

#include "omqe/detail/sets.hpp"

#endif
