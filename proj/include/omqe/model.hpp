#ifndef OMQE_MODEL_HPP
#define OMQE_MODEL_HPP

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <span>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>
#include <absl/hash/hash.h>
#include <utility>
#include <vector>

#include "omqe/symbols.hpp"

namespace omqe {

// ---------------------------------------------------------------------------
// Concepts and ontologies
// ---------------------------------------------------------------------------

struct Concept;
using ConceptPtr = std::shared_ptr<const Concept>;

struct Concept {
    enum class Kind { Top, Name, Conj, Exists };
    Kind kind = Kind::Top;
    Id name = kTop;       // Kind::Name
    RoleId role = 0;      // Kind::Exists
    ConceptPtr left;      // Conj: left conjunct; Exists: filler
    ConceptPtr right;     // Conj: right conjunct

    static ConceptPtr top();
    static ConceptPtr atomic(Id a);
    static ConceptPtr conj(ConceptPtr c, ConceptPtr d);
    static ConceptPtr exists(RoleId r, ConceptPtr c);

    bool is_name_or_top() const { return kind == Kind::Top || kind == Kind::Name; }
    // Concept name id, treating top as kTop.
    Id name_or_top() const { return kind == Kind::Top ? kTop : name; }
};

bool operator==(const Concept& a, const Concept& b);

struct ConceptInclusion {
    ConceptPtr lhs;
    ConceptPtr rhs;
};

struct RoleInclusion {
    RoleId sub;
    RoleId sup;
};

struct Signature {
    std::set<Id> concepts;  // never contains kTop
    std::set<Id> roles;     // role names

    void merge(const Signature& o) {
        concepts.insert(o.concepts.begin(), o.concepts.end());
        roles.insert(o.roles.begin(), o.roles.end());
    }
    bool operator==(const Signature&) const = default;
};

struct Ontology {
    std::vector<ConceptInclusion> cis;
    std::vector<RoleInclusion> ris;
    std::vector<RoleId> funcs;  // declaration order, no duplicates
    bool normalized = false;

    Signature signature() const;
    void add_func(RoleId r);
    std::size_t size() const { return cis.size() + ris.size() + funcs.size(); }
};

// ---------------------------------------------------------------------------
// Databases
// ---------------------------------------------------------------------------

struct UnaryFact {
    Id pred;
    Id c;
    bool operator==(const UnaryFact&) const = default;
};

struct BinaryFact {
    Id role;  // role name, never inverted
    Id a;
    Id b;
    bool operator==(const BinaryFact&) const = default;
};

struct FactHash {
    std::size_t operator()(const UnaryFact& f) const noexcept {
        return absl::Hash<std::pair<Id, Id>>{}({f.pred, f.c});
    }
    std::size_t operator()(const BinaryFact& f) const noexcept {
        return absl::Hash<std::tuple<Id, Id, Id>>{}({f.role, f.a, f.b});
    }
};

class Database {
public:
    // Both return false when the fact was already present.
    bool add_unary(Id pred, Id c);
    bool add_binary(Id role, Id a, Id b);
    void add_all(const Database& other);
    // Room for this many facts in total, avoiding rehashing while growing.
    void reserve(std::size_t unary, std::size_t binary);
    void mark_null(Id c) { nulls_.insert(c); }

    bool has_unary(Id pred, Id c) const { return unary_set_.count({pred, c}) != 0; }
    bool has_binary(Id role, Id a, Id b) const { return binary_set_.count({role, a, b}) != 0; }
    // R(a,b) for a possibly inverted role.
    bool has_role(RoleId r, Id a, Id b) const {
        return is_inverse(r) ? has_binary(role_name(r), b, a) : has_binary(role_name(r), a, b);
    }
    bool is_null(Id c) const { return nulls_.count(c) != 0; }

    const std::vector<UnaryFact>& unary() const { return unary_; }
    const std::vector<BinaryFact>& binary() const { return binary_; }
    const std::unordered_set<Id>& nulls() const { return nulls_; }

    // Active domain in order of first occurrence.
    std::vector<Id> adom() const;
    std::size_t size() const { return unary_.size() + binary_.size(); }
    bool empty() const { return size() == 0; }
    Signature signature() const;

    // Fact sets (order-insensitive).
    bool same_facts(const Database& o) const;

private:
    std::vector<UnaryFact> unary_;
    std::vector<BinaryFact> binary_;
    absl::flat_hash_set<UnaryFact, FactHash> unary_set_;
    absl::flat_hash_set<BinaryFact, FactHash> binary_set_;
    std::unordered_set<Id> nulls_;
};

// Adjacency built once over a database, stored compactly: for every element
// the (role, neighbour) pairs including inverse directions, grouped by role
// (insertion order within a role), plus its concept list.
class RoleIndex {
public:
    using Edge = std::pair<RoleId, Id>;

    explicit RoleIndex(const Database& d);

    std::span<const Id> successors(RoleId r, Id c) const;
    std::span<const Edge> edges(Id c) const;
    std::span<const Id> concepts(Id c) const;

private:
    absl::flat_hash_map<Id, std::uint32_t> local_;
    std::vector<std::uint32_t> edge_start_;     // per local element, size n+1
    std::vector<Edge> edges_;
    std::vector<Id> targets_;                   // edges_[i].second, contiguous
    std::vector<std::uint32_t> concept_start_;  // per local element, size n+1
    std::vector<Id> concepts_;
};

// ---------------------------------------------------------------------------
// Conjunctive queries
// ---------------------------------------------------------------------------

using Var = std::uint32_t;

struct Atom {
    Id pred;       // concept id (unary) or role name (binary)
    bool binary;
    Var x;
    Var y;         // equals x for unary atoms
    bool operator==(const Atom&) const = default;
};

struct CQ {
    std::string head = "q";
    std::vector<std::string> var_names;  // index = variable id, first-occurrence order
    std::vector<Var> answers;
    std::vector<Atom> atoms;

    std::size_t num_vars() const { return var_names.size(); }
    Var var(const std::string& name);  // interns
    Signature signature() const;
    bool is_answer(Var v) const;
};

// ---------------------------------------------------------------------------
// Ontology-mediated queries
// ---------------------------------------------------------------------------

struct OMQ {
    Ontology onto;
    Signature sigma;
    CQ q;

    // Σ := sig(O) ∪ sig(q).
    static OMQ with_full_signature(Ontology o, CQ q);
    // True iff every symbol of d lies in Σ.
    bool accepts(const Database& d) const;
};

}  // namespace omqe

#endif
