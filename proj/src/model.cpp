#include "omqe/model.hpp"

#include <algorithm>

namespace omqe {

ConceptPtr Concept::top() {
    static const ConceptPtr t = std::make_shared<Concept>();
    return t;
}

ConceptPtr Concept::atomic(Id a) {
    if (a == kTop) return top();
    auto c = std::make_shared<Concept>();
    c->kind = Kind::Name;
    c->name = a;
    return c;
}

ConceptPtr Concept::conj(ConceptPtr l, ConceptPtr r) {
    auto c = std::make_shared<Concept>();
    c->kind = Kind::Conj;
    c->left = std::move(l);
    c->right = std::move(r);
    return c;
}

ConceptPtr Concept::exists(RoleId role, ConceptPtr filler) {
    auto c = std::make_shared<Concept>();
    c->kind = Kind::Exists;
    c->role = role;
    c->left = std::move(filler);
    return c;
}

bool operator==(const Concept& a, const Concept& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Concept::Kind::Top: return true;
        case Concept::Kind::Name: return a.name == b.name;
        case Concept::Kind::Conj: return *a.left == *b.left && *a.right == *b.right;
        case Concept::Kind::Exists: return a.role == b.role && *a.left == *b.left;
    }
    return false;
}

namespace {
void collect(const Concept& c, Signature& s) {
    switch (c.kind) {
        case Concept::Kind::Top: break;
        case Concept::Kind::Name: s.concepts.insert(c.name); break;
        case Concept::Kind::Conj:
            collect(*c.left, s);
            collect(*c.right, s);
            break;
        case Concept::Kind::Exists:
            s.roles.insert(role_name(c.role));
            collect(*c.left, s);
            break;
    }
}
}  // namespace

Signature Ontology::signature() const {
    Signature s;
    for (const auto& ci : cis) {
        collect(*ci.lhs, s);
        collect(*ci.rhs, s);
    }
    for (const auto& ri : ris) {
        s.roles.insert(role_name(ri.sub));
        s.roles.insert(role_name(ri.sup));
    }
    for (RoleId r : funcs) s.roles.insert(role_name(r));
    return s;
}

void Ontology::add_func(RoleId r) {
    if (std::find(funcs.begin(), funcs.end(), r) == funcs.end()) funcs.push_back(r);
}

// ---------------------------------------------------------------------------

bool Database::add_unary(Id pred, Id c) {
    UnaryFact f{pred, c};
    if (!unary_set_.insert(f).second) return false;
    unary_.push_back(f);
    return true;
}

bool Database::add_binary(Id role, Id a, Id b) {
    BinaryFact f{role, a, b};
    if (!binary_set_.insert(f).second) return false;
    binary_.push_back(f);
    return true;
}

void Database::reserve(std::size_t unary, std::size_t binary) {
    unary_.reserve(unary);
    binary_.reserve(binary);
    unary_set_.reserve(unary);
    binary_set_.reserve(binary);
}

void Database::add_all(const Database& other) {
    for (const auto& f : other.unary_) add_unary(f.pred, f.c);
    for (const auto& f : other.binary_) add_binary(f.role, f.a, f.b);
    nulls_.insert(other.nulls_.begin(), other.nulls_.end());
}

std::vector<Id> Database::adom() const {
    std::vector<Id> out;
    absl::flat_hash_set<Id> seen;
    seen.reserve(unary_.size() + 2 * binary_.size());
    auto see = [&](Id c) {
        if (seen.insert(c).second) out.push_back(c);
    };
    // Interleave in insertion order is not recoverable across the two lists;
    // unary facts first keeps the order deterministic.
    for (const auto& f : unary_) see(f.c);
    for (const auto& f : binary_) {
        see(f.a);
        see(f.b);
    }
    return out;
}

Signature Database::signature() const {
    Signature s;
    for (const auto& f : unary_)
        if (f.pred != kTop) s.concepts.insert(f.pred);
    for (const auto& f : binary_) s.roles.insert(f.role);
    return s;
}

bool Database::same_facts(const Database& o) const {
    if (unary_.size() != o.unary_.size() || binary_.size() != o.binary_.size()) return false;
    for (const auto& f : unary_)
        if (!o.has_unary(f.pred, f.c)) return false;
    for (const auto& f : binary_)
        if (!o.has_binary(f.role, f.a, f.b)) return false;
    return true;
}

// ---------------------------------------------------------------------------

RoleIndex::RoleIndex(const Database& d) {
    const auto& bin = d.binary();
    const auto& un = d.unary();
    local_.reserve(2 * bin.size() + un.size());
    auto slot = [&](Id c) { return local_.try_emplace(c, static_cast<std::uint32_t>(local_.size())).first->second; };
    std::vector<std::uint32_t> from(2 * bin.size()), cfrom(un.size());
    for (std::size_t i = 0; i < bin.size(); ++i) {
        from[2 * i] = slot(bin[i].a);
        from[2 * i + 1] = slot(bin[i].b);
    }
    for (std::size_t i = 0; i < un.size(); ++i) cfrom[i] = slot(un[i].c);
    const std::size_t n = local_.size();

    // Counting sort by element; each directed edge keeps its insertion rank.
    edge_start_.assign(n + 1, 0);
    for (auto e : from) ++edge_start_[e + 1];
    for (std::size_t i = 0; i < n; ++i) edge_start_[i + 1] += edge_start_[i];
    edges_.resize(from.size());
    std::vector<std::uint32_t> fill(edge_start_.begin(), edge_start_.end() - 1);
    for (std::size_t i = 0; i < bin.size(); ++i) {
        RoleId r = make_role(bin[i].role, false);
        edges_[fill[from[2 * i]]++] = {r, bin[i].b};
        edges_[fill[from[2 * i + 1]]++] = {inv(r), bin[i].a};
    }
    targets_.resize(edges_.size());
    for (std::size_t e = 0; e < n; ++e) {
        auto first = edges_.begin() + edge_start_[e], last = edges_.begin() + edge_start_[e + 1];
        std::stable_sort(first, last, [](const Edge& x, const Edge& y) { return x.first < y.first; });
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) targets_[i] = edges_[i].second;

    concept_start_.assign(n + 1, 0);
    for (auto e : cfrom) ++concept_start_[e + 1];
    for (std::size_t i = 0; i < n; ++i) concept_start_[i + 1] += concept_start_[i];
    concepts_.resize(un.size());
    fill.assign(concept_start_.begin(), concept_start_.end() - 1);
    for (std::size_t i = 0; i < un.size(); ++i) concepts_[fill[cfrom[i]]++] = un[i].pred;
}

std::span<const Id> RoleIndex::successors(RoleId r, Id c) const {
    auto it = local_.find(c);
    if (it == local_.end()) return {};
    auto first = edges_.begin() + edge_start_[it->second], last = edges_.begin() + edge_start_[it->second + 1];
    auto lo = std::lower_bound(first, last, r, [](const Edge& x, RoleId v) { return x.first < v; });
    auto hi = lo;
    while (hi != last && hi->first == r) ++hi;
    return {targets_.data() + (lo - edges_.begin()), static_cast<std::size_t>(hi - lo)};
}

std::span<const RoleIndex::Edge> RoleIndex::edges(Id c) const {
    auto it = local_.find(c);
    if (it == local_.end()) return {};
    return {edges_.data() + edge_start_[it->second], edge_start_[it->second + 1] - edge_start_[it->second]};
}

std::span<const Id> RoleIndex::concepts(Id c) const {
    auto it = local_.find(c);
    if (it == local_.end()) return {};
    return {concepts_.data() + concept_start_[it->second], concept_start_[it->second + 1] - concept_start_[it->second]};
}

// ---------------------------------------------------------------------------

Var CQ::var(const std::string& name) {
    for (Var v = 0; v < var_names.size(); ++v)
        if (var_names[v] == name) return v;
    var_names.push_back(name);
    return static_cast<Var>(var_names.size() - 1);
}

Signature CQ::signature() const {
    Signature s;
    for (const auto& a : atoms) {
        if (a.binary) s.roles.insert(a.pred);
        else if (a.pred != kTop) s.concepts.insert(a.pred);
    }
    return s;
}

bool CQ::is_answer(Var v) const { return std::find(answers.begin(), answers.end(), v) != answers.end(); }

OMQ OMQ::with_full_signature(Ontology o, CQ q) {
    OMQ out;
    out.sigma = o.signature();
    out.sigma.merge(q.signature());
    out.onto = std::move(o);
    out.q = std::move(q);
    return out;
}

bool OMQ::accepts(const Database& d) const {
    for (const auto& f : d.unary())
        if (f.pred != kTop && !sigma.concepts.count(f.pred)) return false;
    for (const auto& f : d.binary())
        if (!sigma.roles.count(f.role)) return false;
    return true;
}

}  // namespace omqe
