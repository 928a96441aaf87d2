/*
 * Chase computation.
 *
 *   build_horn    - clause groups over the active domain of D
 *   minimal_model - counter-based unit propagation (linear time)
 *   chase         - minimal model of the encoding, interleaved with type
 *                   saturation of constants through the reasoner
 *   naive_chase   - rule-by-rule fixpoint, used as the reference
 */
#include "omqe/chase.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace omqe {

namespace {

std::uint64_t pack(Id a, Id b) { return (std::uint64_t(a) << 32) | b; }

class HornSolver {
public:
    explicit HornSolver(const HornFormula& f) : f_(f), value_(f.num_vars(), false), missing_(f.clauses.size()) {
        watch_.resize(f.num_vars());
        for (std::uint32_t i = 0; i < f.clauses.size(); ++i) {
            const auto& body = f.clauses[i].body;
            // Bodies are tiny; a repeated variable is counted once.
            std::uint32_t distinct = 0;
            for (std::size_t k = 0; k < body.size(); ++k) {
                if (std::find(body.begin(), body.begin() + k, body[k]) != body.begin() + k) continue;
                watch_[body[k]].push_back(i);
                ++distinct;
            }
            missing_[i] = distinct;
            if (distinct == 0) set(f.clauses[i].head);
        }
    }

    void set(std::uint32_t v) {
        if (value_[v]) return;
        value_[v] = true;
        queue_.push_back(v);
        fresh_.push_back(v);
    }

    void propagate() {
        while (!queue_.empty()) {
            std::uint32_t v = queue_.back();
            queue_.pop_back();
            for (auto c : watch_[v])
                if (--missing_[c] == 0) set(f_.clauses[c].head);
        }
    }

    bool value(std::uint32_t v) const { return value_[v]; }
    const std::vector<bool>& values() const { return value_; }
    // Variables that became true since the last call.
    std::vector<std::uint32_t> take_fresh() { return std::exchange(fresh_, {}); }

private:
    const HornFormula& f_;
    std::vector<bool> value_;
    std::vector<std::uint32_t> missing_;
    std::vector<std::vector<std::uint32_t>> watch_;
    std::vector<std::uint32_t> queue_;
    std::vector<std::uint32_t> fresh_;
};

class Encoder {
public:
    Encoder(Reasoner& r, const Database& d) : r_(r), d_(d) {
        Signature sig = r.ontology().signature();
        onto_concepts_ = sig.concepts;
        onto_roles_ = sig.roles;
    }

    HornFormula build() {
        std::vector<Id> adom = d_.adom();
        cvars_.reserve(adom.size() * onto_concepts_.size());
        rvars_.reserve(2 * d_.binary().size() * std::max<std::size_t>(1, onto_roles_.size()));
        for (Id c : adom)
            for (Id a : onto_concepts_) concept_var(a, c);

        // Undirected edges of D, self-loops included.
        std::vector<std::pair<Id, Id>> edges;
        absl::flat_hash_set<std::uint64_t> seen;
        for (const auto& f : d_.binary()) {
            Id a = std::min(f.a, f.b), b = std::max(f.a, f.b);
            if (seen.insert(pack(a, b)).second) edges.emplace_back(a, b);
        }
        for (auto [a, b] : edges)
            for (Id r : onto_roles_) {
                role_var(make_role(r, false), a, b);
                role_var(make_role(r, false), b, a);
            }

        // (1) facts of D
        for (const auto& f : d_.unary())
            if (onto_concepts_.count(f.pred)) unit(concept_var(f.pred, f.c));
        for (const auto& f : d_.binary())
            if (onto_roles_.count(f.role)) unit(role_var(make_role(f.role, false), f.a, f.b));

        // (2) entailed conjunctions with at most two conjuncts
        ConceptType base = r_.entailed_concepts({});
        std::vector<std::pair<Id, ConceptType>> singles;
        std::unordered_map<Id, ConceptType> single_of;
        for (Id a : onto_concepts_) {
            ConceptType e = r_.entailed_concepts({a});
            single_of[a] = e;
            ConceptType extra;
            for (Id b : e)
                if (b != a && !sets::contains(base, b)) extra.push_back(b);
            if (!extra.empty()) singles.emplace_back(a, std::move(extra));
        }
        struct Pair {
            Id a, b;
            ConceptType extra;
        };
        std::vector<Pair> pairs;
        std::vector<Id> names(onto_concepts_.begin(), onto_concepts_.end());
        for (std::size_t i = 0; i < names.size(); ++i)
            for (std::size_t j = i + 1; j < names.size(); ++j) {
                ConceptType both = sets::unite(single_of[names[i]], single_of[names[j]]);
                ConceptType e = r_.entailed_concepts({names[i], names[j]});
                ConceptType extra;
                std::set_difference(e.begin(), e.end(), both.begin(), both.end(), std::back_inserter(extra));
                if (!extra.empty()) pairs.push_back({names[i], names[j], std::move(extra)});
            }
        for (Id c : adom) {
            for (Id b : base)
                if (onto_concepts_.count(b)) unit(concept_var(b, c));
            for (const auto& [a, extra] : singles)
                for (Id b : extra) clause({concept_var(a, c)}, concept_var(b, c));
            for (const auto& p : pairs)
                for (Id b : p.extra) clause({concept_var(p.a, c), concept_var(p.b, c)}, concept_var(b, c));
        }

        const NormalAxioms& ax = r_.axioms();
        for (auto [a, b] : edges) {
            std::vector<std::pair<Id, Id>> orient{{a, b}};
            if (a != b) orient.emplace_back(b, a);
            for (auto [c1, c2] : orient) {
                // (3) c2 has an S-successor c1 in A1  =>  A2(c2)
                for (const auto& e : ax.ex_lhs) {
                    std::vector<std::uint32_t> body{role_var(e.role, c2, c1)};
                    if (e.filler != kTop) body.push_back(concept_var(e.filler, c1));
                    clause(std::move(body), concept_var(e.rhs, c2));
                }
                // (4) role inclusions
                for (const auto& ri : r_.ontology().ris)
                    clause({role_var(ri.sub, c1, c2)}, role_var(ri.sup, c1, c2));
                // (5) functionality propagation
                for (const auto& e : ax.ex_rhs)
                    for (RoleId fr : r_.super_roles(e.role)) {
                        const auto& funcs = r_.ontology().funcs;
                        if (std::find(funcs.begin(), funcs.end(), fr) == funcs.end()) continue;
                        std::vector<std::uint32_t> body{concept_var(e.lhs, c1), role_var(fr, c1, c2)};
                        clause(body, role_var(e.role, c1, c2));
                        if (e.filler != kTop) clause(body, concept_var(e.filler, c2));
                    }
            }
        }
        return std::move(f_);
    }

    std::uint32_t concept_var(Id a, Id c) {
        auto [it, fresh] = cvars_.try_emplace(pack(a, c), static_cast<std::uint32_t>(f_.vars.size()));
        if (fresh) f_.vars.push_back({false, a, c, c});
        return it->second;
    }

    // R(a,b) for a possibly inverted role is the variable of name(R) on the
    // oriented pair.
    std::uint32_t role_var(RoleId r, Id a, Id b) {
        if (is_inverse(r)) std::swap(a, b);
        BinaryFact key{role_name(r), a, b};
        auto [it, fresh] = rvars_.try_emplace(key, static_cast<std::uint32_t>(f_.vars.size()));
        if (fresh) f_.vars.push_back({true, key.role, a, b});
        return it->second;
    }

    bool known_concept(Id a) const { return onto_concepts_.count(a) != 0; }

private:
    void unit(std::uint32_t v) { f_.clauses.push_back({{}, v}); }
    void clause(std::vector<std::uint32_t> body, std::uint32_t head) { f_.clauses.push_back({std::move(body), head}); }

    Reasoner& r_;
    const Database& d_;
    std::set<Id> onto_concepts_;
    std::set<Id> onto_roles_;
    HornFormula f_;
    absl::flat_hash_map<std::uint64_t, std::uint32_t> cvars_;
    absl::flat_hash_map<BinaryFact, std::uint32_t, FactHash> rvars_;
};

Database read_off(const Database& d, const HornFormula& f, const std::vector<bool>& model) {
    Database out = d;
    std::size_t unary = d.unary().size(), binary = d.binary().size();
    for (std::uint32_t v = 0; v < f.num_vars(); ++v)
        if (model[v]) ++(f.vars[v].binary ? binary : unary);
    out.reserve(unary, binary);
    for (std::uint32_t v = 0; v < f.num_vars(); ++v) {
        if (!model[v]) continue;
        const auto& x = f.vars[v];
        if (x.binary) out.add_binary(x.pred, x.a, x.b);
        else out.add_unary(x.pred, x.a);
    }
    return out;
}

Database saturate(Reasoner& r, const Database& d) {
    Encoder enc(r, d);
    HornFormula f = enc.build();
    HornSolver solver(f);
    solver.propagate();

    // Constants whose concept set grew get their full type from the reasoner;
    // this covers conjunctive consequences with more than two conjuncts.
    absl::flat_hash_map<Id, ConceptType> known;
    for (;;) {
        std::vector<Id> dirty;
        for (auto v : solver.take_fresh()) {
            const auto& x = f.vars[v];
            if (x.binary) continue;
            auto& t = known[x.a];
            t.push_back(x.pred);
            dirty.push_back(x.a);
        }
        sets::normalize(dirty);
        bool grew = false;
        for (Id c : dirty) {
            auto& t = known[c];
            sets::normalize(t);
            for (Id a : r.entailed_concepts(t)) {
                if (!enc.known_concept(a)) continue;
                std::uint32_t v = enc.concept_var(a, c);
                if (!solver.value(v)) {
                    solver.set(v);
                    grew = true;
                }
            }
        }
        if (!grew) break;
        solver.propagate();
    }
    return read_off(d, f, solver.values());
}

}  // namespace

HornFormula build_horn(Reasoner& r, const Database& d) { return Encoder(r, d).build(); }

std::vector<bool> minimal_model(const HornFormula& f) {
    HornSolver s(f);
    s.propagate();
    return s.values();
}

bool has_functional_clash(const Reasoner& r, const Database& chased) {
    RoleIndex idx(chased);
    for (Id c : chased.adom())
        for (RoleId role : r.roles())
            if (r.entails_func(role) && idx.successors(role, c).size() > 1) return true;
    return false;
}

Database chase(Reasoner& r, const Database& d) {
    Database out = saturate(r, d);
    if (has_functional_clash(r, out)) throw Unsatisfiable("database is unsatisfiable: functional role with two distinct successors");
    return out;
}

bool is_satisfiable(Reasoner& r, const Database& d) { return !has_functional_clash(r, saturate(r, d)); }

Database naive_chase(Reasoner& r, const Database& d) {
    Database out = d;
    const NormalAxioms& ax = r.axioms();
    bool changed = true;
    while (changed) {
        changed = false;
        RoleIndex idx(out);
        std::vector<Id> adom = out.adom();

        // R1: type saturation
        std::unordered_map<Id, ConceptType> type;
        for (Id c : adom) {
            auto held = idx.concepts(c);
            ConceptType t(held.begin(), held.end());
            t.erase(std::remove(t.begin(), t.end(), kTop), t.end());
            sets::normalize(t);
            type[c] = r.entailed_concepts(t);
            for (Id a : type[c]) changed |= out.add_unary(a, c);
        }
        // R2: ∃S.A1 ⊑ A2
        for (const auto& e : ax.ex_lhs)
            for (Id c : adom)
                for (Id s : idx.successors(e.role, c))
                    if (e.filler == kTop || sets::contains(type[s], e.filler)) changed |= out.add_unary(e.rhs, c);
        // R3: role inclusions
        std::vector<BinaryFact> facts = out.binary();
        for (const auto& f : facts)
            for (RoleId s : r.super_roles(make_role(f.role, false))) {
                if (is_inverse(s)) changed |= out.add_binary(role_name(s), f.b, f.a);
                else changed |= out.add_binary(role_name(s), f.a, f.b);
            }
        // R4: functionality
        for (Id c : adom)
            for (const auto& req : r.maximal_succs(type[c]))
                for (RoleId fr : req.roles) {
                    if (!r.entails_func(fr)) continue;
                    for (Id s : idx.successors(fr, c)) {
                        for (RoleId role : req.roles) {
                            if (is_inverse(role)) changed |= out.add_binary(role_name(role), s, c);
                            else changed |= out.add_binary(role_name(role), c, s);
                        }
                        for (Id a : req.target) changed |= out.add_unary(a, s);
                    }
                }
    }
    return out;
}

bool is_nonempty_concept(Reasoner& r, Id a, const Signature& sigma) {
    if (sigma.concepts.count(a)) return true;
    // Every Σ-database maps homomorphically into the single self-loop element
    // carrying all of Σ, so that element realizes every derivable concept.
    Database d;
    Id eps = constant_id("_eps");
    for (Id c : sigma.concepts) d.add_unary(c, eps);
    for (Id role : sigma.roles) d.add_binary(role, eps, eps);
    if (d.empty()) return false;
    Database ch = saturate(r, d);
    return ch.has_unary(a, eps);
}

}  // namespace omqe
