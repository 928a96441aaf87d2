#include "support/instances.hpp"

#include <algorithm>
#include <string>

#include "omqe/syntax.hpp"

namespace omqe::fixtures {

Id shape_concept(int i) { return concept_id("X" + std::to_string(i)); }
Id shape_role(int i) { return role_name_id("p" + std::to_string(i)); }
Id shape_constant(int i) { return constant_id("c" + std::to_string(i)); }

namespace {

int pick(std::mt19937& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
bool coin(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

RoleId any_role(std::mt19937& rng, const InstanceShape& s) {
    return make_role(shape_role(pick(rng, s.roles)), s.inverses && coin(rng, 0.4));
}

// A concept name, or top with small probability where allowed.
ConceptPtr name_or_top(std::mt19937& rng, const InstanceShape& s, bool allow_top) {
    if (allow_top && coin(rng, 0.15)) return Concept::top();
    return Concept::atomic(shape_concept(pick(rng, s.concepts)));
}

}  // namespace

Ontology random_ontology(std::mt19937& rng, const InstanceShape& s) {
    Ontology o;
    for (int i = 0; i < s.axioms; ++i) {
        int kind = pick(rng, s.role_inclusions ? 6 : 5);
        auto a = Concept::atomic(shape_concept(pick(rng, s.concepts)));
        switch (kind) {
            case 0:
                if (coin(rng, 0.3)) o.cis.push_back({Concept::top(), a});
                else o.cis.push_back({name_or_top(rng, s, false), a});
                break;
            case 1:
                o.cis.push_back({Concept::conj(name_or_top(rng, s, false), name_or_top(rng, s, false)), a});
                break;
            case 2:
            case 3:
                o.cis.push_back({a, Concept::exists(any_role(rng, s), name_or_top(rng, s, true))});
                break;
            case 4:
                o.cis.push_back({Concept::exists(any_role(rng, s), name_or_top(rng, s, true)), a});
                break;
            case 5: {
                RoleId r = any_role(rng, s), t = any_role(rng, s);
                if (role_name(r) != role_name(t)) o.ris.push_back({r, t});
                break;
            }
        }
    }
    for (int i = 0; i < s.roles; ++i) {
        if (coin(rng, s.func_density)) o.add_func(make_role(shape_role(i), false));
        if (s.inverses && coin(rng, s.func_density / 2)) o.add_func(make_role(shape_role(i), true));
    }
    o.normalized = true;
    return o;
}

Database random_database(std::mt19937& rng, const InstanceShape& s) {
    Database d;
    for (int i = 0; i < s.facts; ++i) {
        Id a = shape_constant(pick(rng, s.constants));
        if (coin(rng, 0.45)) {
            d.add_unary(shape_concept(pick(rng, s.concepts)), a);
        } else {
            Id b = shape_constant(pick(rng, s.constants));
            d.add_binary(shape_role(pick(rng, s.roles)), a, b);
        }
    }
    return d;
}

CQ random_query(std::mt19937& rng, const InstanceShape& s, int vars, int atoms, int answers) {
    CQ q;
    std::vector<std::string> names;
    for (int i = 0; i < vars; ++i) names.push_back("v" + std::to_string(i));
    // Spanning tree first so the query is connected, then extra atoms.
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < vars; ++i) edges.emplace_back(pick(rng, i), i);
    std::vector<Atom> raw;
    for (auto [u, v] : edges) {
        if (coin(rng, 0.5)) std::swap(u, v);
        raw.push_back({shape_role(pick(rng, s.roles)), true, Var(u), Var(v)});
    }
    while (static_cast<int>(raw.size()) < atoms) {
        if (coin(rng, 0.5) || vars == 1) {
            raw.push_back({shape_concept(pick(rng, s.concepts)), false, Var(pick(rng, vars)), 0});
            raw.back().y = raw.back().x;
        } else {
            raw.push_back({shape_role(pick(rng, s.roles)), true, Var(pick(rng, vars)), Var(pick(rng, vars))});
        }
    }
    if (vars == 1 && raw.empty()) raw.push_back({shape_concept(pick(rng, s.concepts)), false, 0, 0});
    // Variable ids follow first occurrence in the body.
    std::vector<int> id(vars, -1);
    for (auto& a : raw) {
        for (Var* v : {&a.x, &a.y}) {
            if (id[*v] < 0) {
                id[*v] = static_cast<int>(q.var_names.size());
                q.var_names.push_back(names[*v]);
            }
            *v = static_cast<Var>(id[*v]);
        }
        if (std::find(q.atoms.begin(), q.atoms.end(), a) == q.atoms.end()) q.atoms.push_back(a);
    }
    std::vector<Var> all(q.var_names.size());
    for (Var v = 0; v < all.size(); ++v) all[v] = v;
    std::shuffle(all.begin(), all.end(), rng);
    for (int i = 0; i < answers && i < static_cast<int>(all.size()); ++i) q.answers.push_back(all[i]);
    return q;
}

}  // namespace omqe::fixtures

namespace omqe::fixtures {

namespace {

bool holds(const Concept& c, Id e, const RoleIndex& idx) {
    switch (c.kind) {
        case Concept::Kind::Top: return true;
        case Concept::Kind::Name: {
            const auto& cs = idx.concepts(e);
            return std::find(cs.begin(), cs.end(), c.name) != cs.end();
        }
        case Concept::Kind::Conj: return holds(*c.left, e, idx) && holds(*c.right, e, idx);
        case Concept::Kind::Exists:
            for (Id t : idx.successors(c.role, e))
                if (holds(*c.left, t, idx)) return true;
            return false;
    }
    return false;
}

}  // namespace

std::vector<std::string> model_violations(const Ontology& o, const UniversalModel& u) {
    std::vector<std::string> out;
    RoleIndex idx(u.facts);
    std::vector<Id> elements = u.facts.adom();
    for (Id c : u.constants)
        if (std::find(elements.begin(), elements.end(), c) == elements.end()) elements.push_back(c);

    for (RoleId f : o.funcs)
        for (Id e : elements) {
            auto span = idx.successors(f, e);
            std::vector<Id> succ(span.begin(), span.end());
            std::sort(succ.begin(), succ.end());
            succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
            if (succ.size() > 1) out.push_back("func(" + role_str(f) + ") violated at " + constant_str(e));
        }
    for (const auto& ri : o.ris)
        for (Id e : elements)
            for (Id t : idx.successors(ri.sub, e)) {
                const auto& sup = idx.successors(ri.sup, e);
                if (std::find(sup.begin(), sup.end(), t) == sup.end())
                    out.push_back(role_str(ri.sub) + " subr " + role_str(ri.sup) + " violated at " + constant_str(e));
            }
    for (Id e : elements) {
        auto it = u.provenance.find(e);
        if (it == u.provenance.end()) {
            if (u.depth == 0) continue;
        } else {
            // Detached copies are query-shaped fragments, not trace elements:
            // a copy of an inner node lacks the parent its requirements may
            // rely on, so concept inclusions are only checked on traces.
            const NullInfo& n = it->second;
            if (n.kind >= 0 || n.depth >= u.depth) continue;
        }
        for (const auto& ci : o.cis)
            if (holds(*ci.lhs, e, idx) && !holds(*ci.rhs, e, idx))
                out.push_back("inclusion " + print_concept(*ci.lhs) + " sub " + print_concept(*ci.rhs) +
                              " violated at " + constant_str(e));
    }
    return out;
}

}  // namespace omqe::fixtures
