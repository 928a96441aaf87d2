/*
 * Consequence-based reasoning for normalized ELIHF ontologies.
 *
 * The reasoner works with "contexts": an abstract anonymous element given by
 * the roles ρ_in connecting it to its parent and the concepts it is known to
 * carry (its seed). Evaluating a context saturates its type, groups its
 * existential requirements (groups sharing an entailed-functional role are
 * merged), lets requirements that are forced back onto the parent by a
 * functional inverse be absorbed, and spawns child contexts for the rest.
 * Children report back the concepts they push upward and the roles of
 * absorbed requirements. All quantities grow monotonically, so a worklist
 * reaches the least fixpoint.
 */
#include "omqe/reasoner.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace omqe {

Reasoner::Reasoner(const Ontology& o) : onto_(o.normalized ? o : normalize(o)) {
    ax_ = flatten(onto_);

    Signature sig = onto_.signature();
    for (Id r : sig.roles) {
        roles_.push_back(make_role(r, false));
        roles_.push_back(make_role(r, true));
    }
    sets::normalize(roles_);
    concepts_.assign(sig.concepts.begin(), sig.concepts.end());

    for (const auto& c : ax_.conj) {
        conj_by_[c.a1].emplace_back(c.a2, c.rhs);
        if (c.a2 != c.a1) conj_by_[c.a2].emplace_back(c.a1, c.rhs);
    }
    for (const auto& e : ax_.ex_rhs) exr_by_[e.lhs].emplace_back(e.role, e.filler);
    for (const auto& e : ax_.ex_lhs) exl_by_[e.role].emplace_back(e.filler, e.rhs);

    // Role hierarchy: reflexive-transitive closure, closed under inversion.
    std::unordered_map<RoleId, std::vector<RoleId>> up;
    for (const auto& ri : onto_.ris) {
        up[ri.sub].push_back(ri.sup);
        up[inv(ri.sub)].push_back(inv(ri.sup));
    }
    for (RoleId r : roles_) {
        RoleSet seen{r};
        std::deque<RoleId> todo{r};
        while (!todo.empty()) {
            RoleId s = todo.front();
            todo.pop_front();
            for (RoleId t : up[s])
                if (std::find(seen.begin(), seen.end(), t) == seen.end()) {
                    seen.push_back(t);
                    todo.push_back(t);
                }
        }
        sets::normalize(seen);
        sup_[r] = std::move(seen);
    }
    for (RoleId r : roles_) {
        bool f = false;
        for (RoleId s : sup_[r])
            if (std::find(onto_.funcs.begin(), onto_.funcs.end(), s) != onto_.funcs.end()) f = true;
        func_[r] = f;
    }
}

const RoleSet& Reasoner::super_roles(RoleId r) const {
    auto it = sup_.find(r);
    if (it != sup_.end()) return it->second;
    thread_local RoleSet single;
    single.assign(1, r);
    return single;
}

bool Reasoner::entails_func(RoleId r) const {
    auto it = func_.find(r);
    return it != func_.end() && it->second;
}

bool Reasoner::entails_role_incl(RoleId r, RoleId s) const {
    if (r == s) return true;
    return sets::contains(super_roles(r), s);
}

RoleSet Reasoner::close_roles(const RoleSet& rho) const {
    RoleSet out;
    for (RoleId r : rho) {
        const RoleSet& s = super_roles(r);
        out.insert(out.end(), s.begin(), s.end());
    }
    sets::normalize(out);
    return out;
}

ConceptType Reasoner::close_local(ConceptType m) const {
    m.insert(m.end(), ax_.top_incl.begin(), ax_.top_incl.end());
    sets::normalize(m);
    std::vector<Id> todo(m.begin(), m.end());
    std::vector<Id> added;
    auto has = [&](Id a) { return sets::contains(m, a) || std::find(added.begin(), added.end(), a) != added.end(); };
    while (!todo.empty()) {
        Id a = todo.back();
        todo.pop_back();
        auto it = conj_by_.find(a);
        if (it == conj_by_.end()) continue;
        for (auto [partner, rhs] : it->second) {
            if (has(rhs)) continue;
            if (partner == a || has(partner)) {
                added.push_back(rhs);
                todo.push_back(rhs);
            }
        }
    }
    if (!added.empty()) {
        m.insert(m.end(), added.begin(), added.end());
        sets::normalize(m);
    }
    return m;
}

ConceptType Reasoner::push(const ConceptType& parent, const RoleSet& rho) const {
    ConceptType out;
    for (RoleId r : rho) {
        auto it = exl_by_.find(inv(r));
        if (it == exl_by_.end()) continue;
        for (auto [a1, a2] : it->second)
            if (a1 == kTop || sets::contains(parent, a1)) out.push_back(a2);
    }
    sets::normalize(out);
    return out;
}

ConceptType Reasoner::uppush(const ConceptType& child, const RoleSet& rho) const {
    ConceptType out;
    for (RoleId r : rho) {
        auto it = exl_by_.find(r);
        if (it == exl_by_.end()) continue;
        for (auto [a1, a2] : it->second)
            if (a1 == kTop || sets::contains(child, a1)) out.push_back(a2);
    }
    sets::normalize(out);
    return out;
}

bool Reasoner::absorbed(const Group& g, const RoleSet& rho_in) const {
    for (RoleId r : g.rho)
        if (entails_func(r) && sets::contains(rho_in, inv(r))) return true;
    return false;
}

int Reasoner::context(const RoleSet& rho_in, const ConceptType& seed) {
    Key k{rho_in, seed};
    auto it = index_.find(k);
    if (it != index_.end()) return it->second;
    int i = static_cast<int>(keys_.size());
    keys_.push_back(k);
    State st;
    st.type = close_local(seed);
    st.queued = true;
    states_.push_back(std::move(st));
    index_.emplace(std::move(k), i);
    work_.push_back(i);
    return i;
}

void Reasoner::evaluate(int i) {
    const RoleSet rho_in = keys_[i].first;
    // Start from what is already known so that every quantity only grows;
    // re-deriving from the seed could oscillate between child contexts.
    ConceptType c = close_local(sets::unite(keys_[i].second, states_[i].type));
    std::vector<Group> groups;

    for (;;) {
        // Raw requirements of the current type.
        groups.clear();
        for (Id a : c) {
            auto it = exr_by_.find(a);
            if (it == exr_by_.end()) continue;
            for (auto [r, b] : it->second) {
                Group g;
                g.rho = super_roles(r);
                if (b != kTop) g.targets.push_back(b);
                groups.push_back(std::move(g));
            }
        }

        bool regroup = true;
        while (regroup) {
            regroup = false;
            // Merge groups that share an entailed-functional role.
            for (std::size_t x = 0; x < groups.size(); ++x) {
                for (std::size_t y = x + 1; y < groups.size();) {
                    bool share = false;
                    for (RoleId r : groups[y].rho)
                        if (entails_func(r) && sets::contains(groups[x].rho, r)) {
                            share = true;
                            break;
                        }
                    if (share) {
                        groups[x].rho = sets::unite(groups[x].rho, groups[y].rho);
                        groups[x].targets = sets::unite(groups[x].targets, groups[y].targets);
                        groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(y));
                        y = x + 1;
                    } else {
                        ++y;
                    }
                }
            }
            for (auto& g : groups) {
                if (absorbed(g, rho_in)) {
                    g.child = -1;
                    continue;
                }
                ConceptType seed = sets::unite(g.targets, push(c, g.rho));
                int j = context(g.rho, seed);
                g.child = j;
                auto& deps = states_[j].dependents;
                if (std::find(deps.begin(), deps.end(), i) == deps.end()) deps.push_back(i);
                if (!sets::subset(states_[j].up_roles, g.rho)) {
                    g.rho = close_roles(sets::unite(g.rho, states_[j].up_roles));
                    regroup = true;
                }
            }
        }

        ConceptType next = c;
        for (const auto& g : groups) {
            if (g.child < 0) continue;
            const State& ch = states_[g.child];
            next = sets::unite(next, ch.up_concepts);
            next = sets::unite(next, uppush(ch.type, g.rho));
        }
        next = close_local(std::move(next));
        if (next == c) break;
        c = std::move(next);
    }

    ConceptType up_c;
    RoleSet up_r;
    for (const auto& g : groups) {
        if (g.child >= 0) continue;
        up_c.insert(up_c.end(), g.targets.begin(), g.targets.end());
        for (RoleId r : g.rho) up_r.push_back(inv(r));
    }
    sets::normalize(up_c);
    sets::normalize(up_r);
    State& st = states_[i];
    up_c = sets::unite(up_c, st.up_concepts);
    up_r = sets::unite(up_r, st.up_roles);

    bool changed = st.type != c || st.up_concepts != up_c || st.up_roles != up_r;
    st.type = std::move(c);
    st.up_concepts = std::move(up_c);
    st.up_roles = std::move(up_r);
    st.groups = std::move(groups);
    if (changed) {
        for (int p : st.dependents)
            if (!states_[p].queued) {
                states_[p].queued = true;
                work_.push_back(p);
            }
    }
}

void Reasoner::solve() {
    while (!work_.empty()) {
        int i = work_.back();
        work_.pop_back();
        states_[i].queued = false;
        evaluate(i);
    }
}

ConceptType Reasoner::entailed_concepts(const ConceptType& m0) {
    ConceptType m = m0;
    sets::normalize(m);
    auto it = type_cache_.find(m);
    if (it != type_cache_.end()) return it->second;
    int root = context({}, m);
    solve();
    ConceptType t = states_[root].type;
    type_cache_.emplace(m, t);
    type_cache_.emplace(t, t);
    return t;
}

std::vector<SuccessorRequirement> Reasoner::maximal_succs(const ConceptType& m0) {
    ConceptType m = entailed_concepts(m0);
    auto it = succ_cache_.find(m);
    if (it != succ_cache_.end()) return it->second;
    int root = context({}, m);
    solve();
    std::vector<SuccessorRequirement> all;
    for (const auto& g : states_[root].groups) {
        // The root has no parent, so nothing is absorbed there.
        all.push_back({g.rho, states_[g.child].type});
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return std::tie(a.roles, a.target) < std::tie(b.roles, b.target);
    });
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<SuccessorRequirement> out;
    for (std::size_t x = 0; x < all.size(); ++x) {
        bool dominated = false;
        for (std::size_t y = 0; y < all.size() && !dominated; ++y)
            dominated = y != x && sets::subset(all[x].roles, all[y].roles) && sets::subset(all[x].target, all[y].target);
        if (!dominated) out.push_back(all[x]);
    }
    succ_cache_.emplace(m, out);
    return out;
}

bool Reasoner::entails_succ(const ConceptType& m, const RoleSet& rho0, const ConceptType& m2) {
    RoleSet rho = rho0;
    ConceptType t = m2;
    sets::normalize(rho);
    sets::normalize(t);
    for (const auto& req : maximal_succs(m))
        if (sets::subset(rho, req.roles) && sets::subset(t, req.target)) return true;
    return false;
}

}  // namespace omqe
