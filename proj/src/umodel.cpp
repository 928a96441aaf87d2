/*
 * Universal models built from traces.
 *
 * Attached trees: below every constant c we materialize the traces starting
 * at c up to a length bound, one fresh null per trace. The successors of a
 * trace are the maximal successor requirements of its last type, minus those
 * blocked at the origin by a functional edge already present in the chase,
 * and minus those that would give an element two functional predecessors.
 *
 * Detached copies: instead of enumerating every Boolean tree query entailed
 * at some constant (doubly exponential in general), we add one detached copy
 * per "kind" of tree node. A kind is the pair (ρ_in, M) of a node of the
 * tree rooted at a type M_c, with ρ_in empty for the root itself. Every
 * connected query that maps into such a tree maps into the copy of the kind
 * of its topmost image element, cut at the query's size, and every copy maps
 * into the full universal model, so answers and wildcard answers coincide
 * with those of the enumerate-all-queries construction.
 */
#include "omqe/umodel.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace omqe {

namespace {

ConceptType concepts_of(const RoleIndex& idx, Id c) {
    ConceptType m;
    for (Id a : idx.concepts(c))
        if (a != kTop) m.push_back(a);
    sets::normalize(m);
    return m;
}

// Condition on the first step: a requirement already met by a functional
// edge of the chase is not realized by a null.
bool blocked_at_origin(const Reasoner& r, const RoleIndex& idx, Id c, const RoleSet& rho) {
    for (RoleId role : rho)
        if (r.entails_func(role) && !idx.successors(role, c).empty()) return true;
    return false;
}

// Condition on interior steps: no R with inv(R) on the incoming edge and R
// on the outgoing one for functional R (the parent already is that successor).
bool blocked_inside(const Reasoner& r, const RoleSet& rho_in, const RoleSet& rho) {
    for (RoleId role : rho)
        if (r.entails_func(role) && sets::contains(rho_in, inv(role))) return true;
    return false;
}

class TreeBuilder {
public:
    TreeBuilder(Reasoner& r, UniversalModel& u, std::size_t budget)
        : r_(r), u_(u), idx_(u.facts), budget_(budget) {}

    const RoleIndex& index() const { return idx_; }

    std::vector<SuccessorRequirement> origin_succs(Id c) {
        std::vector<SuccessorRequirement> out;
        for (auto& req : r_.maximal_succs(concepts_of(idx_, c)))
            if (!blocked_at_origin(r_, idx_, c, req.roles)) out.push_back(std::move(req));
        return out;
    }

    std::vector<SuccessorRequirement> inner_succs(const RoleSet& rho_in, const ConceptType& m) {
        std::vector<SuccessorRequirement> out;
        for (auto& req : r_.maximal_succs(m))
            if (!blocked_inside(r_, rho_in, req.roles)) out.push_back(std::move(req));
        return out;
    }

    // Trees below a database constant.
    void attach_to_constant(Id c, int max_depth) {
        if (max_depth <= 0) return;
        for (const auto& req : origin_succs(c)) grow(c, c, req, 1, max_depth, -1);
    }

    // A detached copy of the subtree below a node of the given kind.
    void detached_copy(const RoleSet& rho_in, const ConceptType& m, int max_depth, int kind) {
        Id root = new_null();
        NullInfo info;
        info.type = m;
        info.kind = kind;
        u_.provenance.emplace(root, info);
        for (Id a : m) add_unary(a, root);
        if (max_depth <= 0) return;
        for (const auto& req : rho_in.empty() ? r_.maximal_succs(m) : inner_succs(rho_in, m))
            grow(root, kNoOrigin, req, 1, max_depth, kind);
    }

private:
    void grow(Id parent, Id origin, const SuccessorRequirement& req, int depth, int max_depth, int kind) {
        Id n = new_null();
        NullInfo info;
        info.origin = origin;
        info.parent = parent;
        info.rho = req.roles;
        info.type = req.target;
        info.depth = depth;
        info.kind = kind;
        u_.provenance.emplace(n, info);
        for (Id a : req.target) add_unary(a, n);
        for (RoleId role : req.roles) {
            if (is_inverse(role)) add_binary(role_name(role), n, parent);
            else add_binary(role_name(role), parent, n);
        }
        if (depth >= max_depth) return;
        for (const auto& next : inner_succs(req.roles, req.target)) grow(n, origin, next, depth + 1, max_depth, kind);
    }

    Id new_null() {
        Id n = fresh_constant("_n");
        u_.facts.mark_null(n);
        return n;
    }

    void add_unary(Id a, Id c) {
        u_.facts.add_unary(a, c);
        check();
    }
    void add_binary(Id role, Id a, Id b) {
        u_.facts.add_binary(role, a, b);
        check();
    }
    void check() const {
        if (u_.facts.size() > budget_)
            throw ModelTooLarge("universal model exceeds " + std::to_string(budget_) + " facts");
    }

    Reasoner& r_;
    UniversalModel& u_;
    RoleIndex idx_;  // over the chase only; trees never add facts between constants
    std::size_t budget_;
};

UniversalModel start(Reasoner& r, const Database& d, int depth) {
    UniversalModel u;
    u.facts = chase(r, d);
    u.constants = d.adom();
    u.depth = depth;
    return u;
}

}  // namespace

std::vector<Trace> trace_successors(Reasoner& r, const Database& chased, const Trace& t) {
    std::vector<SuccessorRequirement> reqs;
    if (t.steps.empty()) {
        RoleIndex idx(chased);
        for (auto& req : r.maximal_succs(concepts_of(idx, t.origin)))
            if (!blocked_at_origin(r, idx, t.origin, req.roles)) reqs.push_back(std::move(req));
    } else {
        const auto& [rho_in, m] = t.steps.back();
        for (auto& req : r.maximal_succs(m))
            if (!blocked_inside(r, rho_in, req.roles)) reqs.push_back(std::move(req));
    }
    std::vector<Trace> out;
    for (auto& req : reqs) {
        Trace next = t;
        next.steps.emplace_back(std::move(req.roles), std::move(req.target));
        out.push_back(std::move(next));
    }
    return out;
}

UniversalModel build_universal(Reasoner& r, const Database& d, int depth, std::size_t fact_budget) {
    UniversalModel u = start(r, d, depth);
    TreeBuilder b(r, u, fact_budget);
    for (Id c : u.constants) b.attach_to_constant(c, depth);
    return u;
}

UniversalModel build_u_dq(Reasoner& r, const Database& d, const CQ& q, std::size_t fact_budget) {
    const int n = static_cast<int>(q.var_names.size());
    UniversalModel u = start(r, d, n);
    u.copy_depth = std::max(0, n - 1);
    TreeBuilder b(r, u, fact_budget);

    // Kinds reachable from the types of constants, in discovery order.
    std::vector<std::pair<RoleSet, ConceptType>> kinds;
    std::map<std::pair<RoleSet, ConceptType>, int> seen;
    auto add_kind = [&](RoleSet rho, ConceptType m) {
        auto key = std::make_pair(std::move(rho), std::move(m));
        if (seen.count(key)) return;
        seen.emplace(key, static_cast<int>(kinds.size()));
        kinds.push_back(std::move(key));
    };
    for (Id c : u.constants) {
        ConceptType m;
        for (Id a : b.index().concepts(c))
            if (a != kTop) m.push_back(a);
        sets::normalize(m);
        add_kind({}, r.entailed_concepts(m));
    }
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        auto [rho, m] = kinds[k];
        auto succs = rho.empty() ? r.maximal_succs(m) : b.inner_succs(rho, m);
        for (auto& req : succs) add_kind(std::move(req.roles), std::move(req.target));
    }

    for (Id c : u.constants) b.attach_to_constant(c, n);
    for (std::size_t k = 0; k < kinds.size(); ++k)
        b.detached_copy(kinds[k].first, kinds[k].second, u.copy_depth, static_cast<int>(k));
    return u;
}

// ---------------------------------------------------------------------------

std::vector<Database> witness_decomposition(const UniversalModel& u) {
    const Database& f = u.facts;
    auto null = [&](Id e) { return u.is_null(e); };

    // Union-find over nulls.
    std::unordered_map<Id, Id> parent;
    std::function<Id(Id)> find = [&](Id x) {
        Id p = parent.try_emplace(x, x).first->second;
        if (p == x) return x;
        Id root = find(p);
        parent[x] = root;
        return root;
    };
    for (const auto& b : f.binary())
        if (null(b.a) && null(b.b)) parent[find(b.a)] = find(b.b);

    // Null-free facts become the anchors of the pieces.
    std::vector<Database> pieces;
    std::unordered_map<Id, std::size_t> anchor;
    for (const auto& a : f.unary()) {
        if (null(a.c)) continue;
        anchor.try_emplace(a.c, pieces.size());
        pieces.emplace_back().add_unary(a.pred, a.c);
    }
    for (const auto& b : f.binary()) {
        if (null(b.a) || null(b.b)) continue;
        anchor.try_emplace(b.a, pieces.size());
        anchor.try_emplace(b.b, pieces.size());
        pieces.emplace_back().add_binary(b.role, b.a, b.b);
    }

    // The constant each null component touches, if any.
    std::unordered_map<Id, Id> touches;
    for (const auto& b : f.binary()) {
        if (null(b.a) == null(b.b)) continue;
        Id n = null(b.a) ? b.a : b.b;
        Id c = null(b.a) ? b.b : b.a;
        auto [it, fresh] = touches.try_emplace(find(n), c);
        if (!fresh && it->second != c)
            throw MalformedWitness("null component touches both " + constant_str(it->second) + " and " +
                                   constant_str(c));
    }

    auto piece_of = [&](Id n) -> Database& {
        auto it = touches.find(find(n));
        if (it != touches.end()) return pieces[anchor.at(it->second)];
        if (pieces.empty()) throw MalformedWitness("nulls without any null-free fact");
        return pieces.front();
    };
    for (const auto& a : f.unary())
        if (null(a.c)) {
            Database& p = piece_of(a.c);
            p.add_unary(a.pred, a.c);
            p.mark_null(a.c);
        }
    for (const auto& b : f.binary()) {
        if (!null(b.a) && !null(b.b)) continue;
        Database& p = piece_of(null(b.a) ? b.a : b.b);
        p.add_binary(b.role, b.a, b.b);
        if (null(b.a)) p.mark_null(b.a);
        if (null(b.b)) p.mark_null(b.b);
    }
    return pieces;
}

// ---------------------------------------------------------------------------

namespace {

struct TreeView {
    std::vector<std::vector<Id>> labels;                               // concept names per vertex
    std::vector<std::vector<std::pair<Var, std::vector<RoleId>>>> adj;  // neighbour, roles towards it
};

TreeView view_of(const CQ& p) {
    const std::size_t k = p.var_names.size();
    TreeView t;
    t.labels.resize(k);
    t.adj.resize(k);
    std::map<std::pair<Var, Var>, std::vector<RoleId>> edges;
    for (const auto& a : p.atoms) {
        if (!a.binary) {
            if (a.pred != kTop) t.labels[a.x].push_back(a.pred);
            continue;
        }
        if (a.x == a.y) throw std::invalid_argument("reflexive atom in tree query");
        edges[{a.x, a.y}].push_back(make_role(a.pred, false));
        edges[{a.y, a.x}].push_back(make_role(a.pred, true));
    }
    for (auto& l : t.labels) sets::normalize(l);
    for (auto& [e, roles] : edges) {
        sets::normalize(roles);
        t.adj[e.first].emplace_back(e.second, roles);
    }
    // A tree: connected with k-1 undirected edges.
    if (edges.size() / 2 + 1 != std::max<std::size_t>(k, 1)) throw std::invalid_argument("query is not a tree");
    std::vector<bool> seen(k, false);
    std::vector<Var> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        Var v = stack.back();
        stack.pop_back();
        for (const auto& [w, roles] : t.adj[v])
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                stack.push_back(w);
            }
    }
    if (reached != k) throw std::invalid_argument("query is not connected");
    return t;
}

std::string rooted_code(const TreeView& t, Var v, Var from) {
    std::string out = "(";
    for (Id a : t.labels[v]) out += std::to_string(a) + ',';
    std::vector<std::string> kids;
    for (const auto& [w, roles] : t.adj[v]) {
        if (w == from) continue;
        std::string k = "[";
        for (RoleId r : roles) k += std::to_string(r) + ',';
        kids.push_back(k + ']' + rooted_code(t, w, v));
    }
    std::sort(kids.begin(), kids.end());
    out += ';';
    for (const auto& k : kids) out += k;
    return out + ')';
}

}  // namespace

std::string tree_code(const CQ& p) {
    if (p.var_names.empty()) return "()";
    TreeView t = view_of(p);
    std::string best;
    for (Var v = 0; v < p.var_names.size(); ++v) {
        std::string c = rooted_code(t, v, static_cast<Var>(-1));
        if (best.empty() || c < best) best = std::move(c);
    }
    return best;
}

std::vector<CQ> cl_q(const Ontology& o, const Signature& sig, int n, std::size_t budget) {
    std::vector<Id> names(sig.concepts.begin(), sig.concepts.end());
    std::vector<RoleId> roles;
    for (Id r : sig.roles) {
        roles.push_back(make_role(r, false));
        roles.push_back(make_role(r, true));
    }
    if (names.size() > 20 || roles.size() > 20) throw ModelTooLarge("signature too large for cl(Q)");
    const std::uint64_t vlabels = std::uint64_t(1) << names.size();
    const std::uint64_t elabels = (std::uint64_t(1) << roles.size()) - 1;

    std::set<std::string> codes;
    std::vector<CQ> out;

    for (int k = 1; k <= n; ++k) {
        // Shapes: parent[i] < i for i >= 1 (covers every tree up to isomorphism).
        std::vector<int> par(k, -1);
        std::function<void(int)> shape = [&](int i) {
            if (i < k) {
                for (int p = 0; p < i; ++p) {
                    par[i] = p;
                    shape(i + 1);
                }
                return;
            }
            // Label vertices, then edges, odometer style.
            std::vector<std::uint64_t> vl(k, 0), el(k, 1);
            for (;;) {
                CQ p;
                for (int v = 0; v < k; ++v) p.var("x" + std::to_string(v));
                for (int v = 0; v < k; ++v) {
                    for (std::size_t b = 0; b < names.size(); ++b)
                        if (vl[v] >> b & 1) p.atoms.push_back({names[b], false, Var(v), Var(v)});
                    if (v == 0) continue;
                    for (std::size_t b = 0; b < roles.size(); ++b) {
                        if (!(el[v] >> b & 1)) continue;
                        RoleId r = roles[b];
                        if (is_inverse(r)) p.atoms.push_back({role_name(r), true, Var(v), Var(par[v])});
                        else p.atoms.push_back({role_name(r), true, Var(par[v]), Var(v)});
                    }
                }
                if (k == 1 && p.atoms.empty()) p.atoms.push_back({kTop, false, 0, 0});

                // Each vertex has at most one neighbour along every asserted functional role.
                bool functional = true;
                auto bit = [&](int v, RoleId r) {
                    auto it = std::find(roles.begin(), roles.end(), r);
                    return it != roles.end() && (el[v] >> (it - roles.begin()) & 1);
                };
                for (RoleId f : o.funcs) {
                    std::vector<int> count(k, 0);
                    for (int v = 1; v < k; ++v) {
                        if (bit(v, f)) ++count[par[v]];
                        if (bit(v, inv(f))) ++count[v];
                    }
                    if (*std::max_element(count.begin(), count.end()) > 1) functional = false;
                }
                if (functional && codes.insert(tree_code(p)).second) {
                    out.push_back(std::move(p));
                    if (out.size() > budget) throw ModelTooLarge("cl(Q) exceeds the budget");
                }

                int pos = 0;
                for (; pos < 2 * k; ++pos) {
                    if (pos < k) {
                        if (++vl[pos] < vlabels) break;
                        vl[pos] = 0;
                    } else {
                        int v = pos - k;
                        if (v == 0) continue;
                        if (++el[v] <= elabels) break;
                        el[v] = 1;
                    }
                }
                if (pos == 2 * k) break;
            }
        };
        shape(1);
    }
    return out;
}

}  // namespace omqe
