// Brute-force reference implementations (see oracle.hpp).
#include "omqe/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>
#include <unordered_map>

#include "omqe/chase.hpp"

namespace omqe {

namespace {

constexpr Id kNoConstant = ~Id(0);

int count_concept_names(const Ontology& o) { return static_cast<int>(o.signature().concepts.size()); }

// Depth-bounded chase over arbitrary concepts with element merging.
class BoundedChase {
public:
    BoundedChase(const Ontology& o, int depth, std::size_t budget) : o_(o), depth_(depth), budget_(budget) {}

    void load(const Database& d) {
        for (Id c : d.adom()) element_of(c);
        for (const auto& f : d.unary())
            if (f.pred != kTop) add_concept(element_of(f.c), f.pred);
        for (const auto& f : d.binary()) add_edge(element_of(f.a), make_role(f.role, false), element_of(f.b));
    }

    int element_of(Id c) {
        auto it = by_constant_.find(c);
        if (it != by_constant_.end()) return find(it->second);
        int e = new_element(0, c);
        by_constant_.emplace(c, e);
        return e;
    }

    // Returns false on a clash between two named elements.
    bool run() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int e = 0; e < static_cast<int>(el_.size()); ++e) {
                if (find(e) != e) continue;
                for (const auto& ci : o_.cis)
                    if (holds(*ci.lhs, e)) changed |= apply(*ci.rhs, e);
            }
            for (int e = 0; e < static_cast<int>(el_.size()); ++e) {
                if (find(e) != e) continue;
                auto edges = el_[e].edges;
                for (auto [r, t] : edges)
                    for (const auto& ri : o_.ris)
                        if (ri.sub == r) changed |= add_edge(e, ri.sup, find(t));
            }
            for (int e = 0; e < static_cast<int>(el_.size()); ++e) {
                if (find(e) != e) continue;
                for (RoleId r : o_.funcs) {
                    std::vector<int> succ;
                    for (auto [s, t] : el_[e].edges)
                        if (s == r) succ.push_back(find(t));
                    sets::normalize(succ);
                    for (std::size_t k = 1; k < succ.size(); ++k) {
                        if (!merge(succ[0], succ[k])) return false;
                        changed = true;
                    }
                    if (find(e) != e) break;
                }
            }
        }
        return true;
    }

    // Compact view for evaluation.
    struct View {
        std::vector<Id> constant;                 // kNoConstant for anonymous elements
        std::vector<std::vector<Id>> concepts;    // sorted
        std::vector<std::map<RoleId, std::vector<int>>> succ;
        std::unordered_map<Id, int> of_constant;
    };

    View view() {
        View v;
        std::vector<int> idx(el_.size(), -1);
        for (int e = 0; e < static_cast<int>(el_.size()); ++e) {
            if (find(e) != e) continue;
            idx[e] = static_cast<int>(v.constant.size());
            v.constant.push_back(el_[e].constant);
            v.concepts.push_back(el_[e].concepts);
        }
        v.succ.resize(v.constant.size());
        for (int e = 0; e < static_cast<int>(el_.size()); ++e) {
            if (find(e) != e) continue;
            for (auto [r, t] : el_[e].edges) {
                auto& list = v.succ[idx[e]][r];
                int target = idx[find(t)];
                if (std::find(list.begin(), list.end(), target) == list.end()) list.push_back(target);
            }
        }
        for (auto [c, e] : by_constant_) v.of_constant[c] = idx[find(e)];
        return v;
    }

private:
    struct Elem {
        std::vector<Id> concepts;
        std::vector<std::pair<RoleId, int>> edges;
        int depth = 0;
        Id constant = kNoConstant;
    };

    int new_element(int depth, Id constant) {
        if (el_.size() >= budget_) throw InstanceTooLarge("oracle model exceeds the element budget");
        Elem x;
        x.depth = depth;
        x.constant = constant;
        el_.push_back(std::move(x));
        uf_.push_back(static_cast<int>(uf_.size()));
        return static_cast<int>(el_.size() - 1);
    }

    int find(int e) {
        while (uf_[e] != e) {
            uf_[e] = uf_[uf_[e]];
            e = uf_[e];
        }
        return e;
    }

    bool add_concept(int e, Id a) {
        auto& cs = el_[e].concepts;
        auto it = std::lower_bound(cs.begin(), cs.end(), a);
        if (it != cs.end() && *it == a) return false;
        cs.insert(it, a);
        return true;
    }

    bool add_edge(int e, RoleId r, int t) {
        for (auto [s, u] : el_[e].edges)
            if (s == r && find(u) == t) return false;
        el_[e].edges.emplace_back(r, t);
        el_[t].edges.emplace_back(inv(r), e);
        return true;
    }

    bool holds(const Concept& c, int e) {
        switch (c.kind) {
            case Concept::Kind::Top: return true;
            case Concept::Kind::Name: return std::binary_search(el_[e].concepts.begin(), el_[e].concepts.end(), c.name);
            case Concept::Kind::Conj: return holds(*c.left, e) && holds(*c.right, e);
            case Concept::Kind::Exists:
                for (std::size_t k = 0; k < el_[e].edges.size(); ++k) {
                    auto [r, t] = el_[e].edges[k];
                    if (r == c.role && holds(*c.left, find(t))) return true;
                }
                return false;
        }
        return false;
    }

    bool apply(const Concept& c, int e) {
        switch (c.kind) {
            case Concept::Kind::Top: return false;
            case Concept::Kind::Name: return add_concept(e, c.name);
            case Concept::Kind::Conj: {
                bool a = apply(*c.left, e);
                bool b = apply(*c.right, find(e));
                return a || b;
            }
            case Concept::Kind::Exists: {
                if (holds(c, e)) return false;
                if (el_[e].depth >= depth_) return false;
                int t = new_element(el_[e].depth + 1, kNoConstant);
                add_edge(e, c.role, t);
                apply(*c.left, t);
                return true;
            }
        }
        return false;
    }

    bool merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return true;
        if (el_[a].constant != kNoConstant && el_[b].constant != kNoConstant) return false;
        if (el_[b].constant != kNoConstant || (el_[a].constant == kNoConstant && el_[b].depth < el_[a].depth))
            std::swap(a, b);
        uf_[b] = a;
        el_[a].depth = std::min(el_[a].depth, el_[b].depth);
        for (Id x : el_[b].concepts) add_concept(a, x);
        for (auto [r, t] : el_[b].edges) {
            int u = find(t);
            bool dup = false;
            for (auto [s, w] : el_[a].edges)
                if (s == r && find(w) == u) dup = true;
            if (!dup) el_[a].edges.emplace_back(r, u);
        }
        el_[b].edges.clear();
        el_[b].concepts.clear();
        return true;
    }

    const Ontology& o_;
    int depth_;
    std::size_t budget_;
    std::vector<Elem> el_;
    std::vector<int> uf_;
    std::unordered_map<Id, int> by_constant_;
};

using View = BoundedChase::View;

// Backtracking search for homomorphisms of q into the view; `fixed` pins
// variables (-1 = free). The callback returns false to stop.
void for_each_match(const CQ& q, const View& v, std::vector<int> fixed,
                    const std::function<bool(const std::vector<int>&)>& cb) {
    const int n = static_cast<int>(q.num_vars());
    const int m = static_cast<int>(v.constant.size());
    // Order: pinned variables first, then by connectivity.
    std::vector<int> order;
    std::vector<bool> placed(n, false);
    for (int x = 0; x < n; ++x)
        if (fixed[x] >= 0) {
            order.push_back(x);
            placed[x] = true;
        }
    while (static_cast<int>(order.size()) < n) {
        int best = -1;
        for (int x = 0; x < n && best < 0; ++x) {
            if (placed[x]) continue;
            for (const auto& a : q.atoms)
                if (a.binary && ((a.x == Var(x) && placed[a.y]) || (a.y == Var(x) && placed[a.x]))) best = x;
        }
        if (best < 0)
            for (int x = 0; x < n; ++x)
                if (!placed[x]) {
                    best = x;
                    break;
                }
        order.push_back(best);
        placed[best] = true;
    }

    std::vector<int> h(n, -1);
    auto consistent = [&](int x) {
        for (const auto& a : q.atoms) {
            if (!a.binary) {
                if (a.x == Var(x) && a.pred != kTop &&
                    !std::binary_search(v.concepts[h[x]].begin(), v.concepts[h[x]].end(), a.pred))
                    return false;
                continue;
            }
            if ((a.x != Var(x) && a.y != Var(x)) || h[a.x] < 0 || h[a.y] < 0) continue;
            auto it = v.succ[h[a.x]].find(make_role(a.pred, false));
            if (it == v.succ[h[a.x]].end()) return false;
            if (std::find(it->second.begin(), it->second.end(), h[a.y]) == it->second.end()) return false;
        }
        return true;
    };

    bool stop = false;
    std::function<void(int)> go = [&](int k) {
        if (stop) return;
        if (k == n) {
            if (!cb(h)) stop = true;
            return;
        }
        int x = order[k];
        std::vector<int> cands;
        if (fixed[x] >= 0) {
            cands.push_back(fixed[x]);
        } else {
            bool from_edge = false;
            for (const auto& a : q.atoms) {
                if (!a.binary) continue;
                if (a.x == Var(x) && h[a.y] >= 0) {
                    auto it = v.succ[h[a.y]].find(make_role(a.pred, true));
                    cands = it == v.succ[h[a.y]].end() ? std::vector<int>{} : it->second;
                    from_edge = true;
                    break;
                }
                if (a.y == Var(x) && h[a.x] >= 0) {
                    auto it = v.succ[h[a.x]].find(make_role(a.pred, false));
                    cands = it == v.succ[h[a.x]].end() ? std::vector<int>{} : it->second;
                    from_edge = true;
                    break;
                }
            }
            if (!from_edge) {
                cands.resize(m);
                for (int e = 0; e < m; ++e) cands[e] = e;
            }
        }
        for (int e : cands) {
            h[x] = e;
            if (consistent(x)) go(k + 1);
            h[x] = -1;
            if (stop) return;
        }
    };
    go(0);
}

View build_view(const Ontology& o, const Database& d, int depth, const OracleOptions& opt, bool& sat) {
    BoundedChase ch(o, depth, opt.element_budget);
    ch.load(d);
    sat = ch.run();
    return sat ? ch.view() : View{};
}

int base_depth(const Ontology& o, const CQ* q, const OracleOptions& opt) {
    int n = q ? static_cast<int>(q->num_vars()) : 0;
    return std::max(3, n + count_concept_names(o) + opt.extra_depth);
}

// Iterates the depth bound until `observe` yields the same value for
// stable_rounds consecutive depths.
template <class T>
T stabilize(const Ontology& o, const Database& d, int start, const OracleOptions& opt,
            const std::function<T(const View&)>& observe) {
    T last{};
    int agree = 0;
    for (int depth = start; depth <= opt.max_depth; ++depth) {
        bool sat = true;
        View v = build_view(o, d, depth, opt, sat);
        if (!sat) throw Unsatisfiable("unsatisfiable database");
        T now = observe(v);
        if (depth > start && now == last) {
            if (++agree + 1 >= opt.stable_rounds) return now;
        } else {
            agree = 0;
        }
        last = std::move(now);
    }
    throw InstanceTooLarge("oracle depth bound did not stabilize");
}

// Projections of all matches onto the answer variables.
std::set<std::vector<int>> answer_images(const CQ& q, const View& v) {
    std::set<std::vector<int>> out;
    std::vector<int> fixed(q.num_vars(), -1);
    for_each_match(q, v, fixed, [&](const std::vector<int>& h) {
        std::vector<int> t;
        for (Var x : q.answers) t.push_back(h[x]);
        out.insert(std::move(t));
        return true;
    });
    return out;
}

// Candidate wildcard tuples over adom.
void candidates(const std::vector<Id>& adom, std::size_t n, WildcardMode mode, std::size_t budget,
                std::vector<WildcardTuple>& out) {
    WildcardTuple t;
    t.mode = mode;
    std::function<void(Id)> go = [&](Id next_star) {
        if (out.size() > budget) throw InstanceTooLarge("too many candidate tuples");
        if (t.entries.size() == n) {
            out.push_back(t);
            return;
        }
        for (Id c : adom) {
            t.entries.push_back(Entry::constant(c));
            go(next_star);
            t.entries.pop_back();
        }
        if (mode == WildcardMode::Single) {
            t.entries.push_back(Entry::star());
            go(next_star);
            t.entries.pop_back();
        } else {
            for (Id k = 1; k <= next_star; ++k) {
                t.entries.push_back(Entry::star(k));
                go(k == next_star ? next_star + 1 : next_star);
                t.entries.pop_back();
            }
        }
    };
    go(1);
}

// An element tuple s lies below candidate t.
bool image_below(const std::vector<int>& s, const WildcardTuple& t, const View& v) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Entry& e = t.entries[i];
        if (!e.wildcard) {
            auto it = v.of_constant.find(e.value);
            if (it == v.of_constant.end() || it->second != s[i]) return false;
        }
    }
    if (t.mode == WildcardMode::Multi)
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j)
                if (t.entries[i] == t.entries[j] && s[i] != s[j]) return false;
    return true;
}

}  // namespace

OracleChase oracle_chase(const Ontology& o, const Database& d, const OracleOptions& opt) {
    using FactKey = std::tuple<bool, Id, Id, Id>;
    OracleChase out;
    std::vector<Id> adom = d.adom();
    std::vector<FactKey> facts;
    try {
        facts = stabilize<std::vector<FactKey>>(o, d, base_depth(o, nullptr, opt), opt, [&](const View& v) {
            std::vector<FactKey> f;
            for (Id c : adom) {
                int e = v.of_constant.at(c);
                for (Id a : v.concepts[e]) f.emplace_back(false, a, c, c);
                for (const auto& [r, ts] : v.succ[e])
                    for (int t : ts) {
                        if (v.constant[t] == kNoConstant || is_inverse(r)) continue;
                        f.emplace_back(true, role_name(r), c, v.constant[t]);
                    }
            }
            sets::normalize(f);
            return f;
        });
    } catch (const Unsatisfiable&) {
        out.satisfiable = false;
        return out;
    }
    out.facts = d;
    for (const auto& [binary, p, a, b] : facts) {
        if (binary) out.facts.add_binary(p, a, b);
        else out.facts.add_unary(p, a);
    }
    return out;
}

ConceptType oracle_entailed_concepts(const Ontology& o, const ConceptType& m, const OracleOptions& opt) {
    Database d;
    Id c = constant_id("_oracle_c");
    for (Id a : m)
        if (a != kTop) d.add_unary(a, c);
    if (m.empty()) d.add_unary(kTop, c);
    OracleChase ch = oracle_chase(o, d, opt);
    ConceptType out;
    for (const auto& f : ch.facts.unary())
        if (f.c == c && f.pred != kTop) out.push_back(f.pred);
    sets::normalize(out);
    return out;
}

std::set<ConstTuple> brute_answers(const OMQ& q, const Database& d, const OracleOptions& opt) {
    return stabilize<std::set<ConstTuple>>(q.onto, d, base_depth(q.onto, &q.q, opt), opt, [&](const View& v) {
        std::set<ConstTuple> out;
        for (const auto& img : answer_images(q.q, v)) {
            ConstTuple t;
            bool named = true;
            for (int e : img) {
                if (v.constant[e] == kNoConstant) named = false;
                t.push_back(v.constant[e]);
            }
            if (named) out.insert(std::move(t));
        }
        return out;
    });
}

std::set<WildcardTuple> brute_partial(const OMQ& q, const Database& d, WildcardMode mode, const OracleOptions& opt) {
    std::vector<WildcardTuple> cands;
    candidates(d.adom(), q.q.answers.size(), mode, opt.candidate_budget, cands);
    return stabilize<std::set<WildcardTuple>>(q.onto, d, base_depth(q.onto, &q.q, opt), opt, [&](const View& v) {
        std::set<WildcardTuple> out;
        auto images = answer_images(q.q, v);
        for (const auto& t : cands)
            for (const auto& s : images)
                if (image_below(s, t, v)) {
                    out.insert(t);
                    break;
                }
        return out;
    });
}

std::set<WildcardTuple> brute_minimal_partial(const OMQ& q, const Database& d, WildcardMode mode,
                                              const OracleOptions& opt) {
    std::set<WildcardTuple> partial = brute_partial(q, d, mode, opt);
    std::set<WildcardTuple> out;
    for (const auto& t : partial) {
        bool minimal = true;
        for (const auto& s : partial)
            if (strictly_below(s, t)) {
                minimal = false;
                break;
            }
        if (minimal) out.insert(t);
    }
    return out;
}

std::set<ConstTuple> oracle_evaluate(const CQ& q, const Database& d) {
    Ontology none;
    BoundedChase plain(none, 0, std::max<std::size_t>(d.size() * 2 + 1, 1));
    plain.load(d);
    View v = plain.view();
    std::set<ConstTuple> out;
    for (const auto& img : answer_images(q, v)) {
        ConstTuple t;
        for (int e : img) t.push_back(v.constant[e]);
        out.insert(std::move(t));
    }
    return out;
}

Simulation greatest_simulation(const Database& i, const Database& j) {
    RoleIndex ii(i), jj(j);
    std::vector<Id> di = i.adom(), dj = j.adom();
    auto concepts = [](const RoleIndex& x, Id c) {
        auto held = x.concepts(c);
        std::vector<Id> cs(held.begin(), held.end());
        sets::normalize(cs);
        return cs;
    };
    Simulation s;
    for (Id a : di) {
        auto ca = concepts(ii, a);
        for (Id b : dj)
            if (sets::subset(ca, concepts(jj, b))) s.emplace(a, b);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = s.begin(); it != s.end();) {
            auto [a, b] = *it;
            bool ok = true;
            for (auto [r, a2] : ii.edges(a)) {
                bool found = false;
                for (Id b2 : jj.successors(r, b))
                    if (s.count({a2, b2})) {
                        found = true;
                        break;
                    }
                if (!found) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                ++it;
            } else {
                it = s.erase(it);
                changed = true;
            }
        }
    }
    return s;
}

bool is_simulation(const Simulation& s, const Database& i, const Database& j) {
    RoleIndex ii(i), jj(j);
    for (auto [a, b] : s) {
        for (Id c : ii.concepts(a))
            if (!j.has_unary(c, b)) return false;
        for (auto [r, a2] : ii.edges(a)) {
            bool found = false;
            for (Id b2 : jj.successors(r, b))
                if (s.count({a2, b2})) found = true;
            if (!found) return false;
        }
    }
    return true;
}

bool brute_triangle(const std::vector<std::pair<int, int>>& edges) {
    std::set<std::pair<int, int>> e;
    std::set<int> vs;
    for (auto [a, b] : edges) {
        if (a == b) continue;
        e.emplace(a, b);
        e.emplace(b, a);
        vs.insert(a);
        vs.insert(b);
    }
    for (int a : vs)
        for (int b : vs)
            for (int c : vs)
                if (a < b && b < c && e.count({a, b}) && e.count({b, c}) && e.count({a, c})) return true;
    return false;
}

bool brute_hyperclique(const std::vector<std::vector<int>>& hyperedges, int k) {
    std::set<std::vector<int>> edges;
    std::set<int> vs;
    for (auto h : hyperedges) {
        std::sort(h.begin(), h.end());
        edges.insert(h);
        vs.insert(h.begin(), h.end());
    }
    std::vector<int> all(vs.begin(), vs.end());
    std::vector<int> pick;
    std::function<bool(std::size_t)> go = [&](std::size_t from) {
        if (static_cast<int>(pick.size()) == k + 1) {
            for (std::size_t drop = 0; drop < pick.size(); ++drop) {
                std::vector<int> sub;
                for (std::size_t x = 0; x < pick.size(); ++x)
                    if (x != drop) sub.push_back(pick[x]);
                if (!edges.count(sub)) return false;
            }
            return true;
        }
        for (std::size_t x = from; x < all.size(); ++x) {
            pick.push_back(all[x]);
            if (go(x + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    return go(0);
}

std::set<std::pair<int, int>> brute_mat_product(const std::set<std::pair<int, int>>& m1,
                                                const std::set<std::pair<int, int>>& m2) {
    std::set<std::pair<int, int>> out;
    for (auto [a, c] : m1)
        for (auto [c2, b] : m2)
            if (c == c2) out.emplace(a, b);
    return out;
}

}  // namespace omqe
