/*
 * Complete-answer enumeration.
 *
 * Pipeline: U_{D,Q} with a mark on every database constant, the extended
 * database D₀⁺ over the fresh symbols of q₀⁺, and a join enumerator.
 *
 * The join enumerator first eliminates variables that are not output
 * variables: a non-output variable that occurs in a single relation is
 * projected away, and a relation whose variables are covered by another
 * relation is semijoined into it and dropped. Both steps preserve the
 * projected join exactly. If only output variables remain, the remaining
 * relations form an acyclic full join; after the two semijoin passes every
 * row takes part in an answer, and answers are produced by nested cursors
 * over a join tree in preorder, each cursor reading a hash index keyed by
 * the variables it shares with its parent. Otherwise the answers are
 * computed up front by backtracking.
 */
#include "omqe/enumerate.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>
#include <absl/hash/hash.h>

#include "omqe/chase.hpp"

namespace omqe {

using Key = std::vector<Id>;
using KeyHash = absl::Hash<Key>;

void Relation::push(const Id* values) {
    rows.insert(rows.end(), values, values + vars.size());
    ++count;
}

namespace {

std::vector<Var> atom_vars(const Atom& a) {
    if (!a.binary || a.x == a.y) return {a.x};
    return {a.x, a.y};
}

int column(const Relation& rel, Var v) {
    auto it = std::find(rel.vars.begin(), rel.vars.end(), v);
    return it == rel.vars.end() ? -1 : static_cast<int>(it - rel.vars.begin());
}

// Rows of `rel` restricted to `cols`, deduplicated.
Relation project(const Relation& rel, const std::vector<int>& cols) {
    Relation out;
    for (int c : cols) out.vars.push_back(rel.vars[c]);
    if (cols.empty()) {
        out.count = rel.count > 0 ? 1 : 0;
        return out;
    }
    absl::flat_hash_set<Key, KeyHash> seen;
    seen.reserve(rel.count);
    Key k(cols.size());
    for (std::size_t i = 0; i < rel.count; ++i) {
        const Id* r = rel.row(i);
        for (std::size_t j = 0; j < cols.size(); ++j) k[j] = r[cols[j]];
        if (seen.insert(k).second) out.push(k.data());
    }
    return out;
}

// Rows of `keep` that agree with some row of `filter` on their shared variables.
Relation semijoin(const Relation& keep, const Relation& filter) {
    std::vector<int> kc, fc;
    for (std::size_t j = 0; j < filter.vars.size(); ++j) {
        int c = column(keep, filter.vars[j]);
        if (c >= 0) {
            kc.push_back(c);
            fc.push_back(static_cast<int>(j));
        }
    }
    Relation out;
    out.vars = keep.vars;
    if (filter.count == 0) return out;
    if (kc.empty()) return keep;
    absl::flat_hash_set<Key, KeyHash> keys;
    keys.reserve(filter.count);
    Key k(kc.size());
    for (std::size_t i = 0; i < filter.count; ++i) {
        const Id* r = filter.row(i);
        for (std::size_t j = 0; j < fc.size(); ++j) k[j] = r[fc[j]];
        keys.insert(k);
    }
    for (std::size_t i = 0; i < keep.count; ++i) {
        const Id* r = keep.row(i);
        for (std::size_t j = 0; j < kc.size(); ++j) k[j] = r[kc[j]];
        if (keys.count(k)) out.push(r);
    }
    return out;
}

bool covers(const Relation& big, const Relation& small) {
    for (Var v : small.vars)
        if (column(big, v) < 0) return false;
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// D₀⁺

std::vector<Relation> build_d0_plus(const Reasoner& r, const ExtendedQuery& ext, const Database& d0) {
    const CQ& q = ext.base;
    RoleIndex index(d0);
    std::vector<Id> adom = d0.adom();

    // Functional steps u -> v over role R: h(v) is the unique R-successor of h(u).
    struct Step {
        Var from;
        RoleId role;
    };
    std::vector<std::vector<std::pair<Var, RoleId>>> fedges(q.num_vars());
    for (const auto& a : q.atoms) {
        if (!a.binary) continue;
        RoleId fwd = make_role(a.pred, false);
        if (r.entails_func(fwd)) fedges[a.x].push_back({a.y, fwd});
        if (r.entails_func(inv(fwd))) fedges[a.y].push_back({a.x, inv(fwd)});
    }

    std::vector<Relation> out;
    out.reserve(ext.atoms.size());
    for (const auto& xa : ext.atoms) {
        const Atom& a = q.atoms[xa.origin];
        Relation rel;
        rel.vars = xa.vars;
        const std::vector<Var> base = atom_vars(a);

        // Breadth-first derivation of the extra variables.
        std::vector<std::pair<Var, Step>> plan;
        std::vector<bool> known(q.num_vars(), false);
        for (Var v : base) known[v] = true;
        std::deque<Var> todo(base.begin(), base.end());
        while (!todo.empty()) {
            Var u = todo.front();
            todo.pop_front();
            for (auto [v, role] : fedges[u])
                if (!known[v]) {
                    known[v] = true;
                    plan.push_back({v, Step{u, role}});
                    todo.push_back(v);
                }
        }
        // Atoms of q₀ inside ȳ⁺ that h must satisfy.
        std::vector<const Atom*> checks;
        for (const auto& b : q.atoms)
            if (known[b.x] && known[b.y]) checks.push_back(&b);

        std::vector<Id> h(q.num_vars(), 0);
        std::vector<Id> row(xa.vars.size());
        auto extend_from = [&] {
            for (const auto& [v, step] : plan) {
                const auto& succ = index.successors(step.role, h[step.from]);
                if (succ.empty()) return;
                if (succ.size() > 1)
                    throw std::logic_error("database violates functionality of " + role_str(step.role));
                h[v] = succ[0];
            }
            for (const Atom* b : checks) {
                bool ok = b->binary ? d0.has_binary(b->pred, h[b->x], h[b->y])
                                    : b->pred == kTop || d0.has_unary(b->pred, h[b->x]);
                if (!ok) return;
            }
            for (std::size_t j = 0; j < xa.vars.size(); ++j) row[j] = h[xa.vars[j]];
            rel.push(row.data());
        };

        if (!a.binary && a.pred == kTop) {
            for (Id c : adom) {
                h[a.x] = c;
                extend_from();
            }
        } else if (!a.binary) {
            for (const auto& f : d0.unary())
                if (f.pred == a.pred) {
                    h[a.x] = f.c;
                    extend_from();
                }
        } else {
            for (const auto& f : d0.binary()) {
                if (f.role != a.pred || (a.x == a.y && f.a != f.b)) continue;
                h[a.x] = f.a;
                h[a.y] = f.b;
                extend_from();
            }
        }
        out.push_back(std::move(rel));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Join enumeration

struct JoinEnumerator::Impl {
    std::vector<Var> out;
    bool streaming = false;
    bool done = false;
    bool started = false;

    // Streaming mode.
    std::vector<Relation> rels;                  // one per tree node
    std::vector<std::size_t> order;              // preorder
    std::vector<int> parent;                     // -1 for the root
    std::vector<std::vector<int>> key_cols;      // columns shared with the parent
    std::vector<std::vector<Var>> key_vars;
    std::vector<absl::flat_hash_map<Key, std::vector<std::uint32_t>, KeyHash>> index;
    std::vector<std::uint32_t> all_rows;
    std::vector<const std::vector<std::uint32_t>*> list;
    std::vector<std::size_t> pos;
    std::vector<Id> val;
    Key key;

    // Materialized mode.
    std::vector<std::vector<Id>> answers;
    std::size_t cursor = 0;

    void assign(std::size_t k) {
        std::size_t node = order[k];
        const Id* r = rels[node].row((*list[k])[pos[k]]);
        for (std::size_t j = 0; j < rels[node].vars.size(); ++j) val[rels[node].vars[j]] = r[j];
    }

    void open_from(std::size_t k) {
        for (; k < order.size(); ++k) {
            std::size_t node = order[k];
            if (parent[node] < 0) {
                list[k] = &all_rows;
            } else {
                key.resize(key_vars[node].size());
                for (std::size_t j = 0; j < key.size(); ++j) key[j] = val[key_vars[node][j]];
                list[k] = &index[node].at(key);
            }
            pos[k] = 0;
            assign(k);
        }
    }

    void emit(std::vector<Id>& t) const {
        t.resize(out.size());
        for (std::size_t j = 0; j < out.size(); ++j) t[j] = val[out[j]];
    }
};

namespace {

// Backtracking evaluation of the projected join; used when no constant-delay
// structure exists.
std::vector<std::vector<Id>> materialize(const std::vector<Relation>& rels, const std::vector<Var>& out) {
    for (const auto& r : rels)
        if (r.count == 0) return {};
    Var max_var = 0;
    for (const auto& r : rels)
        for (Var v : r.vars) max_var = std::max(max_var, v);
    for (Var v : out) max_var = std::max(max_var, v);

    // Relation order: repeatedly take the one sharing most bound variables.
    std::vector<std::size_t> order;
    std::vector<bool> used(rels.size(), false), bound(max_var + 1, false);
    std::vector<std::vector<int>> bound_cols(rels.size());
    for (std::size_t step = 0; step < rels.size(); ++step) {
        int best = -1, best_score = -1;
        for (std::size_t i = 0; i < rels.size(); ++i) {
            if (used[i]) continue;
            int s = 0;
            for (Var v : rels[i].vars) s += bound[v];
            if (s > best_score) best = static_cast<int>(i), best_score = s;
        }
        used[best] = true;
        order.push_back(best);
        for (std::size_t j = 0; j < rels[best].vars.size(); ++j)
            if (bound[rels[best].vars[j]]) bound_cols[best].push_back(static_cast<int>(j));
        for (Var v : rels[best].vars) bound[v] = true;
    }
    std::vector<absl::flat_hash_map<Key, std::vector<std::uint32_t>, KeyHash>> index(rels.size());
    for (std::size_t i = 0; i < rels.size(); ++i)
        for (std::uint32_t row = 0; row < rels[i].count; ++row) {
            Key k;
            for (int c : bound_cols[i]) k.push_back(rels[i].row(row)[c]);
            index[i][k].push_back(row);
        }

    std::set<std::vector<Id>> found;
    std::vector<Id> val(max_var + 1, 0);
    std::vector<Id> tuple(out.size());
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == order.size()) {
            for (std::size_t j = 0; j < out.size(); ++j) tuple[j] = val[out[j]];
            found.insert(tuple);
            return;
        }
        const Relation& rel = rels[order[k]];
        Key key;
        for (int c : bound_cols[order[k]]) key.push_back(val[rel.vars[c]]);
        auto it = index[order[k]].find(key);
        if (it == index[order[k]].end()) return;
        for (std::uint32_t row : it->second) {
            for (std::size_t j = 0; j < rel.vars.size(); ++j) val[rel.vars[j]] = rel.row(row)[j];
            self(self, k + 1);
        }
    };
    rec(rec, 0);
    return {found.begin(), found.end()};
}

}  // namespace

JoinEnumerator::JoinEnumerator(std::vector<Relation> relations, std::vector<Var> out) : impl_(std::make_unique<Impl>()) {
    Impl& s = *impl_;
    s.out = out;
    const std::vector<Relation> original = relations;
    auto is_out = [&](Var v) { return std::find(out.begin(), out.end(), v) != out.end(); };

    // Variable elimination towards the output variables.
    std::vector<Relation> rels = std::move(relations);
    std::vector<bool> alive(rels.size(), true);
    for (bool changed = true; changed;) {
        changed = false;
        std::map<Var, int> occurrences;
        for (std::size_t i = 0; i < rels.size(); ++i)
            if (alive[i])
                for (Var v : rels[i].vars) ++occurrences[v];
        for (std::size_t i = 0; i < rels.size(); ++i) {
            if (!alive[i]) continue;
            std::vector<int> keep;
            for (std::size_t j = 0; j < rels[i].vars.size(); ++j)
                if (is_out(rels[i].vars[j]) || occurrences[rels[i].vars[j]] > 1) keep.push_back(static_cast<int>(j));
            if (keep.size() < rels[i].vars.size()) {
                rels[i] = project(rels[i], keep);
                changed = true;
            }
        }
        for (std::size_t i = 0; i < rels.size() && !changed; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = 0; j < rels.size(); ++j) {
                if (j == i || !alive[j] || !covers(rels[j], rels[i])) continue;
                rels[j] = semijoin(rels[j], rels[i]);
                alive[i] = false;
                changed = true;
                break;
            }
        }
    }
    std::vector<Relation> rest;
    for (std::size_t i = 0; i < rels.size(); ++i)
        if (alive[i]) rest.push_back(std::move(rels[i]));

    bool only_out = true;
    for (const auto& r : rest)
        for (Var v : r.vars) only_out = only_out && is_out(v);
    Hypergraph h;
    for (const auto& r : rest) h.push_back(r.vars);
    std::optional<JoinTree> tree;
    if (only_out) tree = join_tree(h);

    if (!tree) {
        s.answers = materialize(original, out);
        return;
    }
    s.streaming = true;
    s.rels = std::move(rest);
    const std::size_t n = s.rels.size();
    for (const auto& r : s.rels)
        if (r.count == 0) {
            s.done = true;
            return;
        }

    // Root the tree at node 0 and fix a preorder.
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [a, b] : tree->edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    s.parent.assign(n, -1);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack;
    for (std::size_t root = 0; root < n; ++root) {
        if (seen[root]) continue;
        // A join tree is connected; a second root only appears for nullary leftovers.
        if (root > 0) s.parent[root] = 0;
        seen[root] = true;
        stack.push_back(root);
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            s.order.push_back(u);
            for (auto it = adj[u].rbegin(); it != adj[u].rend(); ++it)
                if (!seen[*it]) {
                    seen[*it] = true;
                    s.parent[*it] = static_cast<int>(u);
                    stack.push_back(*it);
                }
        }
    }

    // Full reduction: leaves to root, then root to leaves.
    for (auto it = s.order.rbegin(); it != s.order.rend(); ++it)
        if (s.parent[*it] >= 0) s.rels[s.parent[*it]] = semijoin(s.rels[s.parent[*it]], s.rels[*it]);
    for (std::size_t u : s.order)
        if (s.parent[u] >= 0) s.rels[u] = semijoin(s.rels[u], s.rels[s.parent[u]]);
    for (const auto& r : s.rels)
        if (r.count == 0) {
            s.done = true;
            return;
        }

    // Child indexes keyed by the variables shared with the parent.
    s.key_cols.resize(n);
    s.key_vars.resize(n);
    s.index.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        if (s.parent[u] < 0) continue;
        const Relation& p = s.rels[s.parent[u]];
        for (std::size_t j = 0; j < s.rels[u].vars.size(); ++j)
            if (column(p, s.rels[u].vars[j]) >= 0) {
                s.key_cols[u].push_back(static_cast<int>(j));
                s.key_vars[u].push_back(s.rels[u].vars[j]);
            }
        auto& idx = s.index[u];
        idx.reserve(s.rels[u].count);
        Key k(s.key_cols[u].size());
        for (std::uint32_t row = 0; row < s.rels[u].count; ++row) {
            for (std::size_t j = 0; j < k.size(); ++j) k[j] = s.rels[u].row(row)[s.key_cols[u][j]];
            idx[k].push_back(row);
        }
    }
    s.all_rows.resize(s.rels[s.order[0]].count);
    for (std::uint32_t i = 0; i < s.all_rows.size(); ++i) s.all_rows[i] = i;
    Var max_var = 0;
    for (const auto& r : s.rels)
        for (Var v : r.vars) max_var = std::max(max_var, v);
    for (Var v : out) max_var = std::max(max_var, v);
    s.val.assign(max_var + 1, 0);
    s.list.assign(n, nullptr);
    s.pos.assign(n, 0);
}

JoinEnumerator::~JoinEnumerator() = default;
JoinEnumerator::JoinEnumerator(JoinEnumerator&&) noexcept = default;
JoinEnumerator& JoinEnumerator::operator=(JoinEnumerator&&) noexcept = default;

bool JoinEnumerator::constant_delay() const { return impl_->streaming; }

bool JoinEnumerator::next(std::vector<Id>& tuple) {
    Impl& s = *impl_;
    if (s.done) return false;
    if (!s.streaming) {
        if (s.cursor == s.answers.size()) {
            s.done = true;
            return false;
        }
        tuple = s.answers[s.cursor++];
        return true;
    }
    if (!s.started) {
        s.started = true;
        s.open_from(0);
        s.emit(tuple);
        return true;
    }
    for (std::size_t k = s.order.size(); k-- > 0;) {
        if (++s.pos[k] < s.list[k]->size()) {
            s.assign(k);
            s.open_from(k + 1);
            s.emit(tuple);
            return true;
        }
    }
    s.done = true;
    return false;
}

// ---------------------------------------------------------------------------
// Complete answers

Id answer_mark() {
    static const Id mark = fresh_concept("_D");
    return mark;
}

CQ mark_answers(const CQ& q) {
    CQ q0 = q;
    for (Var x : q.answers) q0.atoms.push_back(Atom{answer_mark(), false, x, x});
    return q0;
}

bool EnumState::next(std::vector<Id>& answer) {
    if (!join_.next(buffer_)) return false;
    answer.assign(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(width_));
    return true;
}

EnumState preprocess_complete(Reasoner& r, const OMQ& omq, const Database& d, std::size_t budget) {
    const CQ& q = omq.q;
    ExtendedQuery check = fa_extension(r, q, AnswerMode::Extended);
    if (!is_acyclic(check) || !is_free_connex(check))
        throw NotEligible("q+ with extended answer variables is not acyclic and free-connex");
    if (!omq.accepts(d)) throw std::invalid_argument("database uses symbols outside the data schema");

    UniversalModel u = build_u_dq(r, d, q, budget);
    Database d0 = std::move(u.facts);
    for (Id c : u.constants) d0.add_unary(answer_mark(), c);

    ExtendedQuery ext = fa_extension(r, mark_answers(q), AnswerMode::Extended);
    std::vector<Relation> rels = build_d0_plus(r, ext, d0);
    JoinEnumerator join(std::move(rels), ext.extended);
    return EnumState(std::move(join), q.answers.size(), d0.size());
}

std::vector<std::vector<Id>> complete_answers(Reasoner& r, const OMQ& q, const Database& d) {
    EnumState s = preprocess_complete(r, q, d);
    std::vector<std::vector<Id>> out;
    std::vector<Id> t;
    while (s.next(t)) out.push_back(t);
    return out;
}

}  // namespace omqe
