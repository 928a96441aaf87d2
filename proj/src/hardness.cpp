// Reduction databases for the lower bounds, and the tree gadget they share.
#include "omqe/hardness.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "omqe/analysis.hpp"
#include "omqe/chase.hpp"
#include "omqe/syntax.hpp"

namespace omqe {

std::string encode(const CQ& q, const AssignmentConstant& c) {
    std::string s = q.var_names[c.x];
    for (std::size_t i = 0; i < c.f.size(); ++i)
        if (c.f[i]) s += "__" + std::to_string(i) + "-" + std::to_string(*c.f[i]);
    return s;
}

int depth_cap() {
    if (const char* v = std::getenv("OMQE_DEPTH_CAP")) {
        int n = std::atoi(v);
        if (n >= 1) return n;
    }
    return 10;
}

namespace {

constexpr std::size_t kTreeNodeBudget = 2'000'000;

std::vector<RoleId> sigma_roles(const Signature& sigma) {
    std::vector<RoleId> out;
    for (Id r : sigma.roles) {
        out.push_back(make_role(r, false));
        out.push_back(make_role(r, true));
    }
    return out;
}

TreeGadget prefix(const Signature& sigma, int depth) {
    TreeGadget t;
    t.depth = depth;
    const std::vector<RoleId> roles = sigma_roles(sigma);
    t.words.push_back({});
    std::vector<std::size_t> parent{0};
    for (std::size_t i = 0; i < t.words.size(); ++i) {
        if (static_cast<int>(t.words[i].size()) == depth) continue;
        for (RoleId r : roles) {
            if (!t.words[i].empty() && t.words[i].back() == inv(r)) continue;
            if (t.words.size() == kTreeNodeBudget)
                throw DepthCapExceeded("tree prefix of depth " + std::to_string(depth) + " exceeds " +
                                       std::to_string(kTreeNodeBudget) + " nodes");
            auto w = t.words[i];
            w.push_back(r);
            t.words.push_back(std::move(w));
            parent.push_back(i);
        }
    }
    for (std::size_t i = 0; i < t.words.size(); ++i) t.nodes.push_back(constant_id("tree_" + std::to_string(i)));
    for (std::size_t i = 0; i < t.words.size(); ++i) {
        for (Id a : sigma.concepts) t.tree.add_unary(a, t.nodes[i]);
        if (i == 0) continue;
        RoleId r = t.words[i].back();
        Id from = t.nodes[parent[i]], to = t.nodes[i];
        if (is_inverse(r)) std::swap(from, to);
        t.tree.add_binary(role_name(r), from, to);
    }

    // D_R: R(ε,R) and everything below R.
    for (std::size_t child = 1; child < t.words.size() && t.words[child].size() == 1; ++child) {
        TreeGadget::Fragment f;
        f.role = t.words[child][0];
        std::vector<std::size_t> local(t.words.size(), SIZE_MAX);
        f.members.push_back(0);
        local[0] = 0;
        for (std::size_t i = child; i < t.words.size(); ++i) {
            if (t.words[i][0] != f.role) continue;
            local[i] = f.members.size();
            f.members.push_back(i);
            for (Id a : sigma.concepts) f.unary.push_back({a, static_cast<Id>(local[i])});
            RoleId r = t.words[i].back();
            Id from = static_cast<Id>(local[parent[i]]), to = static_cast<Id>(local[i]);
            if (is_inverse(r)) std::swap(from, to);
            f.binary.push_back({role_name(r), from, to});
        }
        t.fragments.push_back(std::move(f));
    }
    return t;
}

}  // namespace

TreeGadget build_d_tree(Reasoner& r, const Signature& sigma, int cap) {
    Signature all = r.ontology().signature();
    all.merge(sigma);
    std::vector<Id> nonempty;
    for (Id a : all.concepts)
        if (is_nonempty_concept(r, a, sigma)) nonempty.push_back(a);

    for (int depth = 1; depth <= cap; ++depth) {
        TreeGadget t = prefix(sigma, depth);
        Database ch = chase(r, t.tree);
        bool complete = std::all_of(nonempty.begin(), nonempty.end(),
                                    [&](Id a) { return ch.has_unary(a, t.nodes[0]); });
        if (complete) return t;
    }
    throw DepthCapExceeded("no tree prefix up to depth " + std::to_string(cap) +
                           " entails every non-empty concept name at its root");
}

void attach_trees(Database& d, const TreeGadget& t, const std::vector<Id>& at) {
    RoleIndex index(d);
    std::vector<Id> ids;
    for (Id c : at) {
        const std::string base = constant_str(c) + "__w";
        for (const auto& f : t.fragments) {
            if (!index.successors(f.role, c).empty()) continue;
            ids.assign(f.members.size(), c);
            for (std::size_t i = 1; i < f.members.size(); ++i) ids[i] = constant_id(base + std::to_string(f.members[i]));
            for (const auto& u : f.unary) d.add_unary(u.pred, ids[u.c]);
            for (const auto& b : f.binary) d.add_binary(b.role, ids[b.a], ids[b.b]);
        }
    }
}

std::vector<std::vector<std::size_t>> reachable_targets(const Reasoner& r, const CQ& q, const std::vector<Var>& y) {
    std::vector<std::vector<std::size_t>> out(q.num_vars());
    for (Var x = 0; x < q.num_vars(); ++x) {
        std::vector<Var> reach = functional_closure(r, q, {x});
        for (std::size_t i = 0; i < y.size(); ++i)
            if (std::find(reach.begin(), reach.end(), y[i]) != reach.end()) out[x].push_back(i);
    }
    return out;
}

namespace {

void require_shape(const Reasoner& r, const OMQ& q) {
    if (!r.ontology().ris.empty()) throw NotApplicable("the ontology has role inclusions");
    if (!self_join_free(q.q)) throw NotApplicable("the query has self-joins");
    if (!connected(q.q)) throw NotApplicable("the query is not connected");
}

// Shared construction of D0 and the final database.
class CoreBuilder {
public:
    CoreBuilder(Reasoner& r, const OMQ& q, std::vector<Var> y) : r_(r), q_(q) {
        out_.y = std::move(y);
        yx_ = reachable_targets(r, q.q, out_.y);
    }

    // Y_x ∪ Y_y for the binary Σ-atoms of q.
    std::vector<std::pair<const Atom*, std::vector<std::size_t>>> atoms() const {
        std::vector<std::pair<const Atom*, std::vector<std::size_t>>> out;
        for (const Atom& a : q_.q.atoms) {
            if (!a.binary || !q_.sigma.roles.count(a.pred)) continue;
            out.emplace_back(&a, sets::unite(yx_[a.x], yx_[a.y]));
        }
        return out;
    }

    // r(⟨x, f^w_x⟩, ⟨y, f^w_y⟩); positions of w outside Y_x ∪ Y_y are ignored.
    void emit(const Atom& a, const std::vector<int>& w) { out_.db.add_binary(a.pred, constant(a.x, w), constant(a.y, w)); }

    Reduction finish() {
        for (Id c : order_)
            for (Id a : q_.sigma.concepts) out_.db.add_unary(a, c);
        out_.core_facts = out_.db.size();
        TreeGadget t = build_d_tree(r_, q_.sigma);
        out_.tree_depth = t.depth;
        attach_trees(out_.db, t, order_);
        return std::move(out_);
    }

private:
    Id constant(Var x, const std::vector<int>& w) {
        AssignmentConstant c{x, std::vector<std::optional<int>>(out_.y.size())};
        for (std::size_t i : yx_[x]) c.f[i] = w[i];
        Id id = constant_id(encode(q_.q, c));
        if (out_.core.emplace(id, std::move(c)).second) order_.push_back(id);
        return id;
    }

    Reasoner& r_;
    const OMQ& q_;
    Reduction out_;
    std::vector<std::vector<std::size_t>> yx_;
    std::vector<Id> order_;
};

bool has(const std::vector<std::size_t>& z, std::size_t i) { return std::find(z.begin(), z.end(), i) != z.end(); }

}  // namespace

Reduction gen_triangle_db(Reasoner& r, const OMQ& q, const std::vector<Edge>& g, std::optional<std::vector<Var>> cycle) {
    require_shape(r, q);
    if (!cycle) cycle = classify(r, q).cycle;
    if (!cycle) throw NotApplicable("the Gaifman graph of q+ is chordal");
    if (cycle->size() < 4) throw NotApplicable("the cycle must have length at least 4");

    std::set<Edge> e;
    std::set<int> v;
    for (auto [a, b] : g) {
        if (a == b) throw std::invalid_argument("graph has a self-loop at " + std::to_string(a));
        e.insert({a, b});
        e.insert({b, a});
        v.insert(a);
        v.insert(b);
    }

    CoreBuilder core(r, q, *cycle);
    const std::size_t k = cycle->size() - 1;
    for (const auto& [atom, z] : core.atoms()) {
        const bool first = has(z, 0), last = has(z, k);
        std::vector<int> w(k + 1);
        if (first)
            for (auto [a, b] : e) {
                std::fill(w.begin(), w.end(), b);
                w[0] = a;
                core.emit(*atom, w);
            }
        if (last)
            for (auto [a, b] : e) {
                std::fill(w.begin(), w.end(), a);
                w[k] = b;
                core.emit(*atom, w);
            }
        // The third rule quantifies over a vertex it never uses: one fact
        // per vertex b is all it produces.
        if (!first && !last)
            for (int b : v) {
                std::fill(w.begin(), w.end(), b);
                core.emit(*atom, w);
            }
    }
    return core.finish();
}

Reduction gen_hyperclique_db(Reasoner& r, const OMQ& q, const std::vector<Hyperedge>& h,
                             std::optional<std::vector<Var>> clique) {
    require_shape(r, q);
    if (!clique) clique = classify(r, q).clique;
    if (!clique) throw NotApplicable("the hypergraph of q+ is conformal");
    const std::size_t k = clique->size() - 1;
    if (k < 2) throw NotApplicable("the uncovered clique must have at least 3 variables");

    std::set<Hyperedge> edges;
    for (Hyperedge e : h) {
        sets::normalize(e);
        if (e.size() != k)
            throw NotApplicable("hyperedges must have " + std::to_string(k) + " distinct vertices for this query");
        edges.insert(std::move(e));
    }

    CoreBuilder core(r, q, *clique);
    for (const auto& [atom, z] : core.atoms()) {
        if (z.size() > k) throw NotApplicable("an atom of q+ covers the whole clique");
        std::vector<int> w(k + 1, 0);
        std::vector<bool> used(k);
        for (const auto& e : edges) {
            // Every injective assignment of e's vertices to the positions in z.
            auto rec = [&](auto&& self, std::size_t i) -> void {
                if (i == z.size()) {
                    core.emit(*atom, w);
                    return;
                }
                for (std::size_t j = 0; j < k; ++j) {
                    if (used[j]) continue;
                    used[j] = true;
                    w[z[i]] = e[j];
                    self(self, i + 1);
                    used[j] = false;
                }
            };
            rec(rec, 0);
        }
    }
    return core.finish();
}

MMReduction gen_mm_db(Reasoner& r, const OMQ& q, const Matrix& m1, const Matrix& m2, std::optional<std::vector<Var>> path) {
    require_shape(r, q);
    Verdict v = classify(r, q);
    if (!v.ext_acyclic || v.ext_free_connex) throw NotApplicable("q+ with extended answers must be acyclic and not free-connex");
    if (!path) path = v.path;
    if (!path || path->size() < 3) throw NotApplicable("no bad path");

    CoreBuilder core(r, q, *path);
    const std::size_t k = path->size() - 1;
    std::set<int> middle;
    for (auto [a, b] : m1) middle.insert(b);
    for (auto [b, c] : m2) middle.insert(b);
    for (const auto& [atom, z] : core.atoms()) {
        std::vector<int> w(k + 1);
        if (has(z, 0)) {
            for (auto [a, b] : m1) {
                std::fill(w.begin(), w.end(), b);
                w[0] = a;
                core.emit(*atom, w);
            }
        } else if (has(z, k)) {
            for (auto [b, c] : m2) {
                std::fill(w.begin(), w.end(), b);
                w[k] = c;
                core.emit(*atom, w);
            }
        } else {
            for (int b : middle) {
                std::fill(w.begin(), w.end(), b);
                core.emit(*atom, w);
            }
        }
    }

    auto yx = reachable_targets(r, q.q, *path);
    auto position = [&](std::size_t target) {
        for (std::size_t i = 0; i < q.q.answers.size(); ++i)
            if (has(yx[q.q.answers[i]], target)) return i;
        throw NotApplicable("no answer variable reaches an end of the bad path");
    };
    MMReduction out;
    out.first = position(0);
    out.second = position(k);
    static_cast<Reduction&>(out) = core.finish();
    return out;
}

std::optional<std::pair<int, int>> extract_entry(const MMReduction& m, const std::vector<Id>& answer) {
    auto a = m.core.find(answer.at(m.first));
    auto b = m.core.find(answer.at(m.second));
    if (a == m.core.end() || b == m.core.end()) return std::nullopt;
    const auto& fa = a->second.f.front();
    const auto& fb = b->second.f.back();
    if (!fa || !fb) return std::nullopt;
    return std::pair{*fa, *fb};
}

OMQ bmm_omq() {
    Ontology o = parse_ontology("A sub exists inv(f) . top\nfunc(f)\n");
    return OMQ::with_full_signature(o, parse_query("q(x,z,y) :- r1(x,u1), f(z,u1), f(z,u2), r2(u2,y)."));
}

BmmInstance gen_bmm_instance(const Matrix& m1, const Matrix& m2) {
    BmmInstance out{bmm_omq(), {}};
    const Id a = concept_id("A"), r1 = role_name_id("r1"), r2 = role_name_id("r2");
    auto c = [](int i) { return constant_id(std::to_string(i)); };
    for (auto [i, j] : m1) {
        out.db.add_binary(r1, c(i), c(j));
        out.db.add_unary(a, c(j));
    }
    for (auto [i, j] : m2) {
        out.db.add_binary(r2, c(i), c(j));
        out.db.add_unary(a, c(i));
    }
    return out;
}

Matrix random_matrix(std::mt19937_64& rng, int n, double density) {
    Matrix m;
    if (density > 0.1) {
        std::bernoulli_distribution bit(density);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (bit(rng)) m.insert({i, j});
        return m;
    }
    // Sparse: draw the row size, then distinct columns.
    std::binomial_distribution<int> count(n, density);
    std::uniform_int_distribution<int> column(0, n - 1);
    for (int i = 0; i < n; ++i) {
        int k = count(rng);
        std::set<int> row;
        while (static_cast<int>(row.size()) < k) row.insert(column(rng));
        for (int j : row) m.insert({i, j});
    }
    return m;
}

std::vector<std::vector<int>> parse_int_rows(std::string_view text) {
    std::vector<std::vector<int>> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::vector<int> row;
        std::string tok;
        while (fields >> tok) {
            std::size_t used = 0;
            int x = 0;
            try {
                x = std::stoi(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) throw ParseError(number, 1, "expected an integer, got '" + tok + "'");
            row.push_back(x);
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

std::pair<Matrix, Matrix> parse_matrices(std::string_view text) {
    std::pair<Matrix, Matrix> m;
    int line = 0;
    for (const auto& row : parse_int_rows(text)) {
        ++line;
        if (row.size() != 3 || (row[0] != 1 && row[0] != 2))
            throw ParseError(line, 1, "expected '<1|2> <row> <column>'");
        (row[0] == 1 ? m.first : m.second).insert({row[1], row[2]});
    }
    return m;
}

}  // namespace omqe
