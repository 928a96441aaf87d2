// Minimal partial answers with single and indexed wildcards.
#include "omqe/partial.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "omqe/analysis.hpp"
#include "omqe/enumerate.hpp"

namespace omqe {

WildcardTuple canonicalize_multi(const std::vector<Id>& t, const std::function<bool(Id)>& is_null) {
    WildcardTuple w;
    w.mode = WildcardMode::Multi;
    std::map<Id, Id> index;
    for (Id e : t) {
        if (!is_null(e)) {
            w.entries.push_back(Entry::constant(e));
            continue;
        }
        auto it = index.try_emplace(e, static_cast<Id>(index.size() + 1)).first;
        w.entries.push_back(Entry::star(it->second));
    }
    return w;
}

WildcardTuple canonicalize_single(const std::vector<Id>& t, const std::function<bool(Id)>& is_null) {
    WildcardTuple w;
    w.mode = WildcardMode::Single;
    for (Id e : t) w.entries.push_back(is_null(e) ? Entry::star() : Entry::constant(e));
    return w;
}

namespace {

void check_shape(const OMQ& q, const WildcardTuple& c) {
    if (c.size() != q.q.answers.size())
        throw WildcardError("tuple has " + std::to_string(c.size()) + " positions, query has " +
                            std::to_string(q.q.answers.size()) + " answer variables");
    for (const auto& e : c.entries) {
        if (!e.wildcard) continue;
        if (c.mode == WildcardMode::Single && e.value != 0) throw WildcardError("indexed wildcard in single mode");
        if (c.mode == WildcardMode::Multi && e.value == 0) throw WildcardError("unindexed wildcard in multi mode");
    }
}

// Images of the answer variables of q over the query-directed model of d,
// computed through the extension with the original answer variables.
struct Images {
    UniversalModel model;
    JoinEnumerator join;
};

Images answer_images(Reasoner& r, const CQ& q, const Database& d, std::vector<Relation> extra, std::size_t budget,
                     const std::vector<Var>& out) {
    UniversalModel u = build_u_dq(r, d, q, budget);
    ExtendedQuery ext = fa_extension(r, q, AnswerMode::Original);
    std::vector<Relation> rels = build_d0_plus(r, ext, u.facts);
    for (auto& rel : extra) rels.push_back(std::move(rel));
    JoinEnumerator join(std::move(rels), out);
    return Images{std::move(u), std::move(join)};
}

WildcardTuple substitute(WildcardTuple t, Id from, Entry to) {
    for (auto& e : t.entries)
        if (e.wildcard && e.value == from) e = to;
    return renumber(t);
}

}  // namespace

bool is_partial_answer(Reasoner& r, const OMQ& omq, const Database& d, const WildcardTuple& c) {
    check_shape(omq, c);
    if (!omq.accepts(d)) throw std::invalid_argument("database uses symbols outside the data schema");

    // q': wildcard positions quantified; equal indexes share one variable.
    CQ q = omq.q;
    std::map<Id, Var> rep;
    std::vector<Var> subst(q.num_vars());
    for (Var v = 0; v < q.num_vars(); ++v) subst[v] = v;
    std::vector<Relation> bind;
    std::vector<Id> adom = d.adom();
    std::sort(adom.begin(), adom.end());
    std::vector<Var> answers;
    for (std::size_t i = 0; i < c.size(); ++i) {
        Var x = q.answers[i];
        const Entry& e = c.entries[i];
        if (!e.wildcard) {
            if (!std::binary_search(adom.begin(), adom.end(), e.value)) return false;
            Relation b;
            b.vars = {x};
            b.push(&e.value);
            bind.push_back(std::move(b));
            answers.push_back(x);
        } else if (c.mode == WildcardMode::Multi) {
            subst[x] = rep.try_emplace(e.value, x).first->second;
        }
    }
    for (auto& a : q.atoms) {
        a.x = subst[a.x];
        a.y = subst[a.y];
    }
    q.answers = answers;

    Images im = answer_images(r, q, d, std::move(bind), kDefaultFactBudget, {});
    std::vector<Id> t;
    return im.join.next(t);
}

std::vector<WildcardTuple> refinements(const WildcardTuple& c, const std::vector<Id>& constants) {
    std::vector<WildcardTuple> out;
    if (c.mode == WildcardMode::Single) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!c.entries[i].wildcard) continue;
            for (Id a : constants) {
                WildcardTuple b = c;
                b.entries[i] = Entry::constant(a);
                out.push_back(std::move(b));
            }
        }
        return out;
    }
    std::set<Id> indexes;
    for (const auto& e : c.entries)
        if (e.wildcard) indexes.insert(e.value);
    for (Id k : indexes)
        for (Id a : constants) out.push_back(substitute(c, k, Entry::constant(a)));
    for (Id i : indexes)
        for (Id j : indexes)
            if (i < j) out.push_back(substitute(c, j, Entry::star(i)));
    return out;
}

bool is_minimal_partial_answer(Reasoner& r, const OMQ& q, const Database& d, const WildcardTuple& c) {
    if (!is_partial_answer(r, q, d, c)) return false;
    std::vector<Id> adom = d.adom();
    for (const auto& b : refinements(c, adom))
        if (is_partial_answer(r, q, d, b)) return false;
    return true;
}

std::vector<WildcardTuple> strict_generalizations(const WildcardTuple& s) {
    std::vector<WildcardTuple> out;
    WildcardTuple g;
    g.mode = s.mode;
    g.entries.resize(s.size());
    // Multi mode: block k of g collects positions whose entries in s agree.
    std::vector<Entry> block_value;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == s.size()) {
            if (g != s) out.push_back(g);
            return;
        }
        const Entry& e = s.entries[i];
        if (!e.wildcard) {
            g.entries[i] = e;
            self(self, i + 1);
        }
        if (s.mode == WildcardMode::Single) {
            g.entries[i] = Entry::star();
            self(self, i + 1);
            return;
        }
        for (std::size_t k = 0; k < block_value.size(); ++k)
            if (block_value[k] == e) {
                g.entries[i] = Entry::star(static_cast<Id>(k + 1));
                self(self, i + 1);
            }
        block_value.push_back(e);
        g.entries[i] = Entry::star(static_cast<Id>(block_value.size()));
        self(self, i + 1);
        block_value.pop_back();
    };
    rec(rec, 0);
    return out;
}

std::vector<WildcardTuple> minimal_elements(const std::vector<WildcardTuple>& tuples) {
    // Dominance index: every tuple strictly above some element. Its size is
    // bounded by a function of the arity times the input size.
    std::set<WildcardTuple> dominated;
    for (const auto& s : tuples)
        for (auto& g : strict_generalizations(s)) dominated.insert(std::move(g));
    std::vector<WildcardTuple> out;
    for (const auto& t : tuples)
        if (!dominated.count(t)) out.push_back(t);
    return out;
}

PartialEnumerator::PartialEnumerator(Reasoner& r, const OMQ& omq, const Database& d, WildcardMode mode,
                                     std::size_t budget) {
    if (!omq.accepts(d)) throw std::invalid_argument("database uses symbols outside the data schema");
    ExtendedQuery orig = fa_extension(r, omq.q, AnswerMode::Original);
    eligible_ = is_acyclic(orig) && is_free_connex(orig);

    Images im = answer_images(r, omq.q, d, {}, budget, omq.q.answers);
    auto is_null = [&](Id e) { return im.model.is_null(e); };
    std::set<WildcardTuple> seen;
    std::vector<WildcardTuple> all;
    std::vector<Id> t;
    while (im.join.next(t)) {
        WildcardTuple w = mode == WildcardMode::Multi ? canonicalize_multi(t, is_null) : canonicalize_single(t, is_null);
        if (seen.insert(w).second) all.push_back(std::move(w));
    }
    answers_ = minimal_elements(all);
}

bool PartialEnumerator::next(WildcardTuple& out) {
    if (cursor_ == answers_.size()) return false;
    out = answers_[cursor_++];
    return true;
}

std::vector<WildcardTuple> enumerate_partial(Reasoner& r, const OMQ& q, const Database& d, WildcardMode mode) {
    PartialEnumerator e(r, q, d, mode);
    std::vector<WildcardTuple> out;
    WildcardTuple t;
    while (e.next(t)) out.push_back(t);
    return out;
}

}  // namespace omqe
