#include "omqe/normalize.hpp"

#include <stdexcept>

namespace omqe {

namespace {

using Kind = Concept::Kind;

class Normalizer {
public:
    explicit Normalizer(Ontology& out) : out_(out) {}

    void axiom(const ConceptPtr& lhs, const ConceptPtr& rhs) {
        if (rhs->kind == Kind::Name) {
            into(lhs, rhs->name);
            return;
        }
        rhs_of(name_for(lhs), rhs);
    }

private:
    void emit(ConceptPtr l, ConceptPtr r) { out_.cis.push_back({std::move(l), std::move(r)}); }

    // Name standing for a left-hand side concept (top stays top).
    Id name_for(const ConceptPtr& c) {
        if (c->kind == Kind::Name) return c->name;
        if (c->kind == Kind::Top) return kTop;
        Id x = fresh_concept("_N");
        into(c, x);
        return x;
    }

    // c ⊑ a with a a concept name.
    void into(const ConceptPtr& c, Id a) {
        switch (c->kind) {
            case Kind::Top:
            case Kind::Name:
                emit(c, Concept::atomic(a));
                break;
            case Kind::Conj: {
                Id l = name_for(c->left);
                Id r = name_for(c->right);
                if (l == kTop) std::swap(l, r);
                if (l == kTop) emit(Concept::top(), Concept::atomic(a));
                else if (r == kTop || r == l) emit(Concept::atomic(l), Concept::atomic(a));
                else emit(Concept::conj(Concept::atomic(l), Concept::atomic(r)), Concept::atomic(a));
                break;
            }
            case Kind::Exists:
                emit(Concept::exists(c->role, Concept::atomic(name_for(c->left))), Concept::atomic(a));
                break;
        }
    }

    // a ⊑ d where a is a concept name or top.
    void rhs_of(Id a, const ConceptPtr& d) {
        switch (d->kind) {
            case Kind::Top:
                break;
            case Kind::Name:
                emit(Concept::atomic(a), d);
                break;
            case Kind::Conj:
                rhs_of(a, d->left);
                rhs_of(a, d->right);
                break;
            case Kind::Exists: {
                if (a == kTop) {
                    Id y = fresh_concept("_N");
                    emit(Concept::top(), Concept::atomic(y));
                    a = y;
                }
                const ConceptPtr& f = d->left;
                if (f->is_name_or_top()) {
                    emit(Concept::atomic(a), d);
                } else {
                    Id x = fresh_concept("_N");
                    emit(Concept::atomic(a), Concept::exists(d->role, Concept::atomic(x)));
                    rhs_of(x, f);
                }
                break;
            }
        }
    }

    Ontology& out_;
};

}  // namespace

NormalShape shape_of(const ConceptInclusion& ci) {
    const Concept& l = *ci.lhs;
    const Concept& r = *ci.rhs;
    if (r.kind == Kind::Name) {
        if (l.kind == Kind::Top) return NormalShape::TopIncl;
        if (l.kind == Kind::Name) return NormalShape::Conj;
        if (l.kind == Kind::Conj && l.left->kind == Kind::Name && l.right->kind == Kind::Name)
            return NormalShape::Conj;
        if (l.kind == Kind::Exists && l.left->is_name_or_top()) return NormalShape::ExistsLhs;
        return NormalShape::NotNormal;
    }
    if (r.kind == Kind::Exists && l.kind == Kind::Name && r.left->is_name_or_top()) return NormalShape::ExistsRhs;
    return NormalShape::NotNormal;
}

Ontology normalize(const Ontology& o) {
    Ontology out;
    Normalizer n(out);
    for (const auto& ci : o.cis) {
        if (shape_of(ci) != NormalShape::NotNormal) out.cis.push_back(ci);
        else n.axiom(ci.lhs, ci.rhs);
    }
    out.ris = o.ris;
    out.funcs = o.funcs;
    out.normalized = true;
    return out;
}

NormalAxioms flatten(const Ontology& o) {
    NormalAxioms ax;
    for (const auto& ci : o.cis) {
        const Concept& l = *ci.lhs;
        const Concept& r = *ci.rhs;
        switch (shape_of(ci)) {
            case NormalShape::TopIncl:
                ax.top_incl.push_back(r.name);
                break;
            case NormalShape::Conj:
                if (l.kind == Kind::Name) ax.conj.push_back({l.name, l.name, r.name});
                else ax.conj.push_back({l.left->name, l.right->name, r.name});
                break;
            case NormalShape::ExistsRhs:
                ax.ex_rhs.push_back({l.name, r.role, r.left->name_or_top()});
                break;
            case NormalShape::ExistsLhs:
                ax.ex_lhs.push_back({l.role, l.left->name_or_top(), r.name});
                break;
            case NormalShape::NotNormal:
                throw std::invalid_argument("concept inclusion is not in normal form");
        }
    }
    return ax;
}

}  // namespace omqe
