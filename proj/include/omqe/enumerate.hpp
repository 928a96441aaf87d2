#ifndef OMQE_ENUMERATE_HPP
#define OMQE_ENUMERATE_HPP

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "omqe/analysis.hpp"
#include "omqe/model.hpp"
#include "omqe/reasoner.hpp"
#include "omqe/umodel.hpp"

namespace omqe {

/// Thrown when an OMQ does not meet the structural condition an operation
/// relies on (for complete answers: q⁺ with extended answers acyclic and
/// free-connex).
class NotEligible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A relation over query variables, stored row-major. Zero-arity relations
/// use `count` alone (0 = false, 1 = true).
struct Relation {
    std::vector<Var> vars;
    std::vector<Id> rows;
    std::size_t count = 0;

    std::size_t arity() const { return vars.size(); }
    std::size_t size() const { return count; }
    const Id* row(std::size_t i) const { return rows.data() + i * vars.size(); }
    void push(const Id* values);
};

/// D₀⁺: one relation per atom of `ext`, holding R′(h(ȳ⁺)) for every
/// homomorphism h of q₀ restricted to ȳ⁺ into `d0`. `ext.base` is q₀. Each
/// fact of `d0` yields at most one row per atom; a second successor under an
/// entailed-functional role raises std::logic_error.
std::vector<Relation> build_d0_plus(const Reasoner& r, const ExtendedQuery& ext, const Database& d0);

/// Enumerates the join of a set of relations projected to `out` (distinct
/// variables). When the relations reduce to an acyclic full join over `out`
/// the enumeration has constant delay after linear preprocessing; otherwise
/// the answers are materialized during construction.
class JoinEnumerator {
public:
    JoinEnumerator(std::vector<Relation> relations, std::vector<Var> out);
    ~JoinEnumerator();
    JoinEnumerator(JoinEnumerator&&) noexcept;
    JoinEnumerator& operator=(JoinEnumerator&&) noexcept;

    /// Writes the next tuple (values of `out`, in order). False when exhausted.
    bool next(std::vector<Id>& tuple);
    bool constant_delay() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Preprocessed state for complete answers: U_{D,Q} with marks on the
/// database constants, D₀⁺ and the reduced join.
class EnumState {
public:
    /// Next complete answer (values of x̄). False when exhausted.
    bool next(std::vector<Id>& answer);

    std::size_t model_size() const { return model_facts_; }
    bool constant_delay() const { return join_.constant_delay(); }

private:
    friend EnumState preprocess_complete(Reasoner& r, const OMQ& q, const Database& d, std::size_t budget);
    EnumState(JoinEnumerator e, std::size_t width, std::size_t facts)
        : join_(std::move(e)), width_(width), model_facts_(facts) {}

    JoinEnumerator join_;
    std::vector<Id> buffer_;
    std::size_t width_ = 0;
    std::size_t model_facts_ = 0;
};

/// Throws NotEligible, Unsatisfiable, or std::invalid_argument when `d`
/// uses symbols outside Σ.
EnumState preprocess_complete(Reasoner& r, const OMQ& q, const Database& d,
                              std::size_t budget = kDefaultFactBudget);

/// Convenience: all complete answers.
std::vector<std::vector<Id>> complete_answers(Reasoner& r, const OMQ& q, const Database& d);

/// q with an extra unary atom on every answer variable; the concept name is
/// reserved for this purpose.
CQ mark_answers(const CQ& q);
Id answer_mark();

}  // namespace omqe

#endif
