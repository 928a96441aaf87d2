#ifndef OMQE_PARTIAL_HPP
#define OMQE_PARTIAL_HPP

#include <functional>
#include <vector>

#include "omqe/model.hpp"
#include "omqe/oracle.hpp"
#include "omqe/reasoner.hpp"
#include "omqe/umodel.hpp"
#include "omqe/wildcard.hpp"

namespace omqe {

// Nulls become '*k', numbered by first occurrence; the same null always
// gets the same index.
WildcardTuple canonicalize_multi(const std::vector<Id>& t, const std::function<bool(Id)>& is_null);
// Nulls become '*'.
WildcardTuple canonicalize_single(const std::vector<Id>& t, const std::function<bool(Id)>& is_null);

// Decision procedures. Both throw Unsatisfiable when d is unsatisfiable and
// WildcardError when the tuple does not fit the query.
bool is_partial_answer(Reasoner& r, const OMQ& q, const Database& d, const WildcardTuple& c);
bool is_minimal_partial_answer(Reasoner& r, const OMQ& q, const Database& d, const WildcardTuple& c);

// The one-step refinements tried by is_minimal_partial_answer: a wildcard
// (single: one occurrence; multi: every occurrence of one index) replaced by
// a constant of `constants`, and in multi mode two indexes merged.
std::vector<WildcardTuple> refinements(const WildcardTuple& c, const std::vector<Id>& constants);

// Every t with s ≺ t, for the given s.
std::vector<WildcardTuple> strict_generalizations(const WildcardTuple& s);

// Keeps the ≺-minimal tuples of a duplicate-free set.
std::vector<WildcardTuple> minimal_elements(const std::vector<WildcardTuple>& tuples);

// Minimal partial answers, computed from q⁺ with the original answer
// variables over the extended query-directed universal model. The set is
// exact; constant delay is only claimed for complete answers.
class PartialEnumerator {
public:
    PartialEnumerator(Reasoner& r, const OMQ& q, const Database& d, WildcardMode mode,
                      std::size_t budget = kDefaultFactBudget);

    bool next(WildcardTuple& out);
    // q⁺ with the original answer variables is acyclic and free-connex.
    bool eligible() const { return eligible_; }
    std::size_t size() const { return answers_.size(); }

private:
    std::vector<WildcardTuple> answers_;
    std::size_t cursor_ = 0;
    bool eligible_ = false;
};

std::vector<WildcardTuple> enumerate_partial(Reasoner& r, const OMQ& q, const Database& d, WildcardMode mode);

}  // namespace omqe

#endif
