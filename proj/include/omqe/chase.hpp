#ifndef OMQE_CHASE_HPP
#define OMQE_CHASE_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "omqe/model.hpp"
#include "omqe/reasoner.hpp"

namespace omqe {

class Unsatisfiable : public std::runtime_error {
public:
    explicit Unsatisfiable(const std::string& what) : std::runtime_error(what) {}
};

/*
 * Propositional Horn encoding of the chase. Variables stand for facts
 * A(c) and r(c,c') over the active domain; clauses are definite.
 */
struct HornFormula {
    struct Clause {
        std::vector<std::uint32_t> body;  // empty for unit facts
        std::uint32_t head;
    };
    struct Fact {
        bool binary;
        Id pred;
        Id a;
        Id b;
    };
    std::vector<Fact> vars;  // meaning of each variable
    std::vector<Clause> clauses;

    std::size_t num_vars() const { return vars.size(); }
};

HornFormula build_horn(Reasoner& r, const Database& d);
std::vector<bool> minimal_model(const HornFormula& f);

// ch(D): throws Unsatisfiable on a functional clash among constants.
Database chase(Reasoner& r, const Database& d);
// Direct application of the chase rules; no clash detection.
Database naive_chase(Reasoner& r, const Database& d);

// First pair of distinct named successors under an entailed-functional role,
// or nothing. Expects a chased database.
bool has_functional_clash(const Reasoner& r, const Database& chased);
bool is_satisfiable(Reasoner& r, const Database& d);

// D,O ⊨ A(c) for some Σ-database D and constant c.
bool is_nonempty_concept(Reasoner& r, Id a, const Signature& sigma);

}  // namespace omqe

#endif
