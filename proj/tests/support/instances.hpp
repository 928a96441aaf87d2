// Random small instances shared by the unit tests and the acceptance suite.
#pragma once

#include <random>

#include "omqe/model.hpp"

namespace omqe::fixtures {

struct InstanceShape {
    int concepts = 4;
    int roles = 2;
    int axioms = 6;
    int constants = 6;
    int facts = 10;
    double func_density = 0.3;
    bool inverses = true;
    bool role_inclusions = true;
};

// Normalized axioms over names X0.., p0.. (fresh per shape, shared across calls).
Ontology random_ontology(std::mt19937& rng, const InstanceShape& shape);
// Facts over the concept/role names of the shape and constants c0...
Database random_database(std::mt19937& rng, const InstanceShape& shape);
// Connected query over the shape's names with the given numbers of
// variables, atoms and answer variables.
CQ random_query(std::mt19937& rng, const InstanceShape& shape, int vars, int atoms, int answers);

Id shape_concept(int i);
Id shape_role(int i);
Id shape_constant(int i);

}  // namespace omqe::fixtures

#include <string>
#include <vector>

#include "omqe/umodel.hpp"

namespace omqe::fixtures {

// Independent model check of a universal model against a normalized
// ontology: functionality and role inclusions everywhere, concept
// inclusions at constants and at trace elements strictly above the
// construction depth. One message per violation.
std::vector<std::string> model_violations(const Ontology& normalized, const UniversalModel& u);

}  // namespace omqe::fixtures
