#ifndef OMQE_BENCH_HPP
#define OMQE_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <string>

#include "omqe/model.hpp"
#include "omqe/reasoner.hpp"

namespace omqe {

// One measured run of complete-answer enumeration.
struct BenchRow {
    std::size_t dbsize = 0;
    double preprocess_ms = 0;
    std::size_t answers = 0;
    double max_delay_us = 0;
    double median_delay_us = 0;
};

// Delays are taken between successive answers on a monotonic clock, with
// nothing written in between. The delay of an answer is the time since the
// previous one (since the end of preprocessing for the first).
BenchRow bench_complete(Reasoner& r, const OMQ& q, const Database& d);

// A database from gen_bmm_instance with roughly 2^log2_facts facts: two
// random n×n matrices with `per_row` ones per row on average.
Database bmm_bench_database(int log2_facts, std::uint64_t seed, int per_row = 4);

// The ontology of the matrix-product OMQ with the full join
// q(x,u,y) :- r1(x,u), r2(u,y) over its data, which is free-connex.
OMQ bench_omq();

std::string csv_header();
std::string csv_row(const BenchRow& row);

}  // namespace omqe

#endif
