#include "omqe/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "omqe/enumerate.hpp"
#include "omqe/hardness.hpp"
#include "omqe/syntax.hpp"

namespace omqe {

BenchRow bench_complete(Reasoner& r, const OMQ& q, const Database& d) {
    using clock = std::chrono::steady_clock;
    BenchRow row;
    row.dbsize = d.size();

    auto start = clock::now();
    EnumState state = preprocess_complete(r, q, d);
    auto prev = clock::now();
    row.preprocess_ms = std::chrono::duration<double, std::milli>(prev - start).count();

    std::vector<double> delays;
    std::vector<Id> t;
    std::uint64_t checksum = 0;
    while (state.next(t)) {
        auto now = clock::now();
        delays.push_back(std::chrono::duration<double, std::micro>(now - prev).count());
        checksum += t.empty() ? 0 : t.front();
        prev = clock::now();
    }
    // The last call reports exhaustion; it is a delay too.
    delays.push_back(std::chrono::duration<double, std::micro>(clock::now() - prev).count());
    row.answers = delays.size() - 1;
    row.max_delay_us = *std::max_element(delays.begin(), delays.end());
    std::nth_element(delays.begin(), delays.begin() + delays.size() / 2, delays.end());
    row.median_delay_us = delays[delays.size() / 2];
    if (checksum == 1) std::fputs("", stderr);  // keeps the loop observable
    return row;
}

Database bmm_bench_database(int log2_facts, std::uint64_t seed, int per_row) {
    // Each 1-entry contributes one role fact and, for new columns/rows,
    // one concept fact: about 2·n·per_row + 2·n facts in total.
    const double target = static_cast<double>(1ull << log2_facts);
    const int n = std::max(2, static_cast<int>(target / (2.0 * per_row + 2.0)));
    std::mt19937_64 rng(seed);
    const double density = std::min(1.0, static_cast<double>(per_row) / n);
    Matrix m1 = random_matrix(rng, n, density), m2 = random_matrix(rng, n, density);
    return gen_bmm_instance(m1, m2).db;
}

OMQ bench_omq() {
    Ontology o = parse_ontology("A sub exists inv(f) . top\nfunc(f)\n");
    OMQ q = OMQ::with_full_signature(o, parse_query("q(x,u,y) :- r1(x,u), r2(u,y)."));
    return q;
}

std::string csv_header() { return "dbsize,preprocess_ms,answers,max_delay_us,median_delay_us"; }

std::string csv_row(const BenchRow& row) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu,%.3f,%zu,%.3f,%.4f", row.dbsize, row.preprocess_ms, row.answers,
                  row.max_delay_us, row.median_delay_us);
    return buf;
}

}  // namespace omqe
