// Command-line front end: analyze, chase, umodel, enumerate, test-answer,
// gen, bench. Exit status 0 on success, 1 on a semantic error (unsatisfiable
// data, query not eligible, reduction not applicable), 2 on usage or input
// errors.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "omqe/analysis.hpp"
#include "omqe/bench.hpp"
#include "omqe/chase.hpp"
#include "omqe/enumerate.hpp"
#include "omqe/hardness.hpp"
#include "omqe/oracle.hpp"
#include "omqe/partial.hpp"
#include "omqe/syntax.hpp"
#include "omqe/umodel.hpp"

using namespace omqe;

namespace {

// Input and output problems that are the caller's fault.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Inputs {
    std::string onto;
    std::string db;
    std::string query;
    std::string sigma_concepts;
    std::string sigma_roles;
};

std::string slurp(const std::string& path) {
    try {
        return read_file(path);
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

Ontology load_ontology(const Inputs& in) { return in.onto.empty() ? Ontology{} : parse_ontology(slurp(in.onto)); }

// Σ: the override when given; otherwise sig(O) ∪ sig(q), restricted to the
// symbols of the database when there is one. Facts outside Σ are dropped
// in the default case (neither O nor q can see them).
OMQ load_omq(const Inputs& in, Database* d) {
    OMQ q = OMQ::with_full_signature(load_ontology(in), parse_query(slurp(in.query)));
    const bool override = !in.sigma_concepts.empty() || !in.sigma_roles.empty();
    if (override) {
        q.sigma = {};
        for (const auto& c : split_list(in.sigma_concepts)) q.sigma.concepts.insert(concept_id(c));
        for (const auto& r : split_list(in.sigma_roles)) q.sigma.roles.insert(role_name_id(r));
        return q;
    }
    if (!d) return q;
    Signature ds = d->signature(), kept;
    for (Id c : q.sigma.concepts)
        if (ds.concepts.count(c)) kept.concepts.insert(c);
    for (Id r : q.sigma.roles)
        if (ds.roles.count(r)) kept.roles.insert(r);
    q.sigma = kept;
    Database filtered;
    for (const auto& f : d->unary())
        if (kept.concepts.count(f.pred)) filtered.add_unary(f.pred, f.c);
    for (const auto& f : d->binary())
        if (kept.roles.count(f.role)) filtered.add_binary(f.role, f.a, f.b);
    *d = std::move(filtered);
    return q;
}

Database load_database(const Inputs& in) { return parse_database(slurp(in.db)); }

void add_inputs(CLI::App* app, Inputs& in, bool db, bool query) {
    app->add_option("--onto,-o", in.onto, "ontology file")->check(CLI::ExistingFile);
    if (db) app->add_option("--db,-d", in.db, "database file")->required()->check(CLI::ExistingFile);
    if (query) {
        app->add_option("--query,-q", in.query, "query file")->required()->check(CLI::ExistingFile);
        app->add_option("--sigma-concepts", in.sigma_concepts, "data schema concept names (comma separated)");
        app->add_option("--sigma-roles", in.sigma_roles, "data schema role names (comma separated)");
    }
}

std::string print_constants(const std::vector<Id>& t) {
    if (t.empty()) return "()";
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + constant_str(t[i]);
    return s;
}

std::string print_answer(const WildcardTuple& t) { return t.size() == 0 ? "()" : print_tuple(t); }

WildcardMode mode_of(const std::string& mode) { return mode == "multi" ? WildcardMode::Multi : WildcardMode::Single; }

// --- subcommands ---------------------------------------------------------

int run_analyze(const Inputs& in) {
    OMQ q = load_omq(in, nullptr);
    Reasoner r(q.onto);
    std::cout << print_extended(fa_extension(r, q.q, AnswerMode::Extended))
              << print_extended(fa_extension(r, q.q, AnswerMode::Original))
              << print_verdict(classify(r, q), q.q);
    return 0;
}

int run_chase(const Inputs& in, bool naive) {
    Reasoner r(load_ontology(in));
    Database d = load_database(in);
    std::cout << print_database(naive ? naive_chase(r, d) : chase(r, d));
    return 0;
}

int run_umodel(const Inputs& in) {
    Database d = load_database(in);
    OMQ q = load_omq(in, &d);
    Reasoner r(q.onto);
    std::cout << print_database(build_u_dq(r, d, q.q).facts);
    return 0;
}

struct EnumerateFlags {
    std::string mode = "complete";
    std::size_t limit = 0;
    bool measure = false;
    bool oracle = false;
    bool sort = false;
};

int run_enumerate(const Inputs& in, const EnumerateFlags& f) {
    using clock = std::chrono::steady_clock;
    Database d = load_database(in);
    OMQ q = load_omq(in, &d);
    Reasoner r(q.onto);
    const bool complete = f.mode == "complete";

    std::vector<std::string> out;
    std::vector<double> delays;
    auto start = clock::now();
    double preprocess_ms = 0;
    auto enough = [&] { return f.limit != 0 && out.size() >= f.limit; };

    if (f.oracle) {
        if (!is_satisfiable(r, d)) throw Unsatisfiable("the database is unsatisfiable");
        if (complete) {
            for (const auto& t : brute_answers(q, d))
                if (!enough()) out.push_back(print_constants(t));
        } else {
            for (const auto& t : brute_minimal_partial(q, d, mode_of(f.mode)))
                if (!enough()) out.push_back(print_answer(t));
        }
        preprocess_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    } else if (complete) {
        EnumState s = preprocess_complete(r, q, d);
        auto prev = clock::now();
        preprocess_ms = std::chrono::duration<double, std::milli>(prev - start).count();
        std::vector<std::vector<Id>> buffer;
        std::vector<Id> t;
        while (!(f.limit && buffer.size() >= f.limit) && s.next(t)) {
            auto now = clock::now();
            delays.push_back(std::chrono::duration<double, std::micro>(now - prev).count());
            buffer.push_back(t);
            prev = clock::now();
        }
        for (const auto& b : buffer) out.push_back(print_constants(b));
    } else {
        PartialEnumerator e(r, q, d, mode_of(f.mode));
        auto prev = clock::now();
        preprocess_ms = std::chrono::duration<double, std::milli>(prev - start).count();
        std::vector<WildcardTuple> buffer;
        WildcardTuple t;
        while (!(f.limit && buffer.size() >= f.limit) && e.next(t)) {
            auto now = clock::now();
            delays.push_back(std::chrono::duration<double, std::micro>(now - prev).count());
            buffer.push_back(t);
            prev = clock::now();
        }
        for (const auto& b : buffer) out.push_back(print_answer(b));
    }

    if (f.sort) std::sort(out.begin(), out.end());
    for (const auto& line : out) std::cout << line << '\n';
    if (f.measure) {
        double max = 0, median = 0;
        if (!delays.empty()) {
            max = *std::max_element(delays.begin(), delays.end());
            std::nth_element(delays.begin(), delays.begin() + delays.size() / 2, delays.end());
            median = delays[delays.size() / 2];
        }
        std::fprintf(stderr, "preprocess_ms=%.3f answers=%zu max_delay_us=%.3f median_delay_us=%.4f\n", preprocess_ms,
                     out.size(), max, median);
    }
    return 0;
}

int run_test_answer(const Inputs& in, const std::string& mode, const std::string& tuple, bool oracle) {
    Database d = load_database(in);
    OMQ q = load_omq(in, &d);
    Reasoner r(q.onto);
    bool yes = false;
    if (mode == "complete") {
        WildcardTuple t = parse_tuple(tuple, WildcardMode::Single);
        if (!t.complete()) throw WildcardError("complete answers have no wildcards");
        if (oracle) {
            std::vector<Id> c;
            for (const auto& e : t.entries) c.push_back(e.value);
            if (!is_satisfiable(r, d)) throw Unsatisfiable("the database is unsatisfiable");
            yes = brute_answers(q, d).count(c) > 0;
        } else {
            yes = is_partial_answer(r, q, d, t);
        }
    } else {
        WildcardTuple t = parse_tuple(tuple, mode_of(mode));
        if (oracle) {
            if (!is_satisfiable(r, d)) throw Unsatisfiable("the database is unsatisfiable");
            yes = brute_minimal_partial(q, d, t.mode).count(renumber(t)) > 0;
        } else {
            yes = is_minimal_partial_answer(r, q, d, t);
        }
    }
    std::cout << (yes ? "yes" : "no") << '\n';
    return 0;
}

struct GenFlags {
    std::string reduction;
    std::string input;
    std::string output;
    int random_n = 0;
    double density = 0.1;
    unsigned long long seed = 1;
};

int run_gen(const Inputs& in, const GenFlags& g) {
    Database d;
    std::string summary;
    if (g.reduction == "bmm") {
        Matrix m1, m2;
        if (!g.input.empty()) {
            std::tie(m1, m2) = parse_matrices(slurp(g.input));
        } else if (g.random_n > 0) {
            std::mt19937_64 rng(g.seed);
            m1 = random_matrix(rng, g.random_n, g.density);
            m2 = random_matrix(rng, g.random_n, g.density);
        } else {
            throw UsageError("bmm needs --in or --random");
        }
        d = gen_bmm_instance(m1, m2).db;
        summary = "|M1|=" + std::to_string(m1.size()) + " |M2|=" + std::to_string(m2.size());
    } else {
        if (in.query.empty()) throw UsageError(g.reduction + " needs --query");
        if (g.input.empty()) throw UsageError(g.reduction + " needs --in");
        OMQ q = load_omq(in, nullptr);
        Reasoner r(q.onto);
        Reduction red;
        if (g.reduction == "triangle") {
            std::vector<Edge> edges;
            for (const auto& row : parse_int_rows(slurp(g.input))) {
                if (row.size() != 2) throw UsageError("graph lines must have two vertices");
                edges.push_back({row[0], row[1]});
            }
            red = gen_triangle_db(r, q, edges);
        } else if (g.reduction == "hyperclique") {
            red = gen_hyperclique_db(r, q, parse_int_rows(slurp(g.input)));
        } else {
            auto [m1, m2] = parse_matrices(slurp(g.input));
            MMReduction mm = gen_mm_db(r, q, m1, m2);
            summary = "answer positions " + std::to_string(mm.first) + "," + std::to_string(mm.second) + " ";
            red = std::move(mm);
        }
        d = std::move(red.db);
        summary += "core facts=" + std::to_string(red.core_facts) + " tree depth=" + std::to_string(red.tree_depth);
    }
    std::string text = print_database(d);
    if (g.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(g.output);
        if (!(f << text)) throw UsageError("cannot write " + g.output);
    }
    std::cerr << "facts=" << d.size() << ' ' << summary << '\n';
    return 0;
}

struct BenchFlags {
    int from = 12;
    int to = 17;
    int runs = 3;
    int per_row = 4;
    unsigned long long seed = 42;
    std::string output;
};

int run_bench(const Inputs& in, const BenchFlags& b) {
    std::ostringstream csv;
    csv << csv_header() << '\n';
    for (int s = b.from; s <= b.to; ++s) {
        Database d = bmm_bench_database(s, b.seed + static_cast<unsigned>(s), b.per_row);
        OMQ q = in.query.empty() ? bench_omq() : load_omq(in, &d);
        Reasoner r(q.onto);
        // Best of the runs, per column.
        BenchRow best;
        for (int i = 0; i < b.runs; ++i) {
            BenchRow row = bench_complete(r, q, d);
            if (i == 0) {
                best = row;
                continue;
            }
            best.preprocess_ms = std::min(best.preprocess_ms, row.preprocess_ms);
            best.max_delay_us = std::min(best.max_delay_us, row.max_delay_us);
            best.median_delay_us = std::min(best.median_delay_us, row.median_delay_us);
        }
        csv << csv_row(best) << '\n';
    }
    if (b.output.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(b.output);
        if (!(f << csv.str())) throw UsageError("cannot write " + b.output);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Enumeration of answers to ontology-mediated queries"};
    app.require_subcommand(1);

    Inputs in;
    auto* analyze = app.add_subcommand("analyze", "FA-extension and complexity classification");
    add_inputs(analyze, in, false, true);

    bool naive = false;
    auto* chase_cmd = app.add_subcommand("chase", "chase a database with the ontology");
    add_inputs(chase_cmd, in, true, false);
    chase_cmd->add_flag("--naive", naive, "apply the rules directly, without the Horn encoding");

    auto* umodel = app.add_subcommand("umodel", "print the query-directed universal model");
    add_inputs(umodel, in, true, true);

    EnumerateFlags ef;
    auto* enumerate = app.add_subcommand("enumerate", "enumerate complete or minimal partial answers");
    add_inputs(enumerate, in, true, true);
    enumerate->add_option("--mode", ef.mode, "complete | partial | multi")
        ->check(CLI::IsMember({"complete", "partial", "multi"}));
    enumerate->add_option("--limit", ef.limit, "stop after this many answers (0: all)");
    enumerate->add_flag("--measure-delay", ef.measure, "report preprocessing time and delays on stderr");
    enumerate->add_flag("--oracle", ef.oracle, "use the brute-force reference implementation");
    enumerate->add_flag("--sort", ef.sort, "sort the output");

    std::string ta_mode = "partial", tuple;
    bool ta_oracle = false;
    auto* test_answer = app.add_subcommand("test-answer", "decide whether a tuple is an answer");
    add_inputs(test_answer, in, true, true);
    test_answer->add_option("--tuple", tuple, "e.g. mary,* or *1,tesla,tesla")->required();
    test_answer->add_option("--mode", ta_mode, "complete | partial | multi")
        ->check(CLI::IsMember({"complete", "partial", "multi"}));
    test_answer->add_flag("--oracle", ta_oracle, "use the brute-force reference implementation");

    GenFlags gf;
    auto* gen = app.add_subcommand("gen", "write a reduction database");
    gen->add_option("--reduction", gf.reduction, "triangle | hyperclique | bmm | mm")
        ->required()
        ->check(CLI::IsMember({"triangle", "hyperclique", "bmm", "mm"}));
    gen->add_option("--in", gf.input, "graph, hypergraph or matrix file")->check(CLI::ExistingFile);
    gen->add_option("--out", gf.output, "output database file (default: stdout)");
    gen->add_option("--onto,-o", in.onto, "ontology file")->check(CLI::ExistingFile);
    gen->add_option("--query,-q", in.query, "query file")->check(CLI::ExistingFile);
    gen->add_option("--sigma-concepts", in.sigma_concepts, "data schema concept names (comma separated)");
    gen->add_option("--sigma-roles", in.sigma_roles, "data schema role names (comma separated)");
    gen->add_option("--random", gf.random_n, "bmm: random n×n matrices instead of --in");
    gen->add_option("--density", gf.density, "bmm: probability of a 1-entry");
    gen->add_option("--seed", gf.seed, "bmm: random seed");

    BenchFlags bf;
    auto* bench = app.add_subcommand("bench", "time complete-answer enumeration on matrix-product databases");
    bench->add_option("--from", bf.from, "smallest size, log2 of the fact count");
    bench->add_option("--to", bf.to, "largest size, log2 of the fact count");
    bench->add_option("--runs", bf.runs, "runs per size; the best value of each column is kept")
        ->check(CLI::PositiveNumber);
    bench->add_option("--per-row", bf.per_row, "average 1-entries per matrix row")->check(CLI::PositiveNumber);
    bench->add_option("--seed", bf.seed, "random seed");
    bench->add_option("--out", bf.output, "CSV file (default: stdout)");
    bench->add_option("--onto,-o", in.onto, "ontology file (default: the matrix-product ontology)")
        ->check(CLI::ExistingFile);
    bench->add_option("--query,-q", in.query, "query file (default: q(x,u,y) :- r1(x,u), r2(u,y).)")
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*analyze) return run_analyze(in);
        if (*chase_cmd) return run_chase(in, naive);
        if (*umodel) return run_umodel(in);
        if (*enumerate) return run_enumerate(in, ef);
        if (*test_answer) return run_test_answer(in, ta_mode, tuple, ta_oracle);
        if (*gen) return run_gen(in, gf);
        if (*bench) return run_bench(in, bf);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const WildcardError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Unsatisfiable& e) {
        std::cerr << "unsatisfiable: " << e.what() << '\n';
        return 1;
    } catch (const NotEligible& e) {
        std::cerr << "not eligible: " << e.what() << '\n';
        return 1;
    } catch (const NotApplicable& e) {
        std::cerr << "not applicable: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
