#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <set>

#include "omqe/analysis.hpp"
#include "omqe/chase.hpp"
#include "omqe/hardness.hpp"
#include "omqe/oracle.hpp"
#include "omqe/partial.hpp"
#include "omqe/syntax.hpp"

using namespace omqe;

namespace {

OMQ omq_without(const std::string& onto, const std::string& q, std::vector<std::string> hidden = {}) {
    OMQ m = OMQ::with_full_signature(parse_ontology(onto), parse_query(q));
    for (const auto& h : hidden) m.sigma.concepts.erase(concept_id(h));
    return m;
}

// Cycle x y1 y2 y3 y4 with a chord x–y2 in q⁺ (through func(r2)), and a
// concept that only the attached trees can derive.
OMQ triangle_omq() {
    return omq_without("func(r2)\nexists s . C sub D\n",
                       "q(x) :- r1(x,y1), r2(y1,y2), r3(y2,y3), r4(y3,y4), r5(y4,x), D(y3).", {"D"});
}

// Four variables a b c d; for each triple T a variable u_T with functional
// edges to the members of T. Every triple is covered in q⁺, the 4-set is not.
OMQ hyperclique_omq() {
    const std::vector<std::string> triples{"abc", "abd", "acd", "bcd"};
    std::string onto, body;
    for (const auto& t : triples)
        for (char m : t) {
            std::string role = "g" + t + m;
            onto += "func(" + role + ")\n";
            body += (body.empty() ? "" : ", ") + role + "(u" + t + "," + m + ")";
        }
    return omq_without(onto, "q(a) :- " + body + ".");
}

// Bad path y0 y1 y2 between the extended answer variables.
OMQ matrix_omq() {
    return omq_without("func(g)\nfunc(inv(h))\nexists s . C sub D\n",
                       "q(x1,x2) :- g(x1,y0), r1(y0,y1), r2(y1,y2), h(y2,x2), D(y1).", {"D"});
}

std::vector<Edge> random_graph(std::mt19937& rng, int n, double p) {
    std::bernoulli_distribution bit(p);
    std::vector<Edge> e;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (bit(rng)) e.push_back({a, b});
    return e;
}

struct Outcome {
    bool complete = false;
    bool partial[2] = {false, false};
};

Outcome answers(Reasoner& r, const OMQ& q, const Database& d) {
    Outcome o;
    for (int m = 0; m < 2; ++m) {
        auto all = enumerate_partial(r, q, d, m ? WildcardMode::Multi : WildcardMode::Single);
        o.partial[m] = !all.empty();
        for (const auto& t : all) o.complete |= t.complete();
    }
    return o;
}

void expect_well_formed(Reasoner& r, const OMQ& q, const Reduction& red, bool with_simulation) {
    EXPECT_TRUE(q.accepts(red.db));
    EXPECT_TRUE(is_satisfiable(r, red.db));
    if (!with_simulation) return;
    TreeGadget t = build_d_tree(r, q.sigma);
    Simulation s = greatest_simulation(t.tree, red.db);
    EXPECT_TRUE(is_simulation(s, t.tree, red.db));
    for (const auto& [c, info] : red.core) EXPECT_TRUE(s.count({t.nodes[0], c})) << constant_str(c);
}

}  // namespace

TEST(Hardness, TreeWithoutOntology) {
    Ontology o;
    Reasoner r(o);
    Signature sigma;
    sigma.concepts = {concept_id("A")};
    sigma.roles = {role_name_id("r")};
    TreeGadget t = build_d_tree(r, sigma);
    EXPECT_EQ(t.depth, 1);
    EXPECT_EQ(t.words.size(), 3u);
    EXPECT_EQ(t.tree.size(), 5u);
    ASSERT_EQ(t.fragments.size(), 2u);
    EXPECT_EQ(t.fragments[0].binary.size(), 1u);
}

TEST(Hardness, TreeDepthFollowsOntology) {
    Signature sigma;
    sigma.concepts = {concept_id("A")};
    sigma.roles = {role_name_id("r")};
    Reasoner one(parse_ontology("exists r . A sub B\n"));
    EXPECT_EQ(build_d_tree(one, sigma).depth, 1);

    Reasoner two(parse_ontology("exists r . (exists r . A) sub B\n"));
    TreeGadget t = build_d_tree(two, sigma);
    EXPECT_EQ(t.depth, 2);
    // Reduced words: ε, r, r⁻, rr, r⁻r⁻.
    EXPECT_EQ(t.words.size(), 5u);
    EXPECT_THROW(build_d_tree(two, sigma, 1), DepthCapExceeded);

    setenv("OMQE_DEPTH_CAP", "1", 1);
    EXPECT_EQ(depth_cap(), 1);
    EXPECT_THROW(build_d_tree(two, sigma), DepthCapExceeded);
    unsetenv("OMQE_DEPTH_CAP");
}

TEST(Hardness, TreeIsCompleteForConceptNames) {
    std::mt19937 rng(99);
    int checked = 0;
    for (int round = 0; round < 200 && checked < 20; ++round) {
        // Small ELIF ontologies over A0..A3 and r0, r1; Σ drops A3.
        std::string text;
        const char* cs[] = {"A0", "A1", "A2", "A3"};
        const char* rs[] = {"r0", "inv(r0)", "r1", "inv(r1)"};
        for (int i = 0; i < 4; ++i) {
            const char* a = cs[rng() % 4];
            const char* b = cs[rng() % 4];
            const char* role = rs[rng() % 4];
            switch (rng() % 3) {
                case 0: text += std::string("exists ") + role + " . " + a + " sub " + b + "\n"; break;
                case 1: text += std::string(a) + " sub exists " + role + " . " + b + "\n"; break;
                default: text += std::string(a) + " and " + b + " sub " + cs[rng() % 4] + "\n"; break;
            }
        }
        if (rng() % 2) text += std::string("func(") + rs[rng() % 4] + ")\n";
        Ontology o = parse_ontology(text);
        Reasoner r(o);
        Signature sigma;
        sigma.concepts = {concept_id("A0"), concept_id("A1"), concept_id("A2")};
        sigma.roles = {role_name_id("r0"), role_name_id("r1")};
        TreeGadget t;
        try {
            t = build_d_tree(r, sigma, 4);
        } catch (const DepthCapExceeded&) {
            continue;
        }
        ++checked;
        OracleChase ch = oracle_chase(o, t.tree);
        ASSERT_TRUE(ch.satisfiable) << text;
        for (const char* a : cs) {
            Id id = concept_id(a);
            EXPECT_EQ(ch.facts.has_unary(id, t.nodes[0]), is_nonempty_concept(r, id, sigma)) << text << a;
        }
    }
    EXPECT_GE(checked, 20);
}

TEST(Hardness, FourVertexCoreDatabase) {
    // Square y0 y1 y2 y3 where y0–y1 goes through z1; f0 is inverse
    // functional and f1 functional, so z1 sees y0 and y1.
    OMQ q = omq_without("func(inv(f0))\nfunc(f1)\n",
                        "q(y0) :- f0(y0,z1), f1(z1,y1), R12(y1,y2), R23(y2,y3), R30(y3,y0).");
    Reasoner r(q.onto);
    CQ& cq = q.q;
    const Var y0 = cq.var("y0"), z1 = cq.var("z1"), y1 = cq.var("y1"), y2 = cq.var("y2"), y3 = cq.var("y3");
    const int a = 1, b = 2, c = 3, d = 4;
    const std::vector<Edge> g{{a, b}, {b, c}, {c, a}, {a, d}};
    Reduction red = gen_triangle_db(r, q, g, std::vector<Var>{y0, y1, y2, y3});

    using F = std::vector<std::optional<int>>;
    auto k = [&](Var x, F f) { return encode(cq, {x, std::move(f)}); };
    const std::optional<int> u;
    std::set<std::string> want;
    auto fact = [&](const char* role, const std::string& s, const std::string& t) {
        want.insert(std::string(role) + "(" + s + "," + t + ")");
    };
    for (int v : {a, b, c, d}) fact("R12", k(y1, {u, v, u, u}), k(y2, {u, u, v, u}));
    for (auto [p, s] : g)
        for (auto [x, y] : {Edge{p, s}, Edge{s, p}}) {
            fact("R23", k(y2, {u, u, x, u}), k(y3, {u, u, u, y}));
            fact("R30", k(y3, {u, u, u, y}), k(y0, {x, u, u, u}));
            fact("f0", k(y0, {x, u, u, u}), k(z1, {x, y, u, u}));
            fact("f1", k(z1, {x, y, u, u}), k(y1, {u, y, u, u}));
        }
    std::set<std::string> got;
    for (const auto& f : red.db.binary())
        if (red.core.count(f.a) && red.core.count(f.b))
            got.insert(role_name_str(f.role) + "(" + constant_str(f.a) + "," + constant_str(f.b) + ")");
    EXPECT_EQ(got, want);
    EXPECT_EQ(red.core_facts, 36u);
    EXPECT_EQ(red.core.size(), 24u);
    expect_well_formed(r, q, red, true);
    EXPECT_TRUE(answers(r, q, red.db).complete);
}

TEST(Hardness, TriangleSmallGraphs) {
    OMQ q = triangle_omq();
    Reasoner r(q.onto);
    Verdict v = classify(r, q);
    ASSERT_FALSE(v.chordal);
    ASSERT_EQ(v.cycle->size(), 4u);

    Reduction k3 = gen_triangle_db(r, q, {{0, 1}, {1, 2}, {2, 0}});
    expect_well_formed(r, q, k3, true);
    EXPECT_TRUE(answers(r, q, k3.db).complete);

    Reduction c4 = gen_triangle_db(r, q, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    expect_well_formed(r, q, c4, true);
    Outcome o = answers(r, q, c4.db);
    EXPECT_FALSE(o.complete);
    EXPECT_FALSE(o.partial[0]);
    EXPECT_FALSE(o.partial[1]);
}

TEST(Hardness, TriangleRandomGraphs) {
    OMQ q = triangle_omq();
    Reasoner r(q.onto);
    std::mt19937 rng(404);
    int yes = 0, no = 0;
    for (int round = 0; round < 30; ++round) {
        auto g = random_graph(rng, 3 + static_cast<int>(rng() % 6), 0.2 + 0.1 * (rng() % 4));
        if (g.empty()) continue;
        Reduction red = gen_triangle_db(r, q, g);
        expect_well_formed(r, q, red, round < 3);
        // Each rule emits at most one fact per directed edge or vertex.
        std::size_t core_binary = 0;
        for (const auto& f : red.db.binary()) core_binary += red.core.count(f.a) && red.core.count(f.b);
        EXPECT_LE(core_binary, 2 * q.q.atoms.size() * 2 * g.size());
        bool triangle = brute_triangle(g);
        Outcome o = answers(r, q, red.db);
        EXPECT_EQ(o.complete, triangle) << round;
        EXPECT_TRUE(!o.partial[0] || triangle) << round;
        EXPECT_TRUE(!o.partial[1] || triangle) << round;
        (triangle ? yes : no)++;
    }
    EXPECT_GT(yes, 3);
    EXPECT_GT(no, 3);
}

TEST(Hardness, TriangleNotApplicable) {
    Reasoner empty{Ontology{}};
    OMQ chordal = omq_without("", "q(x) :- r(x,y), s(y,z).");
    EXPECT_THROW(gen_triangle_db(empty, chordal, {{0, 1}}), NotApplicable);
    OMQ ri = omq_without("r1 subr r2\n", "q(x) :- r1(x,y1), r2(y1,y2), r3(y2,y3), r4(y3,x).");
    Reasoner rr(ri.onto);
    EXPECT_THROW(gen_triangle_db(rr, ri, {{0, 1}}), NotApplicable);
    OMQ self = omq_without("", "q(x) :- r(x,y1), r(y1,y2), r3(y2,y3), r4(y3,x).");
    EXPECT_THROW(gen_triangle_db(empty, self, {{0, 1}}), NotApplicable);
}

TEST(Hardness, HypercliqueFixedInstances) {
    OMQ q = hyperclique_omq();
    Reasoner r(q.onto);
    Verdict v = classify(r, q);
    ASSERT_FALSE(v.conformal);
    ASSERT_EQ(v.clique->size(), 4u);

    std::vector<Hyperedge> k4{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    Reduction full = gen_hyperclique_db(r, q, k4);
    expect_well_formed(r, q, full, true);
    EXPECT_TRUE(answers(r, q, full.db).complete);

    std::vector<Hyperedge> missing(k4.begin(), k4.end() - 1);
    Reduction part = gen_hyperclique_db(r, q, missing);
    Outcome o = answers(r, q, part.db);
    EXPECT_FALSE(o.complete || o.partial[0] || o.partial[1]);

    Reduction none = gen_hyperclique_db(r, q, {});
    EXPECT_TRUE(none.db.empty());
    EXPECT_FALSE(answers(r, q, none.db).complete);

    EXPECT_THROW(gen_hyperclique_db(r, q, {{0, 1}}), NotApplicable);
}

TEST(Hardness, HypercliqueRandom) {
    OMQ q = hyperclique_omq();
    Reasoner r(q.onto);
    std::mt19937 rng(7);
    int yes = 0, no = 0;
    for (int round = 0; round < 20; ++round) {
        int n = 4 + static_cast<int>(rng() % 3);
        std::vector<Hyperedge> h;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c)
                    if (rng() % 100 < 55) h.push_back({a, b, c});
        Reduction red = gen_hyperclique_db(r, q, h);
        // At most 3! facts per atom and hyperedge.
        EXPECT_LE(red.core_facts, q.q.atoms.size() * 6 * h.size() + red.core.size() * q.sigma.concepts.size());
        bool clique = brute_hyperclique(h, 3);
        Outcome o = answers(r, q, red.db);
        EXPECT_EQ(o.complete, clique) << round;
        EXPECT_TRUE(!o.partial[0] || clique);
        EXPECT_TRUE(!o.partial[1] || clique);
        (clique ? yes : no)++;
    }
    EXPECT_GT(yes, 2);
    EXPECT_GT(no, 2);
}

TEST(Hardness, MatrixProductInstance) {
    BmmInstance inst = gen_bmm_instance({{1, 2}}, {{2, 3}});
    EXPECT_EQ(inst.db.size(), 3u);  // A(2) is shared
    Reasoner r(inst.omq.onto);
    auto single = enumerate_partial(r, inst.omq, inst.db, WildcardMode::Single);
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(print_tuple(single[0]), "1,*,3");

    BmmInstance empty = gen_bmm_instance({}, {});
    EXPECT_TRUE(enumerate_partial(r, empty.omq, empty.db, WildcardMode::Multi).empty());
}

TEST(Hardness, MatrixProductRandom) {
    std::mt19937_64 rng(12);
    OMQ q = bmm_omq();
    Reasoner r(q.onto);
    for (int round = 0; round < 20; ++round) {
        Matrix m1 = random_matrix(rng, 4, 0.3), m2 = random_matrix(rng, 4, 0.3);
        BmmInstance inst = gen_bmm_instance(m1, m2);
        std::set<std::pair<int, int>> got;
        for (const auto& t : enumerate_partial(r, inst.omq, inst.db, WildcardMode::Single)) {
            ASSERT_TRUE(!t.entries[0].wildcard && t.entries[1].wildcard && !t.entries[2].wildcard) << print_tuple(t);
            got.insert({std::stoi(constant_str(t.entries[0].value)), std::stoi(constant_str(t.entries[2].value))});
        }
        EXPECT_EQ(got, brute_mat_product(m1, m2));
    }
}

TEST(Hardness, MatrixMultiplicationEncoding) {
    OMQ q = matrix_omq();
    Reasoner r(q.onto);
    Matrix id{{0, 0}, {1, 1}, {2, 2}};
    MMReduction red = gen_mm_db(r, q, id, id);
    EXPECT_EQ(red.first, 0u);
    EXPECT_EQ(red.second, 1u);
    expect_well_formed(r, q, red, true);
    std::set<std::pair<int, int>> got;
    for (const auto& t : enumerate_partial(r, q, red.db, WildcardMode::Single)) {
        if (!t.complete()) continue;
        std::vector<Id> c{t.entries[0].value, t.entries[1].value};
        if (auto e = extract_entry(red, c)) got.insert(*e);
    }
    EXPECT_EQ(got, id);

    MMReduction zero = gen_mm_db(r, q, {}, {});
    EXPECT_TRUE(enumerate_partial(r, q, zero.db, WildcardMode::Multi).empty());

    OMQ fc = omq_without("", "q(x,y) :- r(x,y).");
    Reasoner rf(fc.onto);
    EXPECT_THROW(gen_mm_db(rf, fc, id, id), NotApplicable);
}

TEST(Hardness, MatrixMultiplicationProperties) {
    OMQ q = matrix_omq();
    Reasoner r(q.onto);
    std::mt19937_64 rng(3);
    double worst = 0;
    for (int n = 3; n <= 6; ++n)
        for (int round = 0; round < 5; ++round) {
            Matrix m1 = random_matrix(rng, n, 0.35), m2 = random_matrix(rng, n, 0.35);
            auto product = brute_mat_product(m1, m2);
            MMReduction red = gen_mm_db(r, q, m1, m2);
            for (auto mode : {WildcardMode::Single, WildcardMode::Multi}) {
                auto all = enumerate_partial(r, q, red.db, mode);
                std::set<std::pair<int, int>> from_complete;
                for (const auto& t : all) {
                    std::vector<Id> c;
                    for (const auto& e : t.entries) c.push_back(e.wildcard ? 0 : e.value);
                    auto e = extract_entry(red, c);
                    if (e) EXPECT_TRUE(product.count(*e));  // MM1
                    if (e && t.complete()) from_complete.insert(*e);
                }
                EXPECT_EQ(from_complete, product);  // MM2
                double size = static_cast<double>(m1.size() + m2.size() + product.size());
                if (size > 0) worst = std::max(worst, all.size() / size);
            }
        }
    EXPECT_LE(worst, 1.0);  // MM3
}

TEST(Hardness, TextInputs) {
    auto rows = parse_int_rows("# graph\n1 2\n\n2 3 # tail\n");
    EXPECT_EQ(rows, (std::vector<std::vector<int>>{{1, 2}, {2, 3}}));
    EXPECT_THROW(parse_int_rows("1 x\n"), ParseError);
    auto [m1, m2] = parse_matrices("1 0 1\n2 1 2\n");
    EXPECT_EQ(m1, (Matrix{{0, 1}}));
    EXPECT_EQ(m2, (Matrix{{1, 2}}));
    EXPECT_THROW(parse_matrices("3 0 1\n"), ParseError);
}
