#include "doctest.h"

#include "corpus.hpp"
#include "rosetta/defunc/phi.hpp"
#include "rosetta/error.hpp"
#include "rosetta/graph/rewrite.hpp"
#include "rosetta/lambda/eval.hpp"
#include "rosetta/lambda/syntax.hpp"
#include "rosetta/trs/syntax.hpp"
#include "rosetta/verify/random.hpp"

#include <json.hpp>

using namespace rosetta;
using namespace rosetta::graph;

namespace {

VertexId add(TermGraph& g, const std::string& sym, bool function, std::vector<VertexId> succ = {}) {
    return g.graph.add(Vertex{sym, true, function, std::move(succ)});
}

std::vector<std::size_t> in_degrees(const LabelledGraph& g) {
    std::vector<std::size_t> d(g.size(), 0);
    for (const auto& v : g.vertices)
        for (auto w : v.succ) ++d[w];
    return d;
}

std::size_t occurrences(const trs::Term& t, const std::string& x) {
    if (t.is_var()) return t.name() == x ? 1 : 0;
    std::size_t n = 0;
    for (const auto& a : t.args()) n += occurrences(a, x);
    return n;
}

trs::RewriteSystem corpus_system(const char* name) { return trs::parse_system(test_corpus::read_named(name)); }

// f(f(h,h), f(h,h)) with the inner f(h,h) stored once.
TermGraph shared_counterexample() {
    TermGraph g;
    auto h1 = add(g, "h", false), h2 = add(g, "h", false);
    auto inner = add(g, "f", true, {h1, h2});
    g.root = add(g, "f", true, {inner, inner});
    return g;
}

} // namespace

TEST_CASE("term to graph and back") {
    auto sys = corpus_system("add.trs");
    auto t = trs::parse_term("s(s(0))", sys.signature);
    auto g = from_term(t);
    CHECK(g.size() == 3);
    CHECK(g.graph[g.root].symbol == "s");
    CHECK(g.graph[g.graph[g.root].succ[0]].symbol == "s");
    CHECK(g.graph.closed());
    CHECK(unfold(g) == t);

    auto a = trs::parse_term("add(s(0),0)", sys.signature);
    CHECK(unfold(from_term(a)) == a);
    CHECK(constructor_shared(from_term(a)));

    auto open = from_term(trs::parse_term("add(x,x)", sys.signature));
    CHECK(open.size() == 3);
    CHECK_FALSE(open.graph.closed());

    auto c = shared_counterexample();
    CHECK(trs::to_string(unfold(c)) == "f(f(h,h),f(h,h))");
    CHECK(unfold(c).length() == 7);
    CHECK_FALSE(constructor_shared(c));
}

TEST_CASE("round trip on random terms") {
    verify::Rng rng(51);
    for (int i = 0; i < 200; ++i) {
        auto sys = verify::random_system(rng);
        auto t = verify::random_call(rng, sys.signature, 3);
        auto g = from_term(t);
        CHECK(unfold(g) == t);
        CHECK(constructor_shared(g));
        CHECK(g.size() == t.length());
        g.graph.check();
    }
}

TEST_CASE("rule translation shares variables only") {
    auto firing = corpus_system("firing.trs");
    auto r = translate_rule(firing.rules[0]);
    CHECK(r.graph.size() == 7);
    CHECK(left_paths_only(r));
    auto deg = in_degrees(r.graph);
    std::size_t x = kNoVertex, y = kNoVertex;
    for (VertexId v = 0; v < r.graph.size(); ++v)
        if (!r.graph[v].labelled) (r.graph[v].symbol == "x" ? x : y) = v;
    REQUIRE(x != kNoVertex);
    REQUIRE(y != kNoVertex);
    CHECK(deg[x] == 2);
    CHECK(deg[y] == 3);
    CHECK(r.graph[r.right_root].symbol == "g");
    CHECK(unfold(r.graph, r.left_root) == firing.rules[0].lhs());
    CHECK(unfold(r.graph, r.right_root) == firing.rules[0].rhs);

    auto ground = translate_rule(corpus_system("shared.trs").rules[0]);
    for (auto d : in_degrees(ground.graph)) CHECK(d <= 1);

    auto add = corpus_system("add.trs");
    for (const auto& rule : add.rules) {
        auto gr = translate_rule(rule);
        auto d = in_degrees(gr.graph);
        for (VertexId v = 0; v < gr.graph.size(); ++v)
            if (!gr.graph[v].labelled) {
                // A variable right side is the right root itself, not an edge target.
                const std::size_t root_occurrence = v == gr.right_root ? 1 : 0;
                CHECK(d[v] + root_occurrence ==
                      occurrences(rule.lhs(), gr.graph[v].symbol) + occurrences(rule.rhs, gr.graph[v].symbol));
            }
        CHECK(left_paths_only(gr));
    }
}

TEST_CASE("firing example: build, redirect, collect") {
    // G = f(g(h), f(g(h), h)) with g(h) and h shared.
    TermGraph g;
    auto h = add(g, "h", false);
    auto gh = add(g, "g", false, {h});
    auto right = add(g, "f", true, {gh, h});
    g.root = add(g, "f", true, {gh, right});
    CHECK(constructor_shared(g));

    // Rule: left f(g(x), h), right g(f(<the g(x) vertex>, <the h vertex>)).
    GraphRule rho;
    auto& H = rho.graph;
    auto rx = H.add(Vertex{"x", false, false, {}});
    auto rg = H.add(Vertex{"g", true, false, {rx}});
    auto rh = H.add(Vertex{"h", true, false, {}});
    rho.left_root = H.add(Vertex{"f", true, true, {rg, rh}});
    auto rf = H.add(Vertex{"f", true, true, {rg, rh}});
    rho.right_root = H.add(Vertex{"g", true, false, {rf}});
    CHECK(left_paths_only(rho));

    const auto free = function_free(g.graph);
    CHECK_FALSE(match_at(g, g.root, rho, free));
    auto m = match_at(g, right, rho, free);
    REQUIRE(m);
    CHECK(m->at() == right);
    CHECK(m->phi[rg] == gh);
    CHECK(m->phi[rh] == h);

    auto phases = fire_phases(g, *m);
    CHECK(phases.built.size() == 6);
    CHECK(phases.info.built == 2);
    CHECK(phases.redirected.graph[phases.redirected.root].succ[1] != right);
    CHECK(phases.redirected.size() == 6);
    CHECK(phases.info.collected == 1);
    CHECK_FALSE(phases.info.root_moved);

    TermGraph expected;
    auto eh = add(expected, "h", false);
    auto eg = add(expected, "g", false, {eh});
    auto ef = add(expected, "f", true, {eg, eh});
    auto eg2 = add(expected, "g", false, {ef});
    expected.root = add(expected, "f", true, {eg, eg2});
    CHECK(isomorphic(phases.result, expected));
    CHECK(phases.result.size() == 5);
    CHECK(constructor_shared(phases.result));
}

TEST_CASE("shared redex fires once") {
    auto sys = corpus_system("shared.trs");
    SystemRules rules(sys);
    auto g = shared_counterexample();
    auto redex = find_redex(g, rules);
    REQUIRE(redex);
    fire(g, *redex);

    TermGraph expected;
    auto h = add(expected, "h", false);
    expected.root = add(expected, "f", true, {h, h});
    CHECK(isomorphic(g, expected));
    CHECK(g.size() == 2);

    // The unfolding needs two term steps to reach the same term.
    auto t = unfold(shared_counterexample());
    auto two = trs::normalize(sys, t, 2);
    CHECK(two.steps == 2);
    CHECK(two.result == unfold(g));
    auto one = trs::normalize(sys, t, 1);
    CHECK_FALSE(one.result == unfold(g));
}

TEST_CASE("root redex moves the root") {
    auto sys = corpus_system("shared.trs");
    SystemRules rules(sys);
    auto g = from_term(trs::parse_term("f(h,h)", sys.signature));
    auto out = graph_normalize(g, rules, 10);
    CHECK(out.steps == 1);
    CHECK(out.trace.back().root_moved);
    CHECK(out.graph.size() == 1);
    CHECK(out.graph.graph[out.graph.root].symbol == "h");
}

TEST_CASE("call-by-value side condition") {
    auto sys = trs::parse_system(
        "constructors: g/1 h/0\nfunctions: f/1 k/2\nrules:\nf(g(x)) -> x\nk(h,h) -> h\n");
    SystemRules rules(sys);
    auto g = from_term(trs::parse_term("f(g(k(h,h)))", sys.signature));
    const GraphRule& outer = rules.rules()[0];
    CHECK_FALSE(match_at(g, g.root, outer, function_free(g.graph)));
    auto first = find_redex(g, rules);
    REQUIRE(first);
    CHECK(first->rule->tag == 1);
    fire(g, *first);
    CHECK(match_at(g, g.root, outer, function_free(g.graph)));
    auto out = graph_normalize(g, rules, 10);
    CHECK(out.steps == 1);
    CHECK(trs::to_string(unfold(out.graph)) == "h");

    auto cons = from_term(trs::parse_term("g(g(h))", sys.signature));
    CHECK_FALSE(find_redex(cons, rules));
}

TEST_CASE("graph normalization matches term rewriting on examples") {
    auto sys = corpus_system("add.trs");
    SystemRules rules(sys);
    auto out = graph_normalize(from_term(trs::parse_term("add(s(0),s(s(0)))", sys.signature)), rules, 100);
    CHECK(out.steps == 2);
    CHECK(out.status == trs::Status::ConstructorNF);
    CHECK(trs::to_string(unfold(out.graph)) == "s(s(s(0)))");

    auto zero = graph_normalize(from_term(trs::parse_term("s(0)", sys.signature)), rules, 100);
    CHECK(zero.steps == 0);

    auto partial = corpus_system("partial.trs");
    SystemRules prules(partial);
    auto stuck = graph_normalize(from_term(trs::parse_term("f(s(0))", partial.signature)), prules, 100);
    CHECK(stuck.status == trs::Status::Deadlock);

    auto fuel = graph_normalize(from_term(trs::parse_term("add(s(s(0)),0)", sys.signature)), rules, 1);
    CHECK(fuel.status == trs::Status::FuelExhausted);
    CHECK(fuel.steps == 1);
}

TEST_CASE("closure system on graphs") {
    defunc::Registry reg;
    auto m = lambda::parse("(\\x.(\\y.x)x)(\\z.z)");
    ClosureRules rules(reg);
    auto out = graph_normalize(from_term(defunc::encode(m, reg)), rules, 100);
    CHECK(out.steps == 2);
    CHECK(out.status == trs::Status::ConstructorNF);
    auto zz = trs::Term::constructor(reg.intern("z", lambda::parse("z")).symbol, {});
    CHECK(unfold(out.graph) == zz);
    CHECK(check_size_bound(m, out.trace));
    CHECK(check_size_bound(m, {out.trace.front()}));
    CHECK(out.trace.front().graph_size <= m.length());

    auto l = lambda::parse("(\\x.\\y.x y x) (\\x.\\y.y x y) (\\x.\\y.x y x)");
    auto lout = graph_normalize(from_term(defunc::encode(l, reg)), rules, 6);
    CHECK(lout.steps == 6);
    CHECK(lout.status == trs::Status::FuelExhausted);
    CHECK(check_size_bound(l, lout.trace));

    std::vector<TraceRow> too_big{{0, 1, 0, false}, {1, 100, 0, false}};
    CHECK_FALSE(check_size_bound(m, too_big));
}

TEST_CASE("property: graph rewriting is step-exact on constructor-shared graphs") {
    verify::Rng rng(52);
    std::vector<trs::RewriteSystem> systems;
    for (const auto& path : test_corpus::files(".trs")) systems.push_back(trs::parse_system(test_corpus::read(path)));
    for (int i = 0; i < 60; ++i) systems.push_back(verify::random_system(rng));
    for (const auto& sys : systems) {
        SystemRules rules(sys);
        for (int j = 0; j < 6; ++j) {
            auto t = verify::random_call(rng, sys.signature, 2);
            std::vector<trs::Term> states{t};
            auto ref = trs::normalize(sys, t, 500, [&](std::uint64_t, const trs::Firing& f) { states.push_back(f.result); });
            bool aligned = true, shared = true;
            auto out = graph_normalize(from_term(t), rules, 500, [&](std::uint64_t k, const TermGraph& g, const FireInfo&) {
                aligned = aligned && k < states.size() && unfold(g) == states[k];
                shared = shared && constructor_shared(g);
            });
            CHECK(aligned);
            CHECK(shared);
            CHECK(out.steps == ref.steps);
            CHECK(out.status == ref.status);
            CHECK(unfold(out.graph) == ref.result);
        }
    }
}

TEST_CASE("property: closure graphs track call-by-value and stay small") {
    verify::Rng rng(53);
    for (int i = 0; i < 200; ++i) {
        defunc::Registry reg;
        auto m = verify::random_closed_term(rng);
        ClosureRules rules(reg);
        std::vector<trs::Term> states{defunc::encode(m, reg)};
        trs::Term cur = states.front();
        for (int k = 0; k < 40; ++k) {
            auto next = defunc::phi_step(cur, reg);
            if (!next) break;
            cur = *next;
            states.push_back(cur);
        }
        bool aligned = true, shared = true;
        auto out = graph_normalize(from_term(states.front()), rules, 40, [&](std::uint64_t k, const TermGraph& g, const FireInfo&) {
            aligned = aligned && k < states.size() && unfold(g) == states[k];
            shared = shared && constructor_shared(g);
        });
        CHECK(aligned);
        CHECK(shared);
        CHECK(out.steps + 1 == states.size());
        CHECK(check_size_bound(m, out.trace));
        auto lam = lambda::normalize(m, lambda::Strategy::CBV, 40);
        CHECK(lam.steps == out.steps);
    }
}

TEST_CASE("isomorphism") {
    verify::Rng rng(54);
    auto sys = verify::random_system(rng);
    std::vector<trs::Term> terms;
    for (int i = 0; i < 40; ++i) terms.push_back(verify::random_call(rng, sys.signature, 2));
    for (const auto& a : terms) {
        CHECK(isomorphic(from_term(a), from_term(a)));
        for (const auto& b : terms) {
            const bool ab = isomorphic(from_term(a), from_term(b));
            CHECK(ab == isomorphic(from_term(b), from_term(a)));
            CHECK(ab == (a == b));
        }
    }
    // Sharing is observable.
    auto c = shared_counterexample();
    CHECK_FALSE(isomorphic(c, from_term(unfold(c))));
    // Renumbering does not matter.
    auto d = c;
    collect_garbage(d);
    CHECK(isomorphic(c, d));
}

TEST_CASE("exports and validation") {
    auto sys = corpus_system("add.trs");
    auto g = from_term(trs::parse_term("s(0)", sys.signature));
    CHECK(to_dot(g) ==
          "digraph G {\n  n0 [label=\"s\", shape=doublecircle];\n  n1 [label=\"0\"];\n  n0 -> n1 [label=\"1\"];\n}\n");
    auto js = nlohmann::json::parse(to_json(g));
    CHECK(js["vertices"].size() == 2);
    CHECK(js["vertices"][0]["label"] == "s");

    SystemRules rules(sys);
    auto out = graph_normalize(from_term(trs::parse_term("add(s(0),0)", sys.signature)), rules, 10);
    auto rows = nlohmann::json::parse(trace_to_json(out.trace));
    REQUIRE(rows.size() == 3);
    CHECK(rows[1]["step"] == 1);
    CHECK(rows[1]["fired_rule"] == 1);
    CHECK(rows[2]["root_moved"] == false);
    CHECK(rows[1].contains("graph_size"));

    LabelledGraph cyc;
    cyc.add(Vertex{"g", true, false, {1}});
    cyc.add(Vertex{"g", true, false, {0}});
    CHECK_THROWS_AS(cyc.check(), Error);
}
