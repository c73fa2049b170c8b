#include "doctest.h"

#include "corpus.hpp"
#include "rosetta/compile/compiler.hpp"
#include "rosetta/error.hpp"
#include "rosetta/lambda/syntax.hpp"
#include "rosetta/trs/syntax.hpp"
#include "rosetta/verify/random.hpp"

#include <map>

using namespace rosetta;
using namespace rosetta::compile;
using lambda::parse;

namespace {

trs::RewriteSystem add_system() { return trs::parse_system(test_corpus::read_named("add.trs")); }

trs::Term numeral(std::size_t n) {
    trs::Term t = trs::Term::constructor("0", {});
    while (n--) t = trs::Term::constructor("s", {t});
    return t;
}

lambda::Term run(const lambda::Term& m, std::uint64_t* steps = nullptr, std::uint64_t fuel = 1'000'000) {
    auto out = lambda::normalize(m, lambda::Strategy::CBV, fuel);
    REQUIRE(out.status == lambda::Status::NormalForm);
    if (steps) *steps = out.steps;
    return out.result;
}

// Independent matcher: pattern against constructor term, collecting bound
// subterms left to right.
bool oracle_match(const trs::Term& p, const trs::Term& t, std::vector<trs::Term>& out) {
    if (p.is_var()) {
        out.push_back(t);
        return true;
    }
    if (t.is_var() || p.name() != t.name() || p.arity() != t.arity()) return false;
    for (std::size_t i = 0; i < p.arity(); ++i)
        if (!oracle_match(p.arg(i), t.arg(i), out)) return false;
    return true;
}

// Constructor terms of height at most `depth` (nullary constructors have height 0).
std::vector<trs::Term> enumerate(const trs::Signature& sig, std::size_t depth) {
    std::vector<trs::Term> level;
    for (const auto& c : sig.constructors)
        if (c.arity == 0) level.push_back(trs::Term::constructor(c.name, {}));
    for (std::size_t d = 0; d < depth; ++d) {
        std::vector<trs::Term> next;
        for (const auto& c : sig.constructors) {
            if (c.arity == 0) {
                next.push_back(trs::Term::constructor(c.name, {}));
                continue;
            }
            std::vector<std::size_t> idx(c.arity, 0);
            while (true) {
                std::vector<trs::Term> args;
                for (auto k : idx) args.push_back(level[k]);
                next.push_back(trs::Term::constructor(c.name, std::move(args)));
                std::size_t p = 0;
                while (p < idx.size() && ++idx[p] == level.size()) idx[p++] = 0;
                if (p == idx.size()) break;
            }
        }
        level = std::move(next);
    }
    return level;
}

// Selector values V_i = λQ1..Qk.λT1..Tn. Ti Q1..Qk.
lambda::Term selector_value(std::size_t i, std::size_t vars, std::size_t rows) {
    std::vector<std::string> qs, ts;
    std::vector<lambda::Term> qv;
    for (std::size_t k = 0; k < vars; ++k) {
        qs.push_back("Q" + std::to_string(k));
        qv.push_back(lambda::Term::var(qs.back()));
    }
    for (std::size_t k = 0; k < rows; ++k) ts.push_back("T" + std::to_string(k));
    return lambda::Term::lams(qs, lambda::Term::lams(ts, lambda::Term::apps(lambda::Term::var(ts[i]), qv)));
}

lambda::Term selected(std::size_t i, std::size_t rows, const std::vector<lambda::Term>& encoded) {
    std::vector<std::string> ts;
    for (std::size_t k = 0; k < rows; ++k) ts.push_back("T" + std::to_string(k));
    return lambda::Term::lams(ts, lambda::Term::apps(lambda::Term::var(ts[i]), encoded));
}

std::size_t pattern_vars(const std::vector<trs::Term>& row) {
    std::size_t n = 0;
    for (const auto& p : row) n += trs::vars(p).size();
    return n;
}

// Runs PAT over every tuple drawn from `subjects` (plus bottom) and compares
// with the independent matcher. Returns the number of tuples checked.
std::size_t pat_agreement(const ScottContext& ctx, const std::vector<PatternRow>& rows, std::size_t width,
                          const std::vector<trs::Term>& subjects) {
    const lambda::Term pat = compile_pattern_match(ctx, rows, width);
    std::vector<lambda::Term> values;
    for (std::size_t i = 0; i < rows.size(); ++i) values.push_back(selector_value(i, pattern_vars(rows[i]), rows.size()));

    const std::size_t choices = subjects.size() + 1; // last = bottom
    std::vector<std::size_t> idx(width, 0);
    std::size_t checked = 0;
    while (true) {
        std::vector<lambda::Term> args;
        bool has_bottom = false;
        for (auto k : idx) {
            if (k == subjects.size()) {
                has_bottom = true;
                args.push_back(ctx.bottom());
            } else {
                args.push_back(ctx.encode(subjects[k]));
            }
        }
        lambda::Term expected = ctx.bottom();
        if (!has_bottom) {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                std::vector<trs::Term> bound;
                bool ok = true;
                for (std::size_t c = 0; c < width && ok; ++c) ok = oracle_match(rows[r][c], subjects[idx[c]], bound);
                if (!ok) continue;
                std::vector<lambda::Term> enc;
                for (const auto& b : bound) enc.push_back(ctx.encode(b));
                expected = selected(r, rows.size(), enc);
                break;
            }
        }
        for (const auto& v : values) args.push_back(v);
        lambda::Term got = run(lambda::Term::apps(pat, args));
        CHECK_MESSAGE(lambda::alpha_equivalent(got, expected), lambda::to_string(got));
        ++checked;
        std::size_t p = 0;
        while (p < idx.size() && ++idx[p] == choices) idx[p++] = 0;
        if (p == idx.size()) break;
    }
    return checked;
}

std::map<std::string, std::vector<PatternRow>> rows_by_function(const trs::RewriteSystem& sys) {
    std::map<std::string, std::vector<PatternRow>> out;
    for (const auto& f : sys.signature.functions) out[f.name];
    for (const auto& r : sys.rules) out[r.head].push_back(r.lhs_args);
    return out;
}

} // namespace

TEST_CASE("Scott encodings") {
    auto sys = add_system();
    ScottContext ctx(sys.signature);
    CHECK(lambda::alpha_equivalent(ctx.encode(numeral(0)), parse("\\x.\\y.\\z.x")));
    CHECK(lambda::alpha_equivalent(ctx.encode(numeral(1)), parse("\\x.\\y.\\z.y (\\x.\\y.\\z.x)")));
    CHECK(lambda::alpha_equivalent(ctx.bottom(), parse("\\x.\\y.\\z.z")));
    CHECK(lambda::alpha_equivalent(ctx.curried(1), parse("\\w.\\x.\\y.\\z.y w")));
    CHECK(scott_encode(sys.signature, numeral(2)) == ctx.encode(numeral(2)));
    CHECK_THROWS_AS(ctx.encode(trs::Term::var("x")), Error);

    for (std::size_t n = 0; n < 20; ++n) {
        lambda::Term e = ctx.encode(numeral(n));
        CHECK(e.closed());
        CHECK_FALSE(lambda::step_cbv(e));
        CHECK(*ctx.decode(e) == numeral(n));
        CHECK(ctx.decode(e) != ctx.decode(ctx.encode(numeral(n + 1))));
    }
    CHECK_FALSE(ctx.decode(ctx.bottom()));
    CHECK(ctx.is_bottom(parse("\\a.\\b.\\c.c")));
}

TEST_CASE("Scott encodings are injective over random signatures") {
    verify::Rng rng(41);
    for (int s = 0; s < 30; ++s) {
        auto sys = verify::random_system(rng);
        ScottContext ctx(sys.signature);
        auto all = enumerate(sys.signature, 2);
        std::map<std::string, std::string> seen;
        for (const auto& t : all) {
            auto e = ctx.encode(t);
            CHECK(e.closed());
            CHECK(*ctx.decode(e) == t);
            auto [it, fresh] = seen.emplace(lambda::to_string(e), trs::to_string(t));
            CHECK((fresh || it->second == trs::to_string(t)));
        }
    }
}

TEST_CASE("constructor terms") {
    auto sys = add_system();
    ScottContext ctx(sys.signature);
    const auto zero = compile_constructor(ctx, 0);
    const auto succ = compile_constructor(ctx, 1);
    CHECK(zero == ctx.encode(numeral(0)));
    CHECK(succ.closed());

    std::uint64_t steps = 0;
    CHECK(run(lambda::Term::app(succ, ctx.encode(numeral(0))), &steps) == ctx.encode(numeral(1)));
    CHECK(steps == 5);
    CHECK(run(lambda::Term::app(succ, ctx.bottom()), &steps) == ctx.bottom());
    CHECK(steps == 5);

    // Cost does not depend on the size of the argument.
    std::uint64_t first = 0;
    for (std::size_t n = 1; n <= 30; ++n) {
        CHECK(run(lambda::Term::app(succ, ctx.encode(numeral(n))), &steps) == ctx.encode(numeral(n + 1)));
        if (n == 1) first = steps;
        CHECK(steps == first);
    }
    CHECK_THROWS_AS(compile_constructor(ctx, 2), Error);
}

TEST_CASE("constructor terms absorb bottom in every position") {
    trs::Signature sig{{{"z", 0}, {"p", 2}, {"t", 3}}, {}};
    ScottContext ctx(sig);
    auto subjects = enumerate(sig, 1);
    const auto triple = compile_constructor(ctx, 2);
    std::uint64_t worst = 0;
    for (std::size_t mask = 0; mask < 8; ++mask)
        for (const auto& a : subjects)
            for (const auto& b : subjects) {
                std::vector<lambda::Term> args{ctx.encode(a), ctx.encode(b), ctx.encode(a)};
                for (int k = 0; k < 3; ++k)
                    if (mask & (1u << k)) args[static_cast<std::size_t>(k)] = ctx.bottom();
                std::uint64_t steps = 0;
                auto got = run(lambda::Term::apps(triple, args), &steps);
                worst = std::max(worst, steps);
                if (mask) CHECK(got == ctx.bottom());
                else CHECK(got == ctx.encode(trs::Term::constructor("t", {a, b, a})));
            }
    // Deeper arguments do not raise the cost.
    std::uint64_t deep = 0;
    for (const auto& a : enumerate(sig, 2)) {
        std::uint64_t steps = 0;
        run(lambda::Term::apps(triple, {ctx.encode(a), ctx.encode(a), ctx.bottom()}), &steps);
        deep = std::max(deep, steps);
    }
    CHECK(deep <= worst);
}

TEST_CASE("pattern matching: worked examples") {
    auto sys = add_system();
    ScottContext ctx(sys.signature);
    auto x = trs::Term::var("x"), y = trs::Term::var("y");
    std::vector<PatternRow> rows{{numeral(0), x}, {trs::Term::constructor("s", {x}), y}};
    auto pat = compile_pattern_match(ctx, rows, 2);
    CHECK(pat.closed());
    auto got = run(lambda::Term::apps(pat, {ctx.encode(numeral(1)), ctx.encode(numeral(2)), selector_value(0, 1, 2),
                                            selector_value(1, 2, 2)}));
    CHECK(lambda::alpha_equivalent(got, selected(1, 2, {ctx.encode(numeral(0)), ctx.encode(numeral(2))})));

    CHECK(lambda::alpha_equivalent(compile_pattern_match(ctx, {}, 2), parse("\\a.\\b.\\x.\\y.\\z.z")));
    CHECK(compile_pattern_match(ctx, {}, 0) == ctx.bottom());

    auto single = compile_pattern_match(ctx, {{numeral(0), x}}, 2);
    CHECK(run(lambda::Term::apps(single, {ctx.bottom(), ctx.encode(numeral(0)), selector_value(0, 1, 1)})) ==
          ctx.bottom());
    CHECK(run(lambda::Term::apps(single, {ctx.encode(numeral(0)), ctx.bottom(), selector_value(0, 1, 1)})) ==
          ctx.bottom());

    CHECK_THROWS_AS(compile_pattern_match(ctx, {{x, numeral(0)}, {numeral(0), y}}, 2), OverlapError);
    CHECK_THROWS_AS(compile_pattern_match(ctx, {{x}}, 2), Error);
}

TEST_CASE("pattern matching agrees with first-order matching on the corpus") {
    std::size_t total = 0;
    for (const auto& path : test_corpus::files(".trs")) {
        auto sys = trs::parse_system(test_corpus::read(path));
        ScottContext ctx(sys.signature);
        auto subjects = enumerate(sys.signature, 2);
        for (const auto& [name, rows] : rows_by_function(sys)) {
            const auto* f = sys.signature.find_function(name);
            total += pat_agreement(ctx, rows, f->arity, subjects);
        }
    }
    CHECK(total > 0);
}

TEST_CASE("pattern matching agrees with first-order matching on random systems") {
    verify::Rng rng(42);
    for (int s = 0; s < 40; ++s) {
        auto sys = verify::random_system(rng);
        ScottContext ctx(sys.signature);
        auto subjects = enumerate(sys.signature, 2);
        if (subjects.size() > 14) subjects.resize(14);
        for (const auto& [name, rows] : rows_by_function(sys))
            pat_agreement(ctx, rows, sys.signature.find_function(name)->arity, subjects);
    }
}

TEST_CASE("fixpoint family") {
    // n = 1 unfolds in two steps.
    auto h = fixpoint_family(1);
    auto v = parse("\\f.\\a.a");
    auto expected1 = lambda::Term::app(
        v, lambda::Term::abs("x", lambda::Term::apps(h[0], std::vector{v, lambda::Term::var("x")})));
    auto s1 = lambda::step_cbv(lambda::Term::app(h[0], v));
    REQUIRE(s1);
    auto s2 = lambda::step_cbv(*s1);
    REQUIRE(s2);
    CHECK(lambda::alpha_equivalent(*s2, expected1));

    verify::Rng rng(43);
    for (std::size_t n = 1; n <= 4; ++n) {
        auto hs = fixpoint_family(n);
        for (const auto& hi : hs) CHECK(hi.closed());
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<lambda::Term> vs;
            for (std::size_t j = 0; j < n; ++j) vs.push_back(lambda::Term::abs("q", verify::random_closed_term(rng)));
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<lambda::Term> unfolded;
                for (std::size_t j = 0; j < n; ++j) {
                    auto args = vs;
                    args.push_back(lambda::Term::var("x"));
                    unfolded.push_back(lambda::Term::abs("x", lambda::Term::apps(hs[j], args)));
                }
                auto target = lambda::Term::apps(vs[i], unfolded);
                lambda::Term cur = lambda::Term::apps(hs[i], vs);
                std::size_t k = 0;
                while (!lambda::alpha_equivalent(cur, target) && k <= 2 * n) {
                    auto next = lambda::step_cbv(cur);
                    REQUIRE(next);
                    cur = *next;
                    ++k;
                }
                CHECK(k == 2 * n);
            }
        }
    }
}

TEST_CASE("compiled functions: worked examples") {
    CompiledSystem cs(add_system());
    const auto& ctx = cs.scott();
    const auto& add = cs.function(0);
    CHECK(add.closed());
    CHECK(run(lambda::Term::apps(add, {ctx.encode(numeral(1)), ctx.encode(numeral(2))})) == ctx.encode(numeral(3)));
    for (std::size_t t = 0; t < 3; ++t)
        CHECK(run(lambda::Term::apps(add, {ctx.bottom(), ctx.encode(numeral(t))})) == ctx.bottom());
    CHECK(run(lambda::Term::apps(add, {ctx.encode(numeral(2)), ctx.bottom()})) == ctx.bottom());
    CHECK(compile_function(add_system(), 0) == add);

    CompiledSystem id(trs::parse_system(test_corpus::read_named("identity.trs")));
    CHECK(run(lambda::Term::app(id.function(0), id.scott().encode(numeral(0)))) == id.scott().encode(numeral(0)));

    // Compositional translation gives the same value as the data-encoded one.
    auto t = trs::parse_term("add(s(0),add(s(s(0)),0))", cs.system().signature);
    CHECK(run(cs.compile_term(t)) == ctx.encode(numeral(3)));
    CHECK(run(cs.compile_input(t)) == ctx.encode(numeral(3)));
    CHECK(cs.compile_input(numeral(2)) == ctx.encode(numeral(2)));
}

TEST_CASE("nullary functions and rule bodies are not evaluated early") {
    auto sys = trs::parse_system(
        "constructors: 0/0 s/1\n"
        "functions: two/0 loop/1 pick/2\n"
        "rules:\n"
        "two -> s(s(0))\n"
        "loop(x) -> loop(x)\n"
        "pick(0,x) -> x\n"
        "pick(s(y),x) -> loop(x)\n");
    CompiledSystem cs(sys);
    const auto& ctx = cs.scott();
    CHECK(run(cs.compile_input(trs::parse_term("two", sys.signature))) == ctx.encode(numeral(2)));
    CHECK(run(cs.compile_input(trs::parse_term("pick(0,two)", sys.signature))) == ctx.encode(numeral(2)));
    auto diverging = lambda::normalize(cs.compile_input(trs::parse_term("pick(s(0),0)", sys.signature)),
                                       lambda::Strategy::CBV, 20000);
    CHECK(diverging.status == lambda::Status::FuelExhausted);
}

TEST_CASE("verify_simulation") {
    CompiledSystem cs(add_system());
    auto t = trs::parse_term("add(s(0),s(s(0)))", cs.system().signature);
    auto rep = verify_simulation(cs, t);
    CHECK(rep.status == trs::Status::ConstructorNF);
    CHECK(rep.trs_steps == 2);
    CHECK(rep.lambda_result == cs.scott().encode(numeral(3)));
    CHECK(rep.size == 6);
    CHECK(rep.ratio > 0);

    auto c = verify_simulation(cs, numeral(1));
    CHECK(c.trs_steps == 0);
    CHECK(c.lambda_steps == 0);

    CompiledSystem partial(trs::parse_system(test_corpus::read_named("partial.trs")));
    auto stuck = verify_simulation(partial, trs::parse_term("f(s(0))", partial.system().signature));
    CHECK(stuck.status == trs::Status::Deadlock);
    CHECK(partial.scott().is_bottom(stuck.lambda_result));

    // A bound that is too tight is reported.
    TranslationOptions tight;
    tight.k = 0.01;
    CHECK_THROWS_AS(verify_simulation(cs, t, tight), SimulationMismatch);

    CHECK_THROWS_AS(verify_simulation(cs, trs::Term::var("x")), Error);
}

TEST_CASE("measured k bounds larger additions") {
    CompiledSystem cs(add_system());
    std::vector<trs::Term> calibration;
    for (std::size_t p = 0; p <= 2; ++p)
        for (std::size_t q = 0; q <= 2; ++q) calibration.push_back(trs::Term::function("add", {numeral(p), numeral(q)}));
    const double k = measure_k(cs, calibration);
    CHECK(k > 0);
    cs.set_k(k);
    double previous = k;
    for (std::size_t p = 0; p <= 12; ++p) {
        for (std::size_t q = 0; q <= 12; q += 3) {
            auto rep = verify_simulation(cs, trs::Term::function("add", {numeral(p), numeral(q)}));
            CHECK(rep.trs_steps == p + 1);
            CHECK(rep.ratio <= k);
        }
        auto rep = verify_simulation(cs, trs::Term::function("add", {numeral(p), numeral(0)}));
        CHECK(rep.ratio <= previous + 1e-12);
        previous = rep.ratio;
    }
}

TEST_CASE("random systems: compiled terms agree with rewriting") {
    verify::Rng rng(44);
    for (int s = 0; s < 40; ++s) {
        CompiledSystem cs(verify::random_system(rng));
        for (const auto& f : cs.fixpoints()) CHECK(f.closed());
        for (std::size_t i = 0; i < cs.scott().g(); ++i) CHECK(cs.constructor(i).closed());
        for (std::size_t i = 0; i < cs.system().signature.functions.size(); ++i) CHECK(cs.function(i).closed());
        for (int j = 0; j < 8; ++j) {
            auto t = verify::random_call(rng, cs.system().signature, 2);
            TranslationOptions opt;
            opt.fuel = 2000;
            opt.lambda_fuel = 2'000'000;
            opt.bounded = false;
            auto rep = verify_simulation(cs, t, opt);
            if (rep.status == trs::Status::ConstructorNF)
                CHECK(*cs.scott().decode(rep.lambda_result) == rep.trs_result);
        }
    }
}
