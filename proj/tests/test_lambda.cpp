#include "doctest.h"

#include "oracles/lambda_ref.hpp"
#include "rosetta/error.hpp"
#include "rosetta/lambda/eval.hpp"
#include "rosetta/lambda/syntax.hpp"
#include "rosetta/verify/random.hpp"

using namespace rosetta;
using namespace rosetta::lambda;

namespace {

Term P(const char* src) { return parse(src); }

const char* kL = "((\\x.\\y.x y x)(\\x.\\y.y x y))(\\x.\\y.x y x)";

} // namespace

TEST_CASE("free variables are sorted and duplicate-free") {
    CHECK(free_vars(P("\\x.x")).empty());
    CHECK(free_vars(P("\\x.y x z")) == Names{"y", "z"});
    CHECK(free_vars(P("x y x")) == Names{"x", "y"});
    CHECK(free_vars(P("z (\\a.a b) a")) == Names{"a", "b", "z"});
}

TEST_CASE("length follows the inductive definition") {
    CHECK(P("x").length() == 1);
    CHECK(P("\\x.x").length() == 2);
    CHECK(P("(\\x.x)(\\y.y)").length() == 5);
}

TEST_CASE("substitution") {
    CHECK(substitute(P("x"), "x", P("\\y.y")) == P("\\y.y"));
    CHECK(substitute(P("\\y.x"), "x", P("\\z.z")) == P("\\y.\\z.z"));
    CHECK(substitute(P("\\x.x"), "x", P("\\z.z")) == P("\\x.x"));
    CHECK_THROWS_AS(substitute(P("\\y.x"), "x", P("y")), CaptureError);
    // No capture when the binder sits on a path without x.
    CHECK(substitute(P("(\\y.y) x"), "x", P("y")) == P("(\\y.y) y"));
}

TEST_CASE("simultaneous substitution ignores shadowed bindings") {
    std::vector<std::pair<std::string, Term>> b{{"x", P("a")}, {"y", P("b")}};
    CHECK(substitute(P("x (\\x.x y)"), b) == P("a (\\x.x b)"));
}

TEST_CASE("parser and printer") {
    CHECK(P("\\x.\\y.x") == Term::abs("x", Term::abs("y", Term::var("x"))));
    CHECK(P("a b c") == Term::app(Term::app(P("a"), P("b")), P("c")));
    CHECK(P("λx.x") == P("\\x.x"));
    CHECK(P("# comment\n  (\\x.x) # trailing\n") == P("\\x.x"));
    CHECK(P("f' x_1") == Term::app(P("f'"), P("x_1")));
    CHECK(to_string(P("(\\x.x x)(\\y.y y)")) == "(\\x.x x) (\\y.y y)");
    CHECK(to_string(P("a (b c) (\\x.x)")) == "a (b c) (\\x.x)");
    CHECK(to_string(P("\\x.\\y.x y x")) == "\\x.\\y.x y x");

    SUBCASE("errors carry positions") {
        try {
            (void)P("(\\x.x\n  ))");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(e.column() == 4);
        }
        CHECK_THROWS_AS(P(""), ParseError);
        CHECK_THROWS_AS(P("\\.x"), ParseError);
        CHECK_THROWS_AS(P("x $"), ParseError);
    }

    SUBCASE("printing round-trips on random terms") {
        verify::Rng rng(7);
        for (int i = 0; i < 300; ++i) {
            Term m = verify::random_closed_term(rng);
            CHECK(parse(to_string(m)) == m);
        }
    }
}

TEST_CASE("call-by-value steps") {
    CHECK(*step_cbv(P("(\\x.x)(\\y.y)")) == P("\\y.y"));

    // Expected value from the nameless reference evaluator.
    Term m = P("(\\x.\\y.x)((\\z.z)(\\z.z))");
    auto ref = oracle::step_cbv(oracle::to_db(m));
    REQUIRE(ref);
    CHECK(oracle::same(*ref, oracle::to_db(P("(\\x.\\y.x)(\\z.z)"))));
    CHECK(*step_cbv(m) == P("(\\x.\\y.x)(\\z.z)"));

    Term omega = P("(\\x.x x)(\\y.y y)");
    Term u = P("(\\y.y y)(\\y.y y)");
    CHECK(*step_cbv(omega) == u);
    CHECK(*step_cbv(u) == u);

    CHECK_FALSE(step_cbv(P("\\x.(\\z.z)(\\z.z)")));
}

TEST_CASE("call-by-name steps") {
    Term m = P("(\\x.\\y.x)((\\z.z)(\\z.z))");
    auto ref = oracle::step_cbn(oracle::to_db(m));
    REQUIRE(ref);
    CHECK(oracle::same(*ref, oracle::to_db(P("\\y.(\\z.z)(\\z.z)"))));
    CHECK(*step_cbn(m) == P("\\y.(\\z.z)(\\z.z)"));
    CHECK_FALSE(step_cbn(P("\\x.(\\z.z)(\\z.z)")));
    CHECK(*step_cbn(P("(\\x.x)((\\y.y)(\\z.z))")) == P("(\\y.y)(\\z.z)"));
}

TEST_CASE("normalize") {
    auto l = normalize(P(kL), Strategy::CBV, 4);
    CHECK(l.status == Status::FuelExhausted);
    CHECK(l.steps == 4);

    auto two = normalize(P("(\\x.(\\y.x)x)(\\z.z)"), Strategy::CBV, 100);
    CHECK(two.status == Status::NormalForm);
    CHECK(two.steps == 2);
    CHECK(two.result == P("\\z.z"));

    for (auto s : {Strategy::CBV, Strategy::CBN}) {
        auto id = normalize(P("\\x.x"), s, 10);
        CHECK(id.steps == 0);
        CHECK(id.result == P("\\x.x"));
        CHECK(id.status == Status::NormalForm);
    }

    auto zero = normalize(P("(\\x.x)(\\y.y)"), Strategy::CBV, 0);
    CHECK(zero.status == Status::FuelExhausted);
    CHECK(zero.steps == 0);
}

TEST_CASE("the L term alternates with period two") {
    // L -> (λy.N y N) M -> P = N M N, then P -> ... -> P.
    Term M = P("\\x.\\y.x y x");
    Term N = P("\\x.\\y.y x y");
    Term L = Term::app(Term::app(M, N), M);
    Term Pt = Term::app(Term::app(N, M), N);
    CHECK(*step_cbv(L) == Term::app(P("\\y.(\\x.\\y.y x y) y (\\x.\\y.y x y)"), M));
    CHECK(*step_cbv(*step_cbv(L)) == Pt);
    CHECK(*step_cbv(*step_cbv(Pt)) == Pt);
}

TEST_CASE("property: evaluators agree with the nameless reference") {
    verify::Rng rng(11);
    for (int i = 0; i < 400; ++i) {
        Term m = verify::random_closed_term(rng);
        for (auto s : {Strategy::CBV, Strategy::CBN}) {
            Term cur = m;
            auto ref = oracle::to_db(m);
            for (int k = 0; k < 200 && cur.length() < 4000; ++k) {
                auto next = step(cur, s);
                auto rnext = s == Strategy::CBV ? oracle::step_cbv(ref) : oracle::step_cbn(ref);
                REQUIRE(bool(next) == bool(rnext));
                if (!next) break;
                cur = *next;
                ref = *rnext;
                if (cur.length() < 4000) REQUIRE(oracle::same(oracle::to_db(cur), ref));
            }
        }
    }
}

TEST_CASE("property: any CBV redex choice reaches the same normal form in the same count") {
    verify::Rng rng(3);
    int checked = 0;
    for (int i = 0; i < 2000 && checked < 200; ++i) {
        Term m = verify::random_closed_term(rng, {16, false});
        auto det = normalize(m, Strategy::CBV, 300);
        if (det.status != Status::NormalForm) continue;
        auto redexes = cbv_redexes(m);
        if (redexes.size() < 2) continue;
        ++checked;
        auto first = normalize(*step_cbv(m), Strategy::CBV, 300);
        for (const auto& p : redexes) {
            auto alt = normalize(contract_at(m, p), Strategy::CBV, 300);
            CHECK(alt.status == Status::NormalForm);
            CHECK(alt.steps == first.steps);
            CHECK(alt.result == first.result);
        }
    }
    CHECK(checked > 20);
}

TEST_CASE("property: CBN and CBV coincide when arguments are values") {
    verify::Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        Term m = verify::random_closed_term(rng, {40, true});
        auto v = step_cbv(m);
        auto n = step_cbn(m);
        REQUIRE(bool(v) == bool(n));
        if (v) CHECK(*v == *n);
    }
}

TEST_CASE("property: fuel is respected and normal forms have no redex") {
    verify::Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        Term m = verify::random_closed_term(rng);
        for (auto s : {Strategy::CBV, Strategy::CBN}) {
            const std::uint64_t fuel = i % 50;
            auto out = normalize(m, s, fuel);
            CHECK(out.steps <= fuel);
            if (out.status == Status::NormalForm) CHECK_FALSE(step(out.result, s));
        }
    }
}

TEST_CASE("property: length of a substitution instance") {
    verify::Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
        Term m = verify::random_term(rng, 1 + i % 30, {"x", "y"});
        Term n = verify::random_closed_term(rng, {12, false});
        Term s = substitute(m, "x", n);
        CHECK(s.length() == m.length() + occurrences(m, "x") * (n.length() - 1));
    }
}
