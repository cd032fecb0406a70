#include <random>

#include "doctest.h"
#include "iqg/exprdsl.hpp"

using namespace iqg;

TEST_CASE("parsing and rendering") {
    CHECK(render(parse_expr("B[1]*B[2] - B[2]*B[1]")) == "B[1]*B[2]-B[2]*B[1]");
    CHECK(render(parse_expr("idp(1, 3, odd)")) == "idp(1,3,odd)");
    CHECK(render(parse_expr("E[1]^2 * qbinom(2,1)")) == "E[1]^2*qbinom(2,1)");
    CHECK(render(parse_expr("B[1] * (B[2]+B[3])")) == "B[1]*(B[2]+B[3])");
    CHECK(render(parse_expr("E[2]^1")) == "E[2]");
    CHECK(render(parse_expr("-B[1] + 2")) == "-B[1]+2");

    // render . parse is the identity on rendered text
    for (const char* src : {"B[1]*B[2]-B[2]*B[1]", "idp(1,3,odd)",
                            "fplus(1,2,1,2,+1)", "k[1]^-2*B[1]",
                            "3*q^-2+1", "y(1,2,1,2,even,odd,-1)"}) {
        std::string once = render(parse_expr(src));
        CHECK(render(parse_expr(once)) == once);
    }
}

TEST_CASE("parse diagnostics carry a position and expectation") {
    try {
        parse_expr("B[1] + * 2");
        FAIL("expected a parse error");
    } catch (const DslParseError& e) {
        CHECK(e.pos == 7);
        CHECK(e.expected == "atom");
    }
    CHECK_THROWS_AS(parse_expr("idp(1,2"), DslParseError);
    CHECK_THROWS_AS(parse_expr("E[1"), DslParseError);
    CHECK_THROWS_AS(parse_expr(""), DslParseError);
}

TEST_CASE("evaluation in both targets") {
    auto d = make_rank2(-1, -1);
    CHECK(dd_is_zero(eval_dd(parse_expr("fplus(1,2,1,2,+1)"), d)));
    CHECK(dd_is_zero(eval_dd(parse_expr("fplus(1,2,1,2,-1,F)"), d)));
    CHECK(eval_iexpr(parse_expr("B[1]"), d)
              .structurally_equal(IExpr::gen_B(d, 0)));
    CHECK(dd_is_zero(eval_dd(parse_expr("k[1]*B[1]-B[1]*k[1]"), d)));
    // auto-embedding of B/k inside a DD-targeted mixed expression
    DDElement mixed = eval_dd(parse_expr("B[1]*Kt[2] - B[1]*Kt[2]"), d);
    CHECK(mixed.empty());
    // scalar evaluation
    CHECK(canonical_equal(eval_scalar(parse_expr("qint(2)*qint(2) - qbinom(2,1)^2")),
                          QScalar(0)));
    CHECK(canonical_equal(eval_scalar(parse_expr("3*q^-2 + 1")),
                          QScalar::parse("3*q^-2 + 1")));
    // dp in both targets
    CHECK(eval_dd(parse_expr("dp(1,2,E)"), d)
              .structurally_equal(divided_power(d, 0, 2, Side::E)));
    IExpr bdp = eval_iexpr(parse_expr("dp(1,2)"), d);
    CHECK(bdp.terms().size() == 1);
}

TEST_CASE("incompatible usage errors") {
    auto d = make_rank2(-1, -1);
    CHECK_THROWS_AS(eval_iexpr(parse_expr("E[1]"), d), DslEvalError);
    CHECK_THROWS_AS(eval_iexpr(parse_expr("fplus(1,2,1,2,+1)"), d), DslEvalError);
    CHECK_THROWS_AS(eval_dd(parse_expr("E[7]"), d), std::runtime_error);
    CHECK_THROWS_AS(eval_dd(parse_expr("y(1,2,1,2,even,even,+2)"), d), DslEvalError);
    CHECK_THROWS_AS(eval_dd(parse_expr("E[1]^-1"), d), DslEvalError);
    CHECK(mentions_dd_generators(parse_expr("E[1]*B[2]")));
    CHECK_FALSE(mentions_dd_generators(parse_expr("B[1]*k[2]^-1")));
}

TEST_CASE("evaluation is a homomorphism") {
    auto d = make_rank2(-2, -1);
    std::mt19937_64 rng(43);
    const char* atoms[] = {"B[1]", "B[2]", "k[1]", "idp(1,2,odd)", "2", "q"};
    auto rand_text = [&](int depth) {
        std::string a = atoms[rng() % 6];
        std::string b = atoms[rng() % 6];
        std::string op = rng() % 2 ? "+" : "*";
        std::string base = "(" + a + op + b + ")";
        if (depth > 0 && rng() % 2) base += "*" + std::string(atoms[rng() % 6]);
        return base;
    };
    for (int t = 0; t < 8; ++t) {
        std::string sa = rand_text(1), sb = rand_text(1);
        IExpr xa = eval_iexpr(parse_expr(sa), d);
        IExpr xb = eval_iexpr(parse_expr(sb), d);
        IExpr prod = eval_iexpr(parse_expr(sa + "*" + sb), d);
        IExpr sum = eval_iexpr(parse_expr(sa + "+" + sb), d);
        CHECK(prod.structurally_equal(xa * xb));
        CHECK(sum.structurally_equal(xa + xb));
    }
}
