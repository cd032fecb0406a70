#include "doctest.h"
#include "iqg/qidentities.hpp"

using namespace iqg;

TEST_CASE("H values") {
    CHECK(canonical_equal(eval_H(0, 7, -2), QScalar(1)));
    CHECK(canonical_equal(eval_H(1, 1, 0), QScalar::q_power(4)));
    CHECK(eval_H(1, 0, 0).is_zero());
    CHECK(eval_H(3, 0, 0).is_zero());
}

TEST_CASE("G values") {
    // only the empty tuple survives at u = l = 0
    for (long p0 : {-2L, 0L, 3L})
        CHECK(canonical_equal(eval_G({0, 0, 0, p0, 1, -1}), QScalar(1)));
    // vanishing for l > 0
    CHECK(eval_G({0, 1, 1, 0, 0, 0}).is_zero());
    CHECK(eval_G({2, 3, 2, 1, -1, 2}).is_zero());
    // agreement with H at l = 0, p0 = 0, independent of w
    CHECK(canonical_equal(eval_G({3, 2, 0, 0, 1, 1}), eval_H(2, 1, 1)));
    CHECK(canonical_equal(eval_G({-2, 2, 0, 0, 1, 1}), eval_H(2, 1, 1)));
}

TEST_CASE("T values") {
    TParams p;
    p.w = 4;
    p.alpha = 3;
    CHECK(canonical_equal(eval_T(p), QScalar(1)));
    // vanishing region: l <= alpha mu <= 2u + l - 1 - 2 alpha beta
    TParams z{0, 2, 0, 1, 0, 1, 1};
    CHECK(eval_T(z).is_zero());
    // base change: eps scales exponents
    TParams s1{1, 1, 0, 1, 0, 2, 1};
    TParams s2 = s1;
    s2.eps = 2;
    auto [n1, d1] = eval_T(s1).normalized();
    auto [n2, d2] = eval_T(s2).normalized();
    CHECK(n1.subst_q_power(2) == n2);
}

TEST_CASE("suites pass on small grids and detect mutations") {
    GGrid gg;
    gg.w = {-2, 2};
    gg.u = {0, 2};
    gg.ell = {0, 2};
    gg.p = {-1, 1};
    gg.k = {-1, 1};
    Report rg = verify_G_suite(gg);
    CHECK(rg.ok());
    CHECK(rg.checked > 1000);
    Report rgf = verify_G_suite(gg, 1);
    CHECK_FALSE(rgf.ok());
    // first witness is the lexicographically smallest failing tuple
    CHECK(rgf.failures.front().params.substr(0, 4) == "w=-2");

    TGrid tg;
    tg.w = {-2, 2};
    tg.u = {0, 2};
    tg.l = {0, 2};
    tg.mu = {0, 2};
    tg.beta = {0, 1};
    tg.alphas = {1, 2};
    CHECK(verify_T_suite(tg).ok());
    CHECK_FALSE(verify_T_suite(tg, 1).ok());

    AppBGrid ag;
    ag.m = {0, 6};
    Report rb = verify_appB_suite(ag);
    CHECK(rb.ok());
    CHECK_FALSE(verify_appB_suite(ag, 1).ok());
}

TEST_CASE("report serialization shape") {
    GGrid gg;
    gg.w = {0, 0};
    gg.u = {0, 1};
    gg.ell = {0, 1};
    gg.p = {0, 0};
    gg.k = {0, 0};
    Report r = verify_G_suite(gg);
    std::string j = r.to_json_text();
    for (const char* key : {"\"suite\"", "\"grid\"", "\"checked\"",
                            "\"failures\"", "\"elapsed_ms\""})
        CHECK(j.find(key) != std::string::npos);
}

TEST_CASE("parallel evaluation is deterministic") {
    GGrid gg;
    gg.w = {-2, 2};
    gg.u = {0, 2};
    gg.ell = {0, 1};
    gg.p = {-1, 1};
    gg.k = {0, 0};
    Report a = verify_G_suite(gg, 1, 1);
    Report b = verify_G_suite(gg, 1, 4);
    CHECK(a.checked == b.checked);
    REQUIRE(a.failures.size() == b.failures.size());
    for (size_t t = 0; t < a.failures.size(); ++t)
        CHECK(a.failures[t].params == b.failures[t].params);
}
