#include "doctest.h"
#include "iqg/cartan.hpp"
#include "iqg/qscalar.hpp"

using namespace iqg;

TEST_CASE("validation") {
    CHECK(validate_datum(*make_rank2(-1, -1)).empty());
    CHECK(validate_datum(*make_rank2(-2, -1)).empty());

    CartanDatum bad = *make_rank2(-2, -1);
    bad.eps = {1, 1};
    auto v = validate_datum(bad);
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().find("symmetrizable") != std::string::npos);

    CartanDatum diag = *make_rank2(-1, -1);
    diag.cartan[0][0] = 1;
    CHECK_FALSE(validate_datum(diag).empty());

    CartanDatum pos = *make_rank2(-1, -1);
    pos.cartan[0][1] = 1;
    pos.cartan[1][0] = 1;
    CHECK_FALSE(validate_datum(pos).empty());

    CartanDatum black = *make_rank2(-1, -1);
    black.black = {0};
    auto vb = validate_datum(black);
    REQUIRE_FALSE(vb.empty());
    CHECK(vb.front().find("quasi-split") != std::string::npos);

    CartanDatum tau_bad = *make_a3_swapped();
    tau_bad.eps = {1, 1, 2};
    CHECK_FALSE(validate_datum(tau_bad).empty());
}

TEST_CASE("node classes") {
    auto a2 = make_rank2(-1, -1);
    CHECK(node_class(*a2, 0) == NodeClass::split);
    auto a3 = make_a3_swapped();
    CHECK(node_class(*a3, 0) == NodeClass::swapped);
    CHECK(node_class(*a3, 1) == NodeClass::split);
    CHECK(node_class(*a3, 2) == NodeClass::swapped);
}

TEST_CASE("symmetrizability of the q-pairing") {
    for (const auto& d : {make_rank2(-1, -1), make_rank2(-2, -1), make_rank2(-3, -1),
                          make_a3_swapped()}) {
        for (int i = 0; i < d->rank(); ++i)
            for (int j = 0; j < d->rank(); ++j) {
                // q_i^{a_ij} == q_j^{a_ji} exactly
                LaurentPoly qi = LaurentPoly::q_power(d->eps_of(i) * d->a(i, j));
                LaurentPoly qj = LaurentPoly::q_power(d->eps_of(j) * d->a(j, i));
                CHECK(qi == qj);
            }
    }
}

TEST_CASE("serialization round trip") {
    for (const auto& d : {make_rank2(-2, -1), make_a3_swapped()}) {
        CartanDatum back = CartanDatum::from_json_text(d->to_json_text());
        CHECK(validate_datum(back).empty());
        CHECK(back.fingerprint() == d->fingerprint());
    }
}

TEST_CASE("node resolution") {
    auto d = make_a3_swapped();
    CHECK(d->resolve_node("2") == 1);   // name match first
    CHECK(d->resolve_node("3") == 2);
    CHECK_THROWS(d->resolve_node("7"));
    CartanDatum named = *d;
    named.names = {"a", "b", "c"};
    CHECK(named.resolve_node("b") == 1);
    CHECK(named.resolve_node("2") == 1);  // 1-based position fallback
}
