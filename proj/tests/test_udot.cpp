#include <random>

#include "doctest.h"
#include "iqg/udot.hpp"

using namespace iqg;

TEST_CASE("idempotent calculus basics") {
    // (F 1*[m+2]) (E 1*[m]) = E F 1*[m] + [-m] 1*[m]
    long m = -1;
    DotElement prod = dot_multiply(DotElement::ef(1, 0, 1, m + 2),
                                   DotElement::ef(1, 1, 0, m));
    DotElement expect = DotElement::ef(1, 1, 1, m) +
                        DotElement::ef(1, 0, 0, m, qint(-m, 1));
    CHECK(prod.structurally_equal(expect));

    // orthogonal idempotents
    CHECK(dot_multiply(DotElement::idempotent(1, 2), DotElement::idempotent(1, 2))
              .structurally_equal(DotElement::idempotent(1, 2)));
    CHECK(dot_multiply(DotElement::idempotent(1, 2), DotElement::idempotent(1, 3))
              .empty());

    // divided-power merge: E^(1) 1*[m] . E^(1) 1*[m-2] = [2] E^(2) 1*[m-2]
    DotElement merged = dot_multiply(DotElement::ef(1, 1, 0, 4),
                                     DotElement::ef(1, 1, 0, 2));
    CHECK(merged.structurally_equal(DotElement::ef(1, 2, 0, 2, qint(2, 1))));
}

TEST_CASE("dot multiplication is associative") {
    std::mt19937_64 rng(41);
    auto rand_elem = [&]() {
        DotElement x(1);
        for (int t = 0; t < 2; ++t) {
            long a = rng() % 3, b = rng() % 3;
            long m = static_cast<long>(rng() % 9) - 4;
            QScalar c = QScalar::q_power(static_cast<long>(rng() % 5) - 2);
            x.add_term({a, b, m}, c);
        }
        return x;
    };
    for (int t = 0; t < 10; ++t) {
        DotElement a = rand_elem(), b = rand_elem(), c = rand_elem();
        CHECK(dot_multiply(dot_multiply(a, b), c)
                  .structurally_equal(dot_multiply(a, dot_multiply(b, c))));
    }
}

TEST_CASE("dot divided powers") {
    // m = 0 is the idempotent
    CHECK(dot_idp(1, 0, kOdd, 3).structurally_equal(DotElement::idempotent(1, 3)));
    // m = 1: F 1*[2L] + q^{-2L-1} E 1*[2L]
    long L = 2;
    DotElement expect = DotElement::ef(1, 0, 1, 2 * L) +
                        DotElement::ef(1, 1, 0, 2 * L,
                                       QScalar::q_power(-2 * L - 1));
    CHECK(dot_idp(1, 1, kEven, 2 * L).structurally_equal(expect));
    CHECK(dot_idp(1, -2, kOdd, 0).empty());

    // order 2 odd flavor: (B^2 - 1)/[2]! applied to the idempotent
    DotElement viaB = dot_lmul_B(dot_lmul_B(DotElement::idempotent(1, 4))) -
                      DotElement::idempotent(1, 4);
    viaB *= inv_qfact(2, 1);
    CHECK(dot_idp(1, 2, kOdd, 4).structurally_equal(viaB));
}

TEST_CASE("windowed divided powers") {
    auto window = dot_idp(1, 2, kOdd, Range{-2, 2});
    CHECK(window.size() == 5);
    for (const auto& [label, x] : window)
        CHECK(x.structurally_equal(dot_idp(1, 2, kOdd, label)));
}

TEST_CASE("expansion suite") {
    UdotGrid g;
    g.order_max = 3;
    g.lambda = {-2, 2};
    g.roundtrip_max = 3;
    g.roundtrip_m = {-4, 4};
    Report r = verify_idp_expansion(g);
    CHECK(r.ok());
    CHECK(r.checked > 50);
    CHECK_FALSE(verify_idp_expansion(g, 1).ok());
}

TEST_CASE("expansion suite with a non-trivial symmetrizer") {
    UdotGrid g;
    g.order_max = 3;
    g.lambda = {-1, 1};
    g.eps = 2;
    CHECK(verify_idp_expansion(g).ok());
}
