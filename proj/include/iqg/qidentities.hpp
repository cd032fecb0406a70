// The combinatorial functions G, H, T and exhaustive exact checkers for the
// pure q-binomial identities they satisfy.
#pragma once

#include "iqg/qscalar.hpp"
#include "iqg/report.hpp"
#include "iqg/zpoly.hpp"

namespace iqg {

struct GParams {
    long w = 0;
    long u = 0;   // >= 0
    long ell = 0; // >= 0
    long p0 = 0, p1 = 0, p2 = 0;
};

struct TParams {
    long w = 0;
    long u = 0, l = 0, mu = 0, beta = 0;  // >= 0
    long alpha = 0;                       // alpha = -a_12 >= 0
    long eps = 1;                         // base q_1 = q^eps
};

// exact evaluation kernels (integer Laurent polynomials); fault != 0 applies
// the documented single-exponent mutation used by the self-tests
ZPoly eval_G_core(long w, long u, long ell, long p0, long p1, long p2,
                  int fault = 0);
ZPoly eval_H_core(long u, long p1, long p2);
// in q_1 units (substitute q -> q^eps afterwards for the actual value)
ZPoly eval_T_core(long w, long u, long l, long mu, long beta, long alpha,
                  int fault = 0);

QScalar eval_G(const GParams& p);
QScalar eval_H(long u, long p1, long p2);
QScalar eval_T(const TParams& p);

struct GGrid {
    Range w{-4, 4};
    Range u{0, 4};
    Range ell{0, 3};
    Range p{-3, 3};  // used for p0, p1, p2
    Range k{-2, 2};
};

struct TGrid {
    Range w{-3, 3};
    Range u{0, 3};
    Range l{0, 4};
    Range mu{0, 3};
    Range beta{0, 1};
    std::vector<long> alphas{1, 2, 3};
};

struct AppBGrid {
    Range m{0, 8};
    Range a{-3, 0};
    Range n{0, 3};
    Range qbi_k{-5, 5};
    Range qbi_u{0, 5};
};

Report verify_G_suite(const GGrid& g, int fault = 0, int jobs = 1);
Report verify_T_suite(const TGrid& g, int fault = 0, int jobs = 1);
Report verify_appB_suite(const AppBGrid& g, int fault = 0, int jobs = 1);

}  // namespace iqg
