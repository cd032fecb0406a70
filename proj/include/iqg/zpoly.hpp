// Dense Laurent polynomials over int64, used as the evaluation kernel of the
// pure q-identity suites.  All quantities there are integer polynomials with
// small coefficients; arithmetic is overflow-checked and any overflow throws.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "iqg/qscalar.hpp"

namespace iqg {

struct ZPoly {
    long lo = 0;
    std::vector<long long> c;  // c[i] = coefficient of q^(lo+i); no zero ends

    ZPoly() = default;
    explicit ZPoly(long long v) {
        if (v != 0) c.assign(1, v);
    }
    static ZPoly q_power(long k) {
        ZPoly p;
        p.lo = k;
        p.c.assign(1, 1);
        return p;
    }

    bool is_zero() const { return c.empty(); }
    long high() const { return lo + static_cast<long>(c.size()) - 1; }
    void trim();

    ZPoly operator-() const;
    ZPoly& operator+=(const ZPoly& o);
    ZPoly& operator-=(const ZPoly& o);
    friend ZPoly operator+(ZPoly a, const ZPoly& b) { return a += b; }
    friend ZPoly operator-(ZPoly a, const ZPoly& b) { return a -= b; }
    friend ZPoly operator*(const ZPoly& a, const ZPoly& b);

    ZPoly shifted(long k) const;
    ZPoly subst_q_power(long a) const;  // q -> q^a
    bool operator==(const ZPoly& o) const { return lo == o.lo && c == o.c; }
    bool operator!=(const ZPoly& o) const { return !(*this == o); }

    LaurentPoly to_laurent() const;
    QScalar to_qscalar() const { return QScalar(to_laurent()); }
    std::string str() const { return to_laurent().str(); }
};

// memoized q-combinatorics over ZPoly, base q
const ZPoly& zqint(long n);
const ZPoly& zqfact(long m);
const ZPoly& zqbinom(long n, long d);     // base q
const ZPoly& zqbinom_q2(long n, long d);  // base q^2

}  // namespace iqg
