// Exact arithmetic in Q(q): Laurent polynomials with rational coefficients
// and the q-combinatorial primitives ([n]_i, [n]_i!, Gaussian binomials)
// used everywhere else.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace iqg {

// Laurent polynomial in q over Q, dense storage with an exponent offset.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(long c);
    LaurentPoly(const mpq_class& c);

    static LaurentPoly q_power(long k);
    static LaurentPoly monomial(const mpq_class& c, long k);

    bool is_zero() const { return coeff_.empty(); }
    bool is_one() const;
    bool is_monomial() const;

    // lowest/highest exponent with nonzero coefficient; poly must be nonzero
    long low() const;
    long high() const;
    mpq_class coeff(long k) const;
    long term_count() const;

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

    void mul_monomial(const mpq_class& c, long k);  // *= c*q^k
    LaurentPoly shifted(long k) const;              // * q^k
    LaurentPoly subst_q_power(long a) const;        // q -> q^a, a >= 1

    bool operator==(const LaurentPoly& o) const;
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }
    // total order (for use as a map key); not a degree order
    int compare(const LaurentPoly& o) const;
    bool operator<(const LaurentPoly& o) const { return compare(o) < 0; }

    // true iff (q^{2m} - 1) * q^k divides this for some shift k; O(terms)
    bool divisible_by_s(long m) const;
    // divide by S_m = q^m - q^{-m}; requires divisibility
    void divide_by_s(long m);

    // exact division; throws std::domain_error if the remainder is nonzero
    static LaurentPoly div_exact(const LaurentPoly& a, const LaurentPoly& b);

    // rendered as a sum of monomials "c*q^k", descending exponents
    std::string str() const;
    static LaurentPoly parse(std::string_view text);

    // fold (k, coeff) over nonzero terms
    template <typename F>
    void for_terms(F&& f) const {
        for (size_t i = 0; i < coeff_.size(); ++i)
            if (coeff_[i] != 0) f(lo_ + static_cast<long>(i), coeff_[i]);
    }

private:
    void trim();
    long lo_ = 0;
    std::vector<mpq_class> coeff_;  // coeff_[i] is the coefficient of q^(lo_+i)
};

// cyclotomic polynomial in q (memoized)
const LaurentPoly& cyclotomic(long d);

// Element of Q(q), held as num / (prod_m S_m^{sden[m]} * prod_d Phi_d^{cden[d]})
// with S_m = q^m - q^{-m} and Phi_d the d-th cyclotomic polynomial.
//
// Every denominator produced by the algebra layers (divided-power factorials,
// the (q_i - q_i^{-1}) commutator scale) is a product of S_m factors, so
// arithmetic never needs a polynomial gcd: multiplication merges exponent
// tables and addition aligns them.  The cyclotomic table only appears when a
// value is parsed from a reduced rendering.  Equality cross-multiplies, which
// is exact regardless of how factors are balanced between num and den;
// normalized() reduces fully via the cyclotomic factorization of the den.
class QScalar {
public:
    QScalar() = default;
    QScalar(long c) : num_(c) {}
    QScalar(const mpq_class& c) : num_(c) {}
    QScalar(LaurentPoly p) : num_(std::move(p)) {}
    // num/den with den an arbitrary Laurent polynomial: den must factor as
    // (monomial) * prod S_m; otherwise throws std::domain_error
    QScalar(LaurentPoly num, const LaurentPoly& den);

    static QScalar q_power(long k) { return QScalar(LaurentPoly::q_power(k)); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;

    QScalar operator-() const;
    QScalar& operator+=(const QScalar& o);
    QScalar& operator-=(const QScalar& o);
    QScalar& operator*=(const QScalar& o);
    friend QScalar operator+(QScalar a, const QScalar& b) { return a += b; }
    friend QScalar operator-(QScalar a, const QScalar& b) { return a -= b; }
    friend QScalar operator*(const QScalar& a, const QScalar& b);

    void mul_monomial(const mpq_class& c, long k);
    // divide by [k]_{q^eps}; k >= 1
    QScalar& div_qint(long k, long eps);
    // divide by [k]_{q^eps}!
    QScalar& div_qfact(long k, long eps);
    // general division; works when the divisor's numerator is a monomial
    // times a product of S_m factors, throws std::domain_error otherwise
    QScalar& operator/=(const QScalar& o);
    friend QScalar operator/(QScalar a, const QScalar& b) { return a /= b; }
    QScalar inverse() const;

    bool operator==(const QScalar& o) const;
    bool operator!=(const QScalar& o) const { return !(*this == o); }

    // fully reduced pair (num, den) with den a polynomial of lowest exponent
    // 0 and leading coefficient 1
    std::pair<LaurentPoly, LaurentPoly> normalized() const;
    bool is_polynomial() const;          // den reduces to 1
    LaurentPoly as_poly() const;         // requires is_polynomial()

    std::string str() const;
    static QScalar parse(std::string_view text);

private:
    friend std::vector<LaurentPoly> clear_denominators(const std::vector<QScalar>&);
    void reduce_cheap();
    LaurentPoly num_;
    std::map<long, int> sden_;  // m -> multiplicity of S_m = q^m - q^{-m}
    std::map<long, int> cden_;  // d -> multiplicity of Phi_d
    // monic, shift-free factors that are not products of cyclotomics; only
    // user-supplied divisors land here, never the algebra layers
    std::map<LaurentPoly, int> gden_;
};

bool canonical_equal(const QScalar& a, const QScalar& b);

// multiply the family by its common denominator, returning the numerators;
// a nonzero uniform scale never affects zero-ness or linear relations
std::vector<LaurentPoly> clear_denominators(const std::vector<QScalar>& xs);

// q-combinatorics in base q_i = q^eps.  All results are Laurent polynomials.
LaurentPoly qint_poly(long n, long eps = 1);
LaurentPoly qfact_poly(long m, long eps = 1);
LaurentPoly qbinom_poly(long n, long d, long eps = 1);  // zero for d < 0

QScalar qint(long n, long eps = 1);
QScalar qfact(long m, long eps = 1);
QScalar qbinom(long n, long d, long eps = 1);
QScalar inv_qfact(long m, long eps = 1);  // 1 / [m]_{q^eps}!

struct Parity {
    int v = 0;  // 0 = even, 1 = odd
    friend Parity operator+(Parity a, Parity b) { return {(a.v + b.v) & 1}; }
    friend bool operator==(Parity a, Parity b) { return a.v == b.v; }
    friend bool operator!=(Parity a, Parity b) { return a.v != b.v; }
};
inline Parity parity_of(long n) { return {static_cast<int>(((n % 2) + 2) % 2)}; }
inline const Parity kEven{0}, kOdd{1};
const char* to_string(Parity p);

struct ScalarParseError : std::runtime_error {
    size_t pos;
    ScalarParseError(size_t p, const std::string& what)
        : std::runtime_error(what), pos(p) {}
};

}  // namespace iqg
