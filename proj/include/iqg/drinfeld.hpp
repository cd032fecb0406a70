// The Drinfeld double: triangular normal form (E-word, Cartan exponents,
// F-word), divided powers, the r_i derivations, a sound-and-complete zero
// oracle for the halves, and the classical Serre-Lusztig layer.
//
// Words in the halves are never Serre-reduced; being zero in the quotient is
// a semantic query answered by iterated r_i derivations (an element of
// positive degree vanishes iff all its derivatives do).
#pragma once

#include <map>
#include <vector>

#include "iqg/cartan.hpp"
#include "iqg/qscalar.hpp"
#include "iqg/report.hpp"

namespace iqg {

using Word = std::vector<int>;
using WeightVec = std::vector<int>;

WeightVec word_weight(const Word& w, int rank);

struct TriMono {
    Word e, f;
    std::vector<int> ke, kf;  // exponents of Kt_i and Ktp_i (may be negative)
    bool operator<(const TriMono& o) const;
    bool operator==(const TriMono& o) const;
};

class DDElement {
public:
    DDElement() = default;
    explicit DDElement(DatumPtr datum) : datum_(std::move(datum)) {}
    static DDElement one(DatumPtr d);
    static DDElement gen_E(DatumPtr d, int i);
    static DDElement gen_F(DatumPtr d, int i);
    static DDElement gen_Kt(DatumPtr d, int i, int exp = 1);
    static DDElement gen_Ktp(DatumPtr d, int i, int exp = 1);

    const DatumPtr& datum() const { return datum_; }
    const std::map<TriMono, QScalar>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    void add_term(TriMono m, QScalar c);

    DDElement operator-() const;
    DDElement& operator+=(const DDElement& o);
    DDElement& operator-=(const DDElement& o);
    DDElement& operator*=(const QScalar& c);
    friend DDElement operator+(DDElement a, const DDElement& b) { return a += b; }
    friend DDElement operator-(DDElement a, const DDElement& b) { return a -= b; }
    friend DDElement operator*(DDElement a, const QScalar& c) { return a *= c; }
    friend DDElement operator*(const DDElement& a, const DDElement& b);

    bool structurally_equal(const DDElement& o) const;
    std::string str() const;

private:
    DatumPtr datum_;
    std::map<TriMono, QScalar> terms_;
};

enum class Side { E, F };

// word i^n with coefficient 1/[n]_i!; n < 0 gives zero
DDElement divided_power(DatumPtr d, int i, long n, Side side);
DDElement half_word(DatumPtr d, Word w, Side side, QScalar c = QScalar(1));

// linear combination of same-side words (side only affects interpretation)
using HalfComb = std::map<Word, QScalar>;

HalfComb r_derivative(const CartanDatum& d, int i, const HalfComb& x);
bool half_is_zero(const CartanDatum& d, const HalfComb& x);
bool dd_is_zero(const DDElement& x);

// extract the pure-E or pure-F part of an element that has no other part
HalfComb dd_to_half(const DDElement& x, Side side);

// f^{+/-}_{i,j;n,m,e}: sum over r+s=m of (-1)^r q_i^{er(1-n a_ij-m)}
// X_i^{(r)} X_j^{(n)} X_i^{(s)}; fault != 0 applies the documented
// single-exponent mutation (slope of the q-power in r) for self-tests
DDElement f_classical(DatumPtr d, int i, int j, long n, long m, int e, Side side,
                      int fault = 0);

struct ClassicalGrid {
    std::vector<long> ns{1, 2, 3};
    long m_extra = 2;  // vanishing checked for m in [1-na, 1-na+m_extra]
    long t_max = 2;    // non-standard family checked for t in [0, t_max]
};

Report verify_classical_suite(DatumPtr d, int i, int j, const ClassicalGrid& g,
                              int fault = 0);

// brute-force positive-root enumeration (finite type) and the Kostant
// partition count of a weight; used by the oracle regression checks
std::vector<WeightVec> positive_roots(const CartanDatum& d, int limit = 512);
long kostant_count(const CartanDatum& d, const WeightVec& mu);
// rank of the full iterated-derivative functional matrix on a weight
long iterated_r_rank(const CartanDatum& d, const WeightVec& mu);
std::vector<Word> words_of_weight(const WeightVec& mu);

}  // namespace iqg
