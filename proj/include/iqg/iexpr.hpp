// The quasi-split universal i-quantum group layer: formal elements in the
// generators B_i and the central k_i, the parity-dependent divided powers,
// the y-tilde families, the anti-involution, parameter specialization, braid
// candidate maps, and the verification suites for the main theorems.
//
// IExpr is the free normal form (B-word, k-exponent vector); semantic
// equality in the algebra is delegated to dd_is_zero after embedding
// B_i -> F_i + E_{tau i} Ktp_i, k_i -> Kt_i Ktp_{tau i}.
#pragma once

#include <map>
#include <optional>

#include "iqg/drinfeld.hpp"

namespace iqg {

struct IKey {
    Word b;               // word in the B generators
    std::vector<int> k;   // exponents of the k_i (negative only in braid images)
    bool operator<(const IKey& o) const {
        if (b != o.b) return b < o.b;
        return k < o.k;
    }
    bool operator==(const IKey& o) const { return b == o.b && k == o.k; }
};

class IExpr {
public:
    IExpr() = default;
    explicit IExpr(DatumPtr datum) : datum_(std::move(datum)) {}
    static IExpr one(DatumPtr d);
    static IExpr gen_B(DatumPtr d, int i);
    static IExpr gen_k(DatumPtr d, int i, int exp = 1);

    const DatumPtr& datum() const { return datum_; }
    const std::map<IKey, QScalar>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    void add_term(IKey key, QScalar c);
    bool has_negative_k() const;

    IExpr operator-() const;
    IExpr& operator+=(const IExpr& o);
    IExpr& operator-=(const IExpr& o);
    IExpr& operator*=(const QScalar& c);
    friend IExpr operator+(IExpr a, const IExpr& b) { return a += b; }
    friend IExpr operator-(IExpr a, const IExpr& b) { return a -= b; }
    friend IExpr operator*(IExpr a, const QScalar& c) { return a *= c; }
    friend IExpr operator*(const IExpr& a, const IExpr& b);

    bool structurally_equal(const IExpr& o) const;
    std::string str() const;

private:
    DatumPtr datum_;
    std::map<IKey, QScalar> terms_;
};

DDElement embed(const IExpr& x);

// parity-dependent divided power of B_i for split i; the plain divided power
// B_i^m/[m]! for swapped i (parity ignored); zero for m < 0
IExpr idivided_power(DatumPtr d, int i, long m, Parity pbar);

struct YParams {
    int i = 0, j = 1;
    long n = 0;
    long m = 0;
    Parity pbar{0}, tbar{0};
    int e = +1;
};

IExpr ytilde(DatumPtr d, const YParams& p, bool primed = false);

// anti-involution: reverses words, B_j -> B_{tau j}, fixes k_j and scalars
IExpr sigma_involution(const IExpr& x);

// basis change between {B_{j,t}^{(n-2t)} k^t} and {B_j^{n-2t} k^t} (split j)
std::map<long, QScalar> idp_to_powers(DatumPtr d, int j, long n, Parity tbar);
std::map<long, QScalar> powers_to_idp(DatumPtr d, int j, long n, Parity tbar);

enum class BraidKind { prime, double_prime };
struct BraidGen {
    bool is_k = false;  // false: B_j, true: k_j
    int node = 0;
};
// candidate braid images on generators; split i only.  For -a_ij >= 2 the
// y-tilde images depend on the parity conventions; this fixes pbar = tbar = 0.
IExpr braid_image(DatumPtr d, int i, int e, BraidKind kind, BraidGen g);

// substitute k_i -> varsigma_i; requires varsigma_i = varsigma_{tau i}
// whenever a_{i,tau i} = 0
IExpr specialize_parameters(const IExpr& x, const std::map<int, QScalar>& varsigma);

// zero test for the image of a DD element under the central-reduction map
// onto the single-Cartan quantum group with parameters varsigma
bool dd_pi_is_zero(const DDElement& x, const std::map<int, QScalar>& varsigma);

struct SerreMinimalGrid {
    long n_max = 3;
    long t_max = 1;         // raised-degree families
    bool with_uis2 = true;  // E^mu Ktp^{mu+2beta} F^nu middle (split j only)
    long uis2_n_max = -1;   // cap for the mixed-middle family; -1 follows n_max
    std::vector<int> parities{0, 1};
};
Report verify_serre_minimal(DatumPtr d, int i, int j, const SerreMinimalGrid& g,
                            int fault = 0);

struct RecursionGrid {
    long n_max = 2;
    Range m{0, -1};  // empty: use [0, 1-n*a+2] per n
    std::vector<int> parities{0, 1};
    std::vector<int> es{-1, +1};
};
Report verify_recursion(DatumPtr d, int i, int j, const RecursionGrid& g,
                        int fault = 0);

struct VanishingGrid {
    long n_max = 2;
    long m_beyond = 3;  // assert zero for m in [1-na, 1-na+m_beyond]
    std::vector<int> parities{0, 1};
    std::vector<int> es{-1, +1};
};
Report verify_vanishing(DatumPtr d, int i, int j, const VanishingGrid& g,
                        int fault = 0);

struct SupportGrid {
    long b2r_r_max = 5;
    long divided_r_max = 6;
    long szz_m_max = 4;     // m >= 1 of the right parity per case
    long hos_n_max = 2;
    long span_n_max = 6;
};
Report verify_support_lemmas(DatumPtr d, int i, int j, const SupportGrid& g,
                             int fault = 0);

struct BraidGrid {
    bool check_relations = true;
    bool check_inverse = true;
};
// report-only: never treated as an assertion failure by the harness
Report check_braid_experimental(DatumPtr d, int i, int e, const BraidGrid& g);

}  // namespace iqg
