// Rank-1 modified-form calculus: elements E^(a) F^(b) 1*[m] of the
// idempotented quantum sl2 at a single node, used as an independent route to
// the PBW expansions of the parity divided powers.  The parameter is fixed
// so that q_i * varsigma_i = 1.
#pragma once

#include <map>

#include "iqg/qscalar.hpp"
#include "iqg/report.hpp"

namespace iqg {

struct DotTerm {
    long a = 0;  // E divided-power order
    long b = 0;  // F divided-power order
    long m = 0;  // idempotent label
    bool operator<(const DotTerm& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return m < o.m;
    }
    bool operator==(const DotTerm& o) const {
        return a == o.a && b == o.b && m == o.m;
    }
};

class DotElement {
public:
    DotElement() = default;
    explicit DotElement(long eps) : eps_(eps) {}
    static DotElement idempotent(long eps, long m);
    static DotElement ef(long eps, long a, long b, long m, QScalar c = QScalar(1));

    long eps() const { return eps_; }
    const std::map<DotTerm, QScalar>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    void add_term(DotTerm t, QScalar c);

    DotElement operator-() const;
    DotElement& operator+=(const DotElement& o);
    DotElement& operator-=(const DotElement& o);
    DotElement& operator*=(const QScalar& c);
    friend DotElement operator+(DotElement a, const DotElement& b) { return a += b; }
    friend DotElement operator-(DotElement a, const DotElement& b) { return a -= b; }
    friend DotElement operator*(DotElement a, const QScalar& c) { return a *= c; }

    bool structurally_equal(const DotElement& o) const;
    std::string str() const;

private:
    long eps_ = 1;
    std::map<DotTerm, QScalar> terms_;
};

DotElement dot_multiply(const DotElement& x, const DotElement& y);

// left multiplication by the generators and by B = F + q_i^{-1-<wt>} E
DotElement dot_lmul_E(const DotElement& x);
DotElement dot_lmul_F(const DotElement& x);
DotElement dot_lmul_B(const DotElement& x);

// B^{(m)}_{pbar} applied to the idempotent with the given label
DotElement dot_idp(long eps, long m, Parity pbar, long label);
// the same across a window of labels
std::map<long, DotElement> dot_idp(long eps, long m, Parity pbar,
                                   Range label_window);

struct UdotGrid {
    long order_max = 4;    // divided-power order for the PBW families
    Range lambda{-3, 3};   // idempotent window parameter
    long roundtrip_max = 4;  // a, b bound for the commutation round-trip
    Range roundtrip_m{-6, 6};
    long eps = 1;
};
Report verify_idp_expansion(const UdotGrid& g, int fault = 0);

}  // namespace iqg
