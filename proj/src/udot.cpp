#include "iqg/udot.hpp"

#include <sstream>

namespace iqg {

DotElement DotElement::idempotent(long eps, long m) {
    DotElement x(eps);
    x.terms_.emplace(DotTerm{0, 0, m}, QScalar(1));
    return x;
}

DotElement DotElement::ef(long eps, long a, long b, long m, QScalar c) {
    DotElement x(eps);
    x.add_term(DotTerm{a, b, m}, std::move(c));
    return x;
}

void DotElement::add_term(DotTerm t, QScalar c) {
    if (c.is_zero()) return;
    auto it = terms_.find(t);
    if (it == terms_.end()) {
        terms_.emplace(t, std::move(c));
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

DotElement DotElement::operator-() const {
    DotElement r = *this;
    for (auto& [t, c] : r.terms_) c = -c;
    return r;
}

DotElement& DotElement::operator+=(const DotElement& o) {
    if (o.eps_ != eps_ && !o.terms_.empty() && !terms_.empty())
        throw std::runtime_error("DotElement: eps mismatch");
    for (const auto& [t, c] : o.terms_) add_term(t, c);
    return *this;
}

DotElement& DotElement::operator-=(const DotElement& o) { return *this += -o; }

DotElement& DotElement::operator*=(const QScalar& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [t, v] : terms_) v *= c;
    return *this;
}

bool DotElement::structurally_equal(const DotElement& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt) {
        if (!(it->first == jt->first)) return false;
        if (it->second != jt->second) return false;
    }
    return true;
}

std::string DotElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [t, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ") *";
        if (t.a > 0) os << " E^(" << t.a << ")";
        if (t.b > 0) os << " F^(" << t.b << ")";
        os << " 1*[" << t.m << "]";
    }
    return os.str();
}

DotElement dot_multiply(const DotElement& x, const DotElement& y) {
    if (x.eps() != y.eps() && !x.terms().empty() && !y.terms().empty())
        throw std::runtime_error("dot_multiply: eps mismatch");
    long eps = x.eps();
    DotElement out(eps);
    for (const auto& [t1, c1] : x.terms()) {
        for (const auto& [t2, c2] : y.terms()) {
            // E^(a) F^(b) 1*[m] . E^(c) F^(d) 1*[m'] needs m = m' + 2c - 2d;
            // the label sitting between F^(b) and E^(c) is then m' - 2d
            if (t1.m != t2.m + 2 * t2.a - 2 * t2.b) continue;
            long mid = t2.m - 2 * t2.b;
            QScalar c12 = c1 * c2;
            long top = std::min(t1.b, t2.a);
            for (long t = 0; t <= top; ++t) {
                // F^(b) E^(c) 1*[mid] expansion term t
                QScalar c = c12 * qbinom(t1.b - t2.a - mid, t, eps);
                if (c.is_zero()) continue;
                long ea = t2.a - t;  // E order before merging with E^(a)
                long fb = t1.b - t;  // F order before merging with F^(d)
                c *= qbinom(t1.a + ea, t1.a, eps);
                c *= qbinom(fb + t2.b, t2.b, eps);
                if (c.is_zero()) continue;
                out.add_term(DotTerm{t1.a + ea, fb + t2.b, t2.m}, std::move(c));
            }
        }
    }
    return out;
}

DotElement dot_lmul_E(const DotElement& x) {
    DotElement out(x.eps());
    for (const auto& [t, c] : x.terms()) {
        QScalar v = c * qint(t.a + 1, x.eps());
        out.add_term(DotTerm{t.a + 1, t.b, t.m}, std::move(v));
    }
    return out;
}

DotElement dot_lmul_F(const DotElement& x) {
    long eps = x.eps();
    DotElement out(eps);
    for (const auto& [t, c] : x.terms()) {
        // F E^(a) 1*[m-2b] = E^(a) F 1*[...] + [1-a-(m-2b)] E^(a-1) 1*[...]
        QScalar v = c * qint(t.b + 1, eps);
        out.add_term(DotTerm{t.a, t.b + 1, t.m}, std::move(v));
        if (t.a >= 1) {
            QScalar w = c * qint(1 - t.a - (t.m - 2 * t.b), eps);
            out.add_term(DotTerm{t.a - 1, t.b, t.m}, std::move(w));
        }
    }
    return out;
}

DotElement dot_lmul_B(const DotElement& x) {
    long eps = x.eps();
    DotElement out = dot_lmul_F(x);
    for (const auto& [t, c] : x.terms()) {
        // the weight entering B from the left is m + 2a - 2b
        long w = t.m + 2 * t.a - 2 * t.b;
        QScalar v = c * qint(t.a + 1, eps);
        v.mul_monomial(1, eps * (-1 - w));
        out.add_term(DotTerm{t.a + 1, t.b, t.m}, std::move(v));
    }
    return out;
}

DotElement dot_idp(long eps, long m, Parity pbar, long label) {
    DotElement x = DotElement::idempotent(eps, label);
    if (m < 0) return DotElement(eps);
    long k = m / 2;
    for (long j = 1; j <= k; ++j) {
        long levels;
        if (pbar == kOdd) levels = 2 * j - 1;
        else levels = (m % 2 != 0) ? 2 * j : 2 * j - 2;
        // (B^2 - [levels]^2) x   (q_i varsigma_i = 1)
        DotElement b2 = dot_lmul_B(dot_lmul_B(x));
        QScalar c = qint(levels, eps) * qint(levels, eps);
        x = b2 - x * c;
    }
    if (m % 2 != 0) x = dot_lmul_B(x);
    QScalar inv(1);
    inv.div_qfact(m, eps);
    x *= inv;
    return x;
}

std::map<long, DotElement> dot_idp(long eps, long m, Parity pbar,
                                   Range label_window) {
    std::map<long, DotElement> out;
    for (long label = label_window.lo; label <= label_window.hi; ++label)
        out.emplace(label, dot_idp(eps, m, pbar, label));
    return out;
}

namespace {

long binom2(long n) { return n * (n - 1) / 2; }  // ordinary binomial (n, 2)

// the four PBW expansion families; fault shifts one exponent slope
DotElement pbw_family(long eps, int family, long m, long lambda, int fault) {
    // family 0: B^{(2m)}_{even}   on 1*[2 lambda]
    // family 1: B^{(2m-1)}_{even} on 1*[2 lambda]
    // family 2: B^{(2m)}_{odd}    on 1*[2 lambda - 1]
    // family 3: B^{(2m+1)}_{odd}  on 1*[2 lambda - 1]
    long order, label;
    switch (family) {
        case 0: order = 2 * m; label = 2 * lambda; break;
        case 1: order = 2 * m - 1; label = 2 * lambda; break;
        case 2: order = 2 * m; label = 2 * lambda - 1; break;
        default: order = 2 * m + 1; label = 2 * lambda - 1; break;
    }
    DotElement out(eps);
    long cmax = (family == 0 || family == 2) ? m : (family == 1 ? m - 1 : m);
    for (long c = 0; c <= cmax; ++c) {
        for (long a = 0; a <= order - 2 * c; ++a) {
            long expo;
            long barg;
            switch (family) {
                case 0:
                    expo = 2 * (a + c) * (m - a - lambda) - 2 * a * c -
                           binom2(2 * c + 1);
                    barg = m - c - a - lambda;
                    break;
                case 1:
                    expo = 2 * (a + c) * (m - a - lambda) - 2 * a * c - a -
                           binom2(2 * c + 1);
                    barg = m - c - a - lambda - 1;
                    break;
                case 2:
                    expo = 2 * (a + c) * (m - a - lambda) - 2 * a * c + a -
                           binom2(2 * c);
                    barg = m - c - a - lambda;
                    break;
                default:
                    expo = 2 * (a + c) * (m - a - lambda) - 2 * a * c + 2 * a -
                           binom2(2 * c);
                    barg = m - c - a - lambda + 1;
                    break;
            }
            QScalar coeff = qbinom(barg, c, 2 * eps);
            if (coeff.is_zero()) continue;
            coeff.mul_monomial(1, eps * expo + fault * a);
            out.add_term(DotTerm{a, order - 2 * c - a, label}, std::move(coeff));
        }
    }
    return out;
}

}  // namespace

Report verify_idp_expansion(const UdotGrid& g, int fault) {
    Stopwatch sw;
    Report rep;
    rep.suite = "udot-idp";
    {
        std::ostringstream os;
        os << "order<=" << g.order_max << " lambda=" << g.lambda.lo << ".."
           << g.lambda.hi << " roundtrip a,b<=" << g.roundtrip_max
           << " eps=" << g.eps;
        rep.grid = os.str();
    }
    Checker ck(rep);
    long eps = g.eps;

    const char* names[4] = {"pbw-even-even", "pbw-even-odd", "pbw-odd-even", "pbw-odd-odd"};
    for (int family = 0; family < 4; ++family) {
        for (long m = 1;; ++m) {
            long order = family == 0 || family == 2 ? 2 * m
                         : family == 1              ? 2 * m - 1
                                                    : 2 * m + 1;
            if (order > g.order_max) break;
            for (long lambda = g.lambda.lo; lambda <= g.lambda.hi; ++lambda) {
                long label = (family <= 1) ? 2 * lambda : 2 * lambda - 1;
                Parity p = (family <= 1) ? kEven : kOdd;
                DotElement lhs = dot_idp(eps, order, p, label);
                DotElement rhs = pbw_family(eps, family, m, lambda, fault);
                std::ostringstream ps;
                ps << "family=" << names[family] << " m=" << m
                   << " lambda=" << lambda;
                ck.check(lhs.structurally_equal(rhs), names[family], ps.str(),
                         [&] { return lhs.str(); }, [&] { return rhs.str(); });
            }
        }
    }

    // commutation-formula consistency: reorder E^(a) F^(b) 1*[m] into
    // FE-order and back; must return the original element
    for (long a = 0; a <= g.roundtrip_max; ++a)
        for (long b = 0; b <= g.roundtrip_max; ++b)
            for (long m = g.roundtrip_m.lo; m <= g.roundtrip_m.hi; ++m) {
                DotElement back(eps);
                long top = std::min(a, b);
                for (long dd = 0; dd <= top; ++dd) {
                    // E^(a) F^(b) 1*[m] = sum_d [a-b+m; d] F^(b-d) E^(a-d) 1*[m]
                    QScalar c = qbinom(a - b + m, dd, eps);
                    if (c.is_zero()) continue;
                    // F^(b-d) E^(a-d) 1*[m] back through the first formula
                    long top2 = std::min(b - dd, a - dd);
                    for (long t = 0; t <= top2; ++t) {
                        QScalar c2 = c * qbinom((b - dd) - (a - dd) - m, t, eps);
                        if (c2.is_zero()) continue;
                        back.add_term(DotTerm{a - dd - t, b - dd - t, m},
                                      std::move(c2));
                    }
                }
                DotElement orig = DotElement::ef(eps, a, b, m);
                std::ostringstream ps;
                ps << "a=" << a << " b=" << b << " m=" << m;
                ck.check(back.structurally_equal(orig), "idemp34-roundtrip",
                         ps.str(), [&] { return back.str(); },
                         [&] { return orig.str(); });
            }

    // divided-power recursion with q_i k_i specialized to 1
    for (int pv : {0, 1})
        for (long r = 0; r <= 6; ++r)
            for (long label = -4; label <= 4; ++label) {
                Parity p{pv};
                DotElement lhs = dot_lmul_B(dot_idp(eps, r, p, label));
                DotElement rhs = dot_idp(eps, r + 1, p, label) * qint(r + 1, eps);
                if (parity_of(r) == p)
                    rhs += dot_idp(eps, r - 1, p, label) * qint(r, eps);
                std::ostringstream ps;
                ps << "r=" << r << " p=" << pv << " label=" << label;
                ck.check(lhs.structurally_equal(rhs), "idp-recursion", ps.str(),
                         [&] { return lhs.str(); }, [&] { return rhs.str(); });
            }

    rep.elapsed_ms = sw.ms();
    return rep;
}

}  // namespace iqg
