#include "iqg/qidentities.hpp"

#include <array>
#include <map>
#include <mutex>
#include <sstream>

namespace iqg {

// In the p0 part of the exponent the multiplier is the summation variable b;
// with that reading every identity of the suite holds exactly.
ZPoly eval_G_core(long w, long u, long ell, long p0, long p1, long p2, int fault) {
    ZPoly acc;
    for (long b = 0; b <= u; ++b) {
        for (long c = 0; c + b <= u; ++c) {
            long e = u - b - c;
            for (long t = 0; t <= ell; ++t) {
                const ZPoly& bt = zqbinom(ell, t);
                if (bt.is_zero()) continue;
                const ZPoly& bb = zqbinom(w + t + p0, b);
                if (bb.is_zero()) continue;
                if (((t + w - b) % 2 + 2) % 2 == 0) {
                    long half = (w + t - b) / 2;
                    const ZPoly& bc = zqbinom_q2(half + p1, c);
                    if (bc.is_zero()) continue;
                    const ZPoly& be = zqbinom_q2(half + p2, e);
                    if (be.is_zero()) continue;
                    long exp = -t * (ell + u - 1) - u * (c + e) + 2 * c + b * p0 +
                               2 * c * p1 + 2 * e * p2 + fault;
                    acc += (((bt * bb) * bc) * be).shifted(exp);
                } else {
                    long half = (w + t - b - 1) / 2;
                    const ZPoly& bc = zqbinom_q2(1 + half + p1, c);
                    if (bc.is_zero()) continue;
                    const ZPoly& be = zqbinom_q2(half + p2, e);
                    if (be.is_zero()) continue;
                    long exp = -t * (ell + u - 1) - (u - 1) * (c + e) + b * p0 +
                               2 * c * p1 + 2 * e * p2;
                    acc -= (((bt * bb) * bc) * be).shifted(exp);
                }
            }
        }
    }
    acc = acc.shifted(u * u - w * u + ell * u);
    if (w % 2 != 0) acc = -acc;
    return acc;
}

ZPoly eval_H_core(long u, long p1, long p2) {
    ZPoly acc;
    for (long c = 0; c <= u; ++c) {
        long e = u - c;
        const ZPoly& bc = zqbinom_q2(p1, c);
        if (bc.is_zero()) continue;
        const ZPoly& be = zqbinom_q2(p2, e);
        if (be.is_zero()) continue;
        acc += (bc * be).shifted(2 * c + 2 * c * p1 + 2 * e * p2);
    }
    return acc;
}

ZPoly eval_T_core(long w, long u, long l, long mu, long beta, long alpha,
                  int fault) {
    ZPoly acc;
    long am = alpha * mu;
    for (long b = 0; b <= u; ++b) {
        const ZPoly& bb = zqbinom(alpha * (mu + 2 * beta) + w - l, b);
        if (bb.is_zero()) continue;
        for (long c = 0; c + b <= u; ++c) {
            long e = u - b - c;
            if (((w - b) % 2 + 2) % 2 == 0) {
                long half = (w - b) / 2;
                const ZPoly& bc = zqbinom_q2(u - 1 + half, c);
                if (bc.is_zero()) continue;
                const ZPoly& be = zqbinom_q2(alpha * (mu + beta) - l + half, e);
                if (be.is_zero()) continue;
                long exp = (e - c - w) * (am - l - u) + u * (am - l) +
                           2 * alpha * beta * (b + e) + fault;
                acc += ((bb * bc) * be).shifted(exp);
            } else {
                long half_c = (w - b + 1) / 2;
                long half_e = (w - b - 1) / 2;
                const ZPoly& bc = zqbinom_q2(u - 1 + half_c, c);
                if (bc.is_zero()) continue;
                const ZPoly& be = zqbinom_q2(alpha * (mu + beta) - l + half_e, e);
                if (be.is_zero()) continue;
                long exp = (e - c - w) * (am + 1 - l - u) + u * (am - l) + w +
                           2 * alpha * beta * (b + e);
                acc -= ((bb * bc) * be).shifted(exp);
            }
        }
    }
    return acc;
}

QScalar eval_G(const GParams& p) {
    return eval_G_core(p.w, p.u, p.ell, p.p0, p.p1, p.p2).to_qscalar();
}

QScalar eval_H(long u, long p1, long p2) {
    return eval_H_core(u, p1, p2).to_qscalar();
}

QScalar eval_T(const TParams& p) {
    return eval_T_core(p.w, p.u, p.l, p.mu, p.beta, p.alpha)
        .subst_q_power(p.eps)
        .to_qscalar();
}

namespace {

// pure function of its key, so a process-wide memo is safe
const ZPoly& memo_G(long w, long u, long ell, long p0, long p1, long p2,
                    int fault) {
    thread_local std::map<std::array<long, 7>, ZPoly> memo;
    std::array<long, 7> key{w, u, ell, p0, p1, p2, fault};
    auto it = memo.find(key);
    if (it == memo.end())
        it = memo.emplace(key, eval_G_core(w, u, ell, p0, p1, p2, fault)).first;
    return it->second;
}

const ZPoly& memo_T(long w, long u, long l, long mu, long beta, long alpha,
                    int fault) {
    thread_local std::map<std::array<long, 7>, ZPoly> memo;
    std::array<long, 7> key{w, u, l, mu, beta, alpha, fault};
    auto it = memo.find(key);
    if (it == memo.end())
        it = memo.emplace(key, eval_T_core(w, u, l, mu, beta, alpha, fault)).first;
    return it->second;
}

std::string range_str(const char* name, Range r) {
    std::ostringstream os;
    os << name << "=" << r.lo << ".." << r.hi;
    return os.str();
}

}  // namespace

Report verify_G_suite(const GGrid& g, int fault, int jobs) {
    Stopwatch sw;
    Report rep;
    rep.suite = "qcomb-G";
    {
        std::ostringstream os;
        os << range_str("w", g.w) << " " << range_str("u", g.u) << " "
           << range_str("l", g.ell) << " " << range_str("p", g.p) << " "
           << range_str("k", g.k);
        rep.grid = os.str();
    }

    long nw = g.w.size();
    std::vector<Report> parts(static_cast<size_t>(nw));
    parallel_for(nw, jobs, [&](long wi) {
        long w = g.w.lo + wi;
        Report& part = parts[static_cast<size_t>(wi)];
        Checker ck(part);
        for (long u = g.u.lo; u <= g.u.hi; ++u)
            for (long ell = g.ell.lo; ell <= g.ell.hi; ++ell)
                for (long p0 = g.p.lo; p0 <= g.p.hi; ++p0)
                    for (long p1 = g.p.lo; p1 <= g.p.hi; ++p1)
                        for (long p2 = g.p.lo; p2 <= g.p.hi; ++p2) {
                            std::ostringstream ps;
                            ps << "w=" << w << " u=" << u << " l=" << ell
                               << " p0=" << p0 << " p1=" << p1 << " p2=" << p2;
                            const ZPoly& base = memo_G(w, u, ell, p0, p1, p2, fault);

                            ZPoly lhs = memo_G(w, u, ell + 1, p0, p1, p2, fault);
                            ZPoly rhs = base.shifted(u) -
                                        memo_G(w + 1, u, ell, p0, p1, p2, fault)
                                            .shifted(u - 2 * ell);
                            ck.check(lhs == rhs, "G-ell-step", ps.str(),
                                     [&] { return lhs.str(); },
                                     [&] { return rhs.str(); });

                            for (long k = g.k.lo; k <= g.k.hi; ++k) {
                                ZPoly r2 = memo_G(w + 2 * k, u, ell, p0 - 2 * k,
                                                  p1 - k, p2 - k, fault)
                                               .shifted(4 * k * u);
                                ck.check(base == r2, "G-shift",
                                         ps.str() + " k=" + std::to_string(k),
                                         [&] { return base.str(); },
                                         [&] { return r2.str(); });
                            }

                            ZPoly lo = memo_G(w + 1, u, ell, p0, p1, p2, fault);
                            ZPoly ro = memo_G(w, u, ell, p0 + 1, p2, p1 + 1, fault)
                                           .shifted(-2 * u);
                            ck.check(lo == ro, "G-w-step", ps.str(),
                                     [&] { return lo.str(); },
                                     [&] { return ro.str(); });

                            if (ell > 0)
                                ck.check(base.is_zero(), "G-vanishing", ps.str(),
                                         [&] { return base.str(); },
                                         [&] { return "0"; });

                            if (ell == 0 && p0 == 0) {
                                ZPoly h = eval_H_core(u, p1, p2);
                                ck.check(base == h, "G-H-agreement", ps.str(),
                                         [&] { return base.str(); },
                                         [&] { return h.str(); });
                            }
                        }
    });
    for (auto& part : parts) {
        rep.checked += part.checked;
        for (const auto& [name, count] : part.identity_counts)
            rep.identity_counts[name] += count;
        for (auto& f : part.failures) rep.failures.push_back(std::move(f));
    }
    rep.elapsed_ms = sw.ms();
    return rep;
}

Report verify_T_suite(const TGrid& g, int fault, int jobs) {
    Stopwatch sw;
    Report rep;
    rep.suite = "qcomb-T";
    {
        std::ostringstream os;
        os << range_str("w", g.w) << " " << range_str("u", g.u) << " "
           << range_str("l", g.l) << " " << range_str("mu", g.mu) << " "
           << range_str("beta", g.beta) << " alpha={";
        for (size_t i = 0; i < g.alphas.size(); ++i)
            os << (i ? "," : "") << g.alphas[i];
        os << "}";
        rep.grid = os.str();
    }

    long na = static_cast<long>(g.alphas.size());
    std::vector<Report> parts(static_cast<size_t>(na));
    parallel_for(na, jobs, [&](long ai) {
        long alpha = g.alphas[static_cast<size_t>(ai)];
        Report& part = parts[static_cast<size_t>(ai)];
        Checker ck(part);
        for (long w = g.w.lo; w <= g.w.hi; ++w)
            for (long u = g.u.lo; u <= g.u.hi; ++u)
                for (long l = g.l.lo; l <= g.l.hi; ++l)
                    for (long mu = g.mu.lo; mu <= g.mu.hi; ++mu)
                        for (long beta = g.beta.lo; beta <= g.beta.hi; ++beta) {
                            std::ostringstream ps;
                            ps << "alpha=" << alpha << " w=" << w << " u=" << u
                               << " l=" << l << " mu=" << mu << " beta=" << beta;
                            const ZPoly& tv = memo_T(w, u, l, mu, beta, alpha, fault);

                            // T = (-1)^w q1^{-(alpha*mu-l-2u)w - u^2} G(w,u,0;...)
                            ZPoly gv = memo_G(w, u, 0, alpha * (mu + 2 * beta) - l,
                                              u - 1, alpha * (mu + beta) - l, 0)
                                           .shifted(-(alpha * mu - l - 2 * u) * w -
                                                    u * u);
                            if (w % 2 != 0) gv = -gv;
                            ck.check(tv == gv, "T-G-bridge", ps.str(),
                                     [&] { return tv.str(); },
                                     [&] { return gv.str(); });

                            ZPoly lhs = memo_T(w + 1, u, l, mu, beta, alpha, fault);
                            ZPoly rhs = (-tv).shifted(-(alpha * mu - l - 2 * u));
                            ck.check(lhs == rhs, "T-w-step", ps.str(),
                                     [&] { return lhs.str(); },
                                     [&] { return rhs.str(); });

                            if (l <= alpha * mu &&
                                alpha * mu <= 2 * u + l - 1 - 2 * alpha * beta)
                                ck.check(tv.is_zero(), "T-vanishing", ps.str(),
                                         [&] { return tv.str(); },
                                         [&] { return "0"; });
                        }
    });
    for (auto& part : parts) {
        rep.checked += part.checked;
        for (const auto& [name, count] : part.identity_counts)
            rep.identity_counts[name] += count;
        for (auto& f : part.failures) rep.failures.push_back(std::move(f));
    }
    rep.elapsed_ms = sw.ms();
    return rep;
}

Report verify_appB_suite(const AppBGrid& g, int fault, int jobs) {
    (void)jobs;  // cheap enough to run serially
    Stopwatch sw;
    Report rep;
    rep.suite = "qcomb-appB";
    {
        std::ostringstream os;
        os << range_str("m", g.m) << " " << range_str("a", g.a) << " "
           << range_str("n", g.n) << " e=+-1 " << range_str("qbi_k", g.qbi_k)
           << " " << range_str("qbi_u", g.qbi_u);
        rep.grid = os.str();
    }
    Checker ck(rep);

    // base-q^2 binomial step, both signs
    for (long k = g.qbi_k.lo; k <= g.qbi_k.hi; ++k)
        for (long u = g.qbi_u.lo; u <= g.qbi_u.hi; ++u)
            for (int e : {-1, +1}) {
                ZPoly lhs = zqbinom_q2(k + 1, u);
                ZPoly rhs = zqbinom_q2(k, u).shifted(-2 * e * u + fault) +
                            zqbinom_q2(k, u - 1).shifted(e * (2 * k - 2 * u + 2));
                std::ostringstream ps;
                ps << "k=" << k << " u=" << u << " e=" << e;
                ck.check(lhs == rhs, "q2-binomial-step", ps.str(), [&] { return lhs.str(); },
                         [&] { return rhs.str(); });
            }

    for (long m = g.m.lo; m <= g.m.hi; ++m)
        for (long a = g.a.lo; a <= g.a.hi; ++a)
            for (long n = g.n.lo; n <= g.n.hi; ++n)
                for (int e : {-1, +1})
                    for (long u = 0; 2 * u <= m + 1; ++u)
                        for (long r = 0; r + 2 * u <= m + 1; ++r) {
                            long s = m + 1 - r - 2 * u;
                            long na = n * a;
                            std::ostringstream ps;
                            ps << "m=" << m << " a=" << a << " n=" << n
                               << " e=" << e << " r=" << r << " s=" << s
                               << " u=" << u;
                            if (((m + na) % 2 + 2) % 2 == 0) {
                                long h = (m + na) / 2;
                                ZPoly lhs =
                                    (zqint(r) * zqbinom_q2(h, u))
                                        .shifted(-e * (2 * m + na) + fault) +
                                    (zqint(s) * zqbinom_q2(h - 1, u))
                                        .shifted(-e * (m + na - 1)) +
                                    zqint(s + 1) * zqbinom_q2(h - 1, u - 1);
                                ZPoly rhs =
                                    (zqint(m + 1) * zqbinom_q2(h, u))
                                        .shifted(-e * (m + na + r - 1)) -
                                    (zqint(m + na - 1) * zqbinom_q2(h - 1, u - 1))
                                        .shifted(-e * (2 * m + na + 1 - r - 2 * u));
                                ck.check(lhs == rhs, "balance-even", ps.str(),
                                         [&] { return lhs.str(); },
                                         [&] { return rhs.str(); });
                            } else {
                                long h = (m + na - 1) / 2;
                                ZPoly lhs =
                                    (zqint(r) * zqbinom_q2(h, u))
                                        .shifted(-e * (2 * m + na - 1) + fault) +
                                    (zqint(s) * zqbinom_q2(h, u))
                                        .shifted(-e * (2 * u + m + na - 2)) +
                                    (zqint(r + 1) * zqbinom_q2(h, u - 1))
                                        .shifted(-e * (3 * m + 2 * na - 1)) +
                                    (zqint(s + 1) * zqbinom_q2(h, u - 1))
                                        .shifted(-e * (2 * u - 2));
                                ZPoly rhs =
                                    (zqint(m + 1) * zqbinom_q2(h + 1, u))
                                        .shifted(-e * (m + na + 2 * u + r - 2)) -
                                    (zqint(m + na - 1) * zqbinom_q2(h, u - 1))
                                        .shifted(-e * (2 * m + na - r - 1));
                                ck.check(lhs == rhs, "balance-odd", ps.str(),
                                         [&] { return lhs.str(); },
                                         [&] { return rhs.str(); });
                            }
                        }
    rep.elapsed_ms = sw.ms();
    return rep;
}

}  // namespace iqg
