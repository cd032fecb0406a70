#include "iqg/zpoly.hpp"

#include <map>

namespace iqg {

namespace {
constexpr long long kLimit = (1LL << 62);

long long narrow(__int128 v) {
    if (v >= kLimit || v <= -kLimit)
        throw std::overflow_error("ZPoly: coefficient overflow");
    return static_cast<long long>(v);
}
}  // namespace

void ZPoly::trim() {
    size_t hi = c.size();
    while (hi > 0 && c[hi - 1] == 0) --hi;
    c.resize(hi);
    size_t lz = 0;
    while (lz < c.size() && c[lz] == 0) ++lz;
    if (lz > 0) {
        c.erase(c.begin(), c.begin() + lz);
        lo += static_cast<long>(lz);
    }
    if (c.empty()) lo = 0;
}

ZPoly ZPoly::operator-() const {
    ZPoly r = *this;
    for (auto& x : r.c) x = -x;
    return r;
}

ZPoly& ZPoly::operator+=(const ZPoly& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
        *this = o;
        return *this;
    }
    long nlo = std::min(lo, o.lo);
    long nhi = std::max(high(), o.high());
    std::vector<long long> out(static_cast<size_t>(nhi - nlo + 1), 0);
    for (size_t i = 0; i < c.size(); ++i) out[lo - nlo + i] = c[i];
    for (size_t i = 0; i < o.c.size(); ++i)
        out[o.lo - nlo + i] = narrow(static_cast<__int128>(out[o.lo - nlo + i]) + o.c[i]);
    lo = nlo;
    c = std::move(out);
    trim();
    return *this;
}

ZPoly& ZPoly::operator-=(const ZPoly& o) { return *this += -o; }

ZPoly operator*(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.lo = a.lo + b.lo;
    std::vector<__int128> acc(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        long long av = a.c[i];
        if (av == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            acc[i + j] += static_cast<__int128>(av) * b.c[j];
    }
    r.c.resize(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) r.c[i] = narrow(acc[i]);
    r.trim();
    return r;
}

ZPoly ZPoly::shifted(long k) const {
    ZPoly r = *this;
    if (!r.is_zero()) r.lo += k;
    return r;
}

ZPoly ZPoly::subst_q_power(long a) const {
    ZPoly r;
    if (is_zero()) return r;
    r.lo = lo * a;
    r.c.assign((c.size() - 1) * a + 1, 0);
    for (size_t i = 0; i < c.size(); ++i) r.c[i * a] = c[i];
    return r;
}

LaurentPoly ZPoly::to_laurent() const {
    LaurentPoly p;
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0)
            p += LaurentPoly::monomial(mpq_class(static_cast<long>(c[i])),
                                       lo + static_cast<long>(i));
    return p;
}

namespace {

ZPoly zqint_make(long n) {
    ZPoly p;
    if (n == 0) return p;
    long m = n < 0 ? -n : n;
    p.lo = 1 - m;
    p.c.assign(static_cast<size_t>(2 * m - 1), 0);
    for (long k = 0; k < m; ++k) p.c[2 * k] = (n < 0) ? -1 : 1;
    return p;
}

// exact division by a polynomial with leading coefficient 1
ZPoly zdiv_exact(ZPoly a, const ZPoly& b) {
    if (a.is_zero()) return a;
    ZPoly q;
    q.lo = a.lo - b.lo;
    if (a.c.size() < b.c.size()) throw std::domain_error("zdiv_exact: not divisible");
    q.c.assign(a.c.size() - b.c.size() + 1, 0);
    for (long i = static_cast<long>(a.c.size()) - 1;
         i >= static_cast<long>(b.c.size()) - 1; --i) {
        long long v = a.c[i];
        if (v == 0) continue;
        long off = i - (static_cast<long>(b.c.size()) - 1);
        q.c[off] = v;
        for (size_t j = 0; j < b.c.size(); ++j)
            a.c[off + j] = narrow(static_cast<__int128>(a.c[off + j]) -
                                  static_cast<__int128>(v) * b.c[j]);
    }
    for (auto x : a.c)
        if (x != 0) throw std::domain_error("zdiv_exact: not divisible");
    q.trim();
    return q;
}

}  // namespace

const ZPoly& zqint(long n) {
    thread_local std::map<long, ZPoly> memo;
    auto it = memo.find(n);
    if (it == memo.end()) it = memo.emplace(n, zqint_make(n)).first;
    return it->second;
}

const ZPoly& zqfact(long m) {
    thread_local std::map<long, ZPoly> memo;
    auto it = memo.find(m);
    if (it == memo.end()) {
        ZPoly p(1);
        for (long k = 2; k <= m; ++k) p = p * zqint(k);
        it = memo.emplace(m, std::move(p)).first;
    }
    return it->second;
}

const ZPoly& zqbinom(long n, long d) {
    thread_local std::map<std::pair<long, long>, ZPoly> memo;
    auto key = std::make_pair(n, d);
    auto it = memo.find(key);
    if (it == memo.end()) {
        ZPoly p;
        if (d == 0) p = ZPoly(1);
        else if (d > 0) {
            ZPoly numer(1);
            for (long k = 0; k < d; ++k) numer = numer * zqint(n - k);
            p = zdiv_exact(std::move(numer), zqfact(d));
        }
        it = memo.emplace(key, std::move(p)).first;
    }
    return it->second;
}

const ZPoly& zqbinom_q2(long n, long d) {
    thread_local std::map<std::pair<long, long>, ZPoly> memo;
    auto key = std::make_pair(n, d);
    auto it = memo.find(key);
    if (it == memo.end())
        it = memo.emplace(key, zqbinom(n, d).subst_q_power(2)).first;
    return it->second;
}

}  // namespace iqg
