#include "iqg/qscalar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace iqg {

// ---------------------------------------------------------------- LaurentPoly

LaurentPoly::LaurentPoly(long c) {
    if (c != 0) coeff_.assign(1, mpq_class(c));
}

LaurentPoly::LaurentPoly(const mpq_class& c) {
    if (c != 0) coeff_.assign(1, c);
}

LaurentPoly LaurentPoly::q_power(long k) {
    LaurentPoly p;
    p.lo_ = k;
    p.coeff_.assign(1, mpq_class(1));
    return p;
}

LaurentPoly LaurentPoly::monomial(const mpq_class& c, long k) {
    LaurentPoly p;
    if (c != 0) {
        p.lo_ = k;
        p.coeff_.assign(1, c);
    }
    return p;
}

bool LaurentPoly::is_one() const {
    return coeff_.size() == 1 && lo_ == 0 && coeff_[0] == 1;
}

bool LaurentPoly::is_monomial() const { return coeff_.size() == 1; }

long LaurentPoly::low() const { return lo_; }
long LaurentPoly::high() const { return lo_ + static_cast<long>(coeff_.size()) - 1; }

mpq_class LaurentPoly::coeff(long k) const {
    long i = k - lo_;
    if (i < 0 || i >= static_cast<long>(coeff_.size())) return 0;
    return coeff_[i];
}

long LaurentPoly::term_count() const {
    long n = 0;
    for (const auto& c : coeff_)
        if (c != 0) ++n;
    return n;
}

void LaurentPoly::trim() {
    size_t hi = coeff_.size();
    while (hi > 0 && coeff_[hi - 1] == 0) --hi;
    coeff_.resize(hi);
    size_t lo = 0;
    while (lo < coeff_.size() && coeff_[lo] == 0) ++lo;
    if (lo > 0) {
        coeff_.erase(coeff_.begin(), coeff_.begin() + lo);
        lo_ += static_cast<long>(lo);
    }
    if (coeff_.empty()) lo_ = 0;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& c : r.coeff_) c = -c;
    return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
        *this = o;
        return *this;
    }
    long nlo = std::min(lo_, o.lo_);
    long nhi = std::max(high(), o.high());
    std::vector<mpq_class> out(static_cast<size_t>(nhi - nlo + 1));
    for (size_t i = 0; i < coeff_.size(); ++i) out[lo_ - nlo + i] = coeff_[i];
    for (size_t i = 0; i < o.coeff_.size(); ++i) out[o.lo_ - nlo + i] += o.coeff_[i];
    lo_ = nlo;
    coeff_ = std::move(out);
    trim();
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.lo_ = a.lo_ + b.lo_;
    r.coeff_.assign(a.coeff_.size() + b.coeff_.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.coeff_.size(); ++i) {
        if (a.coeff_[i] == 0) continue;
        for (size_t j = 0; j < b.coeff_.size(); ++j) {
            if (b.coeff_[j] == 0) continue;
            r.coeff_[i + j] += a.coeff_[i] * b.coeff_[j];
        }
    }
    r.trim();
    return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
    *this = *this * o;
    return *this;
}

void LaurentPoly::mul_monomial(const mpq_class& c, long k) {
    if (c == 0) {
        coeff_.clear();
        lo_ = 0;
        return;
    }
    lo_ += k;
    if (c != 1)
        for (auto& x : coeff_) x *= c;
}

LaurentPoly LaurentPoly::shifted(long k) const {
    LaurentPoly r = *this;
    if (!r.is_zero()) r.lo_ += k;
    return r;
}

LaurentPoly LaurentPoly::subst_q_power(long a) const {
    LaurentPoly r;
    if (is_zero()) return r;
    r.lo_ = lo_ * a;
    r.coeff_.assign(static_cast<size_t>((coeff_.size() - 1) * a + 1), mpq_class(0));
    for (size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i * a] = coeff_[i];
    return r;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
    return lo_ == o.lo_ && coeff_ == o.coeff_;
}

int LaurentPoly::compare(const LaurentPoly& o) const {
    if (lo_ != o.lo_) return lo_ < o.lo_ ? -1 : 1;
    if (coeff_.size() != o.coeff_.size())
        return coeff_.size() < o.coeff_.size() ? -1 : 1;
    for (size_t i = 0; i < coeff_.size(); ++i) {
        int c = cmp(coeff_[i], o.coeff_[i]);
        if (c != 0) return c;
    }
    return 0;
}

bool LaurentPoly::divisible_by_s(long m) const {
    if (is_zero()) return true;
    // divisibility by q^{2m}-1 up to a shift: residues of exponents mod 2m
    // must cancel
    long mod = 2 * m;
    std::vector<mpq_class> fold(static_cast<size_t>(mod));
    for (size_t i = 0; i < coeff_.size(); ++i) {
        long e = lo_ + static_cast<long>(i);
        long r = ((e % mod) + mod) % mod;
        fold[static_cast<size_t>(r)] += coeff_[i];
    }
    for (const auto& c : fold)
        if (c != 0) return false;
    return true;
}

void LaurentPoly::divide_by_s(long m) {
    if (is_zero()) return;
    // this / (q^m - q^{-m}) = (this * q^m) / (q^{2m} - 1)
    long mod = 2 * m;
    lo_ += m;
    // synthetic division by q^mod - 1 from the top; remainder must vanish
    std::vector<mpq_class> out(coeff_.size() > static_cast<size_t>(mod)
                                   ? coeff_.size() - mod
                                   : 0);
    for (long i = static_cast<long>(coeff_.size()) - 1; i >= mod; --i) {
        mpq_class v = coeff_[i];
        if (v == 0) continue;
        out[i - mod] = v;
        coeff_[i] = 0;
        coeff_[i - mod] += v;
    }
    for (long i = 0; i < mod && i < static_cast<long>(coeff_.size()); ++i)
        if (coeff_[i] != 0) throw std::domain_error("divide_by_s: not divisible");
    coeff_ = std::move(out);
    trim();
}

LaurentPoly LaurentPoly::div_exact(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw std::domain_error("div_exact: zero divisor");
    if (a.is_zero()) return LaurentPoly();
    LaurentPoly r = a;
    LaurentPoly q;
    q.lo_ = a.lo_ - b.lo_;
    q.coeff_.assign(a.coeff_.size() >= b.coeff_.size()
                        ? a.coeff_.size() - b.coeff_.size() + 1
                        : 0,
                    mpq_class(0));
    if (q.coeff_.empty()) throw std::domain_error("div_exact: not divisible");
    const mpq_class& lead = b.coeff_.back();
    for (long i = static_cast<long>(r.coeff_.size()) - 1;
         i >= static_cast<long>(b.coeff_.size()) - 1; --i) {
        if (r.coeff_[i] == 0) continue;
        mpq_class f = r.coeff_[i] / lead;
        long off = i - (static_cast<long>(b.coeff_.size()) - 1);
        q.coeff_[off] = f;
        for (size_t j = 0; j < b.coeff_.size(); ++j)
            r.coeff_[off + j] -= f * b.coeff_[j];
    }
    for (const auto& c : r.coeff_)
        if (c != 0) throw std::domain_error("div_exact: not divisible");
    q.trim();
    return q;
}

static void render_coeff(std::ostringstream& os, const mpq_class& c, long k,
                         bool first) {
    mpq_class a = c;
    if (first) {
        if (a < 0) {
            os << "-";
            a = -a;
        }
    } else {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
    }
    bool unit = (a == 1);
    if (!unit || k == 0) os << a.get_str();
    if (k != 0) {
        if (!unit) os << "*";
        os << "q";
        if (k != 1) os << "^" << k;
    }
}

std::string LaurentPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (long i = static_cast<long>(coeff_.size()) - 1; i >= 0; --i) {
        if (coeff_[i] == 0) continue;
        render_coeff(os, coeff_[i], lo_ + i, first);
        first = false;
    }
    return os.str();
}

namespace {

struct PolyParser {
    std::string_view s;
    size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw ScalarParseError(i, what + " at offset " + std::to_string(i));
    }

    long parse_long() {
        skip_ws();
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = (s[i++] == '-');
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            fail("expected integer");
        long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    }

    mpz_class parse_mpz() {
        skip_ws();
        size_t start = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            fail("expected integer");
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        return mpz_class(std::string(s.substr(start, i - start)));
    }

    // term := [rational][*][q[^int]]
    LaurentPoly parse_term() {
        skip_ws();
        mpq_class c(1);
        bool have_num = false;
        if (peek() != 'q') {
            mpz_class n = parse_mpz();
            mpz_class d(1);
            if (eat('/')) d = parse_mpz();
            c = mpq_class(n, d);
            c.canonicalize();
            have_num = true;
        }
        long k = 0;
        skip_ws();
        bool have_q = false;
        if (have_num && eat('*')) {
            if (peek() != 'q') fail("expected q");
        }
        if (peek() == 'q') {
            ++i;
            have_q = true;
            if (eat('^')) k = parse_long();
            else k = 1;
        }
        if (!have_num && !have_q) fail("expected term");
        return LaurentPoly::monomial(c, k);
    }

    LaurentPoly parse_poly() {
        LaurentPoly p;
        bool neg = false;
        skip_ws();
        if (eat('-')) neg = true;
        else eat('+');
        LaurentPoly t = parse_term();
        p += neg ? -t : t;
        while (true) {
            skip_ws();
            if (i >= s.size()) break;
            if (eat('+')) neg = false;
            else if (eat('-')) neg = true;
            else break;
            t = parse_term();
            p += neg ? -t : t;
        }
        return p;
    }
};

}  // namespace

LaurentPoly LaurentPoly::parse(std::string_view text) {
    PolyParser p{text};
    p.skip_ws();
    if (p.i >= text.size()) throw ScalarParseError(0, "empty polynomial");
    if (text.substr(p.i) == "0") return LaurentPoly();
    LaurentPoly r = p.parse_poly();
    p.skip_ws();
    if (p.i != text.size())
        throw ScalarParseError(p.i, "trailing input in polynomial");
    return r;
}

// ------------------------------------------------------------------- QScalar

namespace {
LaurentPoly poly_gcd(const LaurentPoly& a0, const LaurentPoly& b0) {
    if (a0.is_zero()) return b0;
    if (b0.is_zero()) return a0;
    LaurentPoly a = a0.shifted(-a0.low());
    LaurentPoly b = b0.shifted(-b0.low());
    auto make_monic = [](LaurentPoly& p) {
        if (p.is_zero()) return;
        mpq_class lead = p.coeff(p.high());
        p.mul_monomial(1 / lead, 0);
    };
    while (!b.is_zero()) {
        // a mod b by long division
        LaurentPoly r = a;
        while (!r.is_zero() && r.high() - r.low() >= b.high() - b.low()) {
            mpq_class f = r.coeff(r.high()) / b.coeff(b.high());
            r -= b.shifted(r.high() - b.high()) * LaurentPoly(f);
        }
        a = std::move(b);
        b = r.is_zero() ? LaurentPoly() : r.shifted(-r.low());
        make_monic(b);
    }
    make_monic(a);
    return a;
}
}  // namespace

const LaurentPoly& cyclotomic(long d) {
    thread_local std::map<long, LaurentPoly> memo;
    auto it = memo.find(d);
    if (it != memo.end()) return it->second;
    LaurentPoly p;
    if (d == 1) {
        p = LaurentPoly::q_power(1) - LaurentPoly(1);
    } else {
        p = LaurentPoly::q_power(d) - LaurentPoly(1);
        for (long e = 1; e < d; ++e)
            if (d % e == 0) p = LaurentPoly::div_exact(p, cyclotomic(e));
    }
    return memo.emplace(d, std::move(p)).first->second;
}

namespace {

// factor a Laurent polynomial as monomial * prod Phi_d; throws if impossible
struct CycFactors {
    mpq_class coeff;
    long shift = 0;
    std::map<long, int> phi;
};

CycFactors factor_cyclotomic(const LaurentPoly& p0, LaurentPoly* rest = nullptr) {
    if (p0.is_zero()) throw std::domain_error("factor_cyclotomic: zero");
    CycFactors f;
    LaurentPoly p = p0.shifted(-p0.low());
    f.shift = p0.low();
    long span = p.high();
    for (long d = 1; d <= 3 * span + 8 && !p.is_monomial(); ++d) {
        const LaurentPoly& phi = cyclotomic(d);
        if (phi.high() > p.high() - p.low()) continue;
        while (true) {
            try {
                LaurentPoly quo = LaurentPoly::div_exact(p, phi);
                p = std::move(quo);
                f.phi[d] += 1;
            } catch (const std::domain_error&) {
                break;
            }
            if (p.is_monomial()) break;
        }
    }
    if (!p.is_monomial()) {
        if (rest == nullptr)
            throw std::domain_error(
                "denominator does not factor into q-integer factors");
        // split off a monic, shift-free remainder factor
        f.shift += p.low();
        p = p.shifted(-p.low());
        f.coeff = p.coeff(p.high());
        mpq_class inv_lead = 1 / f.coeff;
        p.mul_monomial(inv_lead, 0);
        *rest = std::move(p);
        return f;
    }
    f.coeff = p.coeff(p.low());
    f.shift += p.low();
    return f;
}

}  // namespace

QScalar::QScalar(LaurentPoly num, const LaurentPoly& den) : num_(std::move(num)) {
    if (den.is_zero()) throw std::domain_error("QScalar: zero denominator");
    if (den.is_monomial()) {
        num_.mul_monomial(1 / den.coeff(den.low()), -den.low());
        return;
    }
    LaurentPoly rest;
    CycFactors f = factor_cyclotomic(den, &rest);
    num_.mul_monomial(1 / f.coeff, -f.shift);
    cden_ = std::move(f.phi);
    if (!rest.is_zero() && !rest.is_one()) gden_[std::move(rest)] += 1;
    reduce_cheap();
}

bool QScalar::is_one() const {
    if (sden_.empty() && cden_.empty() && gden_.empty()) return num_.is_one();
    auto [n, d] = normalized();
    return n.is_one() && d.is_one();
}

QScalar QScalar::operator-() const {
    QScalar r = *this;
    r.num_ = -r.num_;
    return r;
}

void QScalar::reduce_cheap() {
    if (num_.is_zero()) {
        sden_.clear();
        cden_.clear();
        gden_.clear();
        return;
    }
    for (auto it = sden_.begin(); it != sden_.end();) {
        bool erased = false;
        while (it->second > 0 && num_.divisible_by_s(it->first)) {
            num_.divide_by_s(it->first);
            if (--it->second == 0) {
                it = sden_.erase(it);
                erased = true;
                break;
            }
        }
        if (!erased) ++it;
    }
    for (auto it = cden_.begin(); it != cden_.end();) {
        bool erased = false;
        while (it->second > 0) {
            try {
                LaurentPoly quo = LaurentPoly::div_exact(num_, cyclotomic(it->first));
                num_ = std::move(quo);
            } catch (const std::domain_error&) {
                break;
            }
            if (--it->second == 0) {
                it = cden_.erase(it);
                erased = true;
                break;
            }
        }
        if (!erased) ++it;
    }
    for (auto it = gden_.begin(); it != gden_.end();) {
        bool erased = false;
        while (it->second > 0) {
            try {
                LaurentPoly quo = LaurentPoly::div_exact(num_, it->first);
                num_ = std::move(quo);
            } catch (const std::domain_error&) {
                break;
            }
            if (--it->second == 0) {
                it = gden_.erase(it);
                erased = true;
                break;
            }
        }
        if (!erased) ++it;
    }
}

namespace {
// multiply p by the factors `want - have` of the given tables
void top_up(LaurentPoly& p, const std::map<long, int>& want_s,
            const std::map<long, int>& have_s, const std::map<long, int>& want_c,
            const std::map<long, int>& have_c,
            const std::map<LaurentPoly, int>& want_g,
            const std::map<LaurentPoly, int>& have_g) {
    for (const auto& [m, e] : want_s) {
        auto it = have_s.find(m);
        int have = it == have_s.end() ? 0 : it->second;
        if (e > have) {
            LaurentPoly f = LaurentPoly::q_power(m) - LaurentPoly::q_power(-m);
            for (int t = 0; t < e - have; ++t) p *= f;
        }
    }
    for (const auto& [d, e] : want_c) {
        auto it = have_c.find(d);
        int have = it == have_c.end() ? 0 : it->second;
        for (int t = 0; t < e - have; ++t) p *= cyclotomic(d);
    }
    for (const auto& [g, e] : want_g) {
        auto it = have_g.find(g);
        int have = it == have_g.end() ? 0 : it->second;
        for (int t = 0; t < e - have; ++t) p *= g;
    }
}

template <typename K>
void merge_max(std::map<K, int>& into, const std::map<K, int>& other) {
    for (const auto& [k, e] : other) {
        int& v = into[k];
        v = std::max(v, e);
    }
}
}  // namespace

QScalar& QScalar::operator+=(const QScalar& o) {
    if (o.num_.is_zero()) return *this;
    if (num_.is_zero()) {
        *this = o;
        return *this;
    }
    if (sden_ == o.sden_ && cden_ == o.cden_ && gden_ == o.gden_) {
        num_ += o.num_;
        reduce_cheap();
        return *this;
    }
    std::map<long, int> cs = sden_, cc = cden_;
    std::map<LaurentPoly, int> cg = gden_;
    merge_max(cs, o.sden_);
    merge_max(cc, o.cden_);
    merge_max(cg, o.gden_);
    LaurentPoly a = num_, b = o.num_;
    top_up(a, cs, sden_, cc, cden_, cg, gden_);
    top_up(b, cs, o.sden_, cc, o.cden_, cg, o.gden_);
    num_ = a + b;
    sden_ = std::move(cs);
    cden_ = std::move(cc);
    gden_ = std::move(cg);
    reduce_cheap();
    return *this;
}

QScalar& QScalar::operator-=(const QScalar& o) { return *this += -o; }

QScalar& QScalar::operator*=(const QScalar& o) {
    if (num_.is_zero()) return *this;
    if (o.num_.is_zero()) {
        *this = QScalar();
        return *this;
    }
    num_ *= o.num_;
    for (const auto& [m, e] : o.sden_) sden_[m] += e;
    for (const auto& [d, e] : o.cden_) cden_[d] += e;
    for (const auto& [g, e] : o.gden_) gden_[g] += e;
    reduce_cheap();
    return *this;
}

QScalar operator*(const QScalar& a, const QScalar& b) {
    QScalar r = a;
    r *= b;
    return r;
}

void QScalar::mul_monomial(const mpq_class& c, long k) {
    if (c == 0) {
        *this = QScalar();
        return;
    }
    num_.mul_monomial(c, k);
}

QScalar& QScalar::div_qint(long k, long eps) {
    if (k < 1 || eps < 1) throw std::domain_error("div_qint: bad arguments");
    // [k]_{q^eps} = S_{k*eps} / S_eps
    if (k > 1) {
        num_ *= LaurentPoly::q_power(eps) - LaurentPoly::q_power(-eps);
        sden_[k * eps] += 1;
        reduce_cheap();
    }
    return *this;
}

QScalar& QScalar::div_qfact(long k, long eps) {
    for (long j = 2; j <= k; ++j) div_qint(j, eps);
    return *this;
}

QScalar QScalar::inverse() const {
    if (num_.is_zero()) throw std::domain_error("inverse of zero");
    QScalar r;
    LaurentPoly rest;
    CycFactors f = factor_cyclotomic(num_, &rest);
    r.num_ = LaurentPoly::monomial(1 / f.coeff, -f.shift);
    for (const auto& [m, e] : sden_) {
        LaurentPoly s = LaurentPoly::q_power(m) - LaurentPoly::q_power(-m);
        for (int t = 0; t < e; ++t) r.num_ *= s;
    }
    for (const auto& [d, e] : cden_)
        for (int t = 0; t < e; ++t) r.num_ *= cyclotomic(d);
    for (const auto& [g, e] : gden_)
        for (int t = 0; t < e; ++t) r.num_ *= g;
    r.cden_ = std::move(f.phi);
    if (!rest.is_zero() && !rest.is_one()) r.gden_[std::move(rest)] += 1;
    r.reduce_cheap();
    return r;
}

QScalar& QScalar::operator/=(const QScalar& o) { return *this *= o.inverse(); }

bool QScalar::operator==(const QScalar& o) const {
    if (sden_ == o.sden_ && cden_ == o.cden_ && gden_ == o.gden_)
        return num_ == o.num_;
    LaurentPoly a = num_, b = o.num_;
    top_up(a, o.sden_, sden_, o.cden_, cden_, o.gden_, gden_);
    top_up(b, sden_, o.sden_, cden_, o.cden_, gden_, o.gden_);
    return a == b;
}

std::pair<LaurentPoly, LaurentPoly> QScalar::normalized() const {
    if (num_.is_zero()) return {LaurentPoly(), LaurentPoly(1)};
    // cyclotomic multiset of the denominator, with its monomial shift
    std::map<long, int> mult = cden_;
    long shift = 0;
    for (const auto& [m, e] : sden_) {
        shift += m * e;  // S_m = q^{-m} (q^{2m} - 1)
        for (long d = 1; d <= 2 * m; ++d)
            if ((2 * m) % d == 0) mult[d] += e;
    }
    LaurentPoly n = num_.shifted(shift);
    for (auto& [d, e] : mult) {
        while (e > 0) {
            try {
                LaurentPoly quo = LaurentPoly::div_exact(n, cyclotomic(d));
                n = std::move(quo);
                --e;
            } catch (const std::domain_error&) {
                break;
            }
        }
    }
    LaurentPoly den(1);
    for (const auto& [d, e] : mult)
        for (int t = 0; t < e; ++t) den *= cyclotomic(d);
    for (const auto& [g, e] : gden_) {
        for (int t = 0; t < e; ++t) {
            LaurentPoly common = poly_gcd(n, g);
            if (common.high() - common.low() > 0) {
                n = LaurentPoly::div_exact(n, common);
                den *= LaurentPoly::div_exact(g, common);
            } else {
                den *= g;
            }
        }
    }
    // re-normalize: general factors may have disturbed monicity
    if (!den.is_one()) {
        long s = den.low();
        den = den.shifted(-s);
        n = n.shifted(-s);
        mpq_class lead = den.coeff(den.high());
        if (lead != 1) {
            den.mul_monomial(1 / lead, 0);
            n.mul_monomial(1 / lead, 0);
        }
    }
    return {std::move(n), std::move(den)};
}

bool QScalar::is_polynomial() const {
    if (sden_.empty() && cden_.empty() && gden_.empty()) return true;
    auto [n, d] = normalized();
    return d.is_one();
}

LaurentPoly QScalar::as_poly() const {
    if (sden_.empty() && cden_.empty() && gden_.empty()) return num_;
    auto [n, d] = normalized();
    if (!d.is_one()) throw std::domain_error("as_poly: value has a denominator");
    return n;
}

std::string QScalar::str() const {
    auto [n, d] = normalized();
    if (d.is_one()) return n.str();
    return "(" + n.str() + ")/(" + d.str() + ")";
}

QScalar QScalar::parse(std::string_view text) {
    // form: poly | (poly)/(poly)
    size_t open = text.find_first_not_of(" \t");
    if (open != std::string_view::npos && text[open] == '(') {
        int depth = 0;
        size_t close = std::string_view::npos;
        for (size_t i = open; i < text.size(); ++i) {
            if (text[i] == '(') ++depth;
            if (text[i] == ')' && --depth == 0) {
                close = i;
                break;
            }
        }
        if (close != std::string_view::npos) {
            size_t slash = text.find_first_not_of(" \t", close + 1);
            if (slash != std::string_view::npos && text[slash] == '/') {
                size_t d_open = text.find('(', slash);
                size_t d_close = text.rfind(')');
                if (d_open == std::string_view::npos || d_close <= d_open)
                    throw ScalarParseError(slash, "malformed denominator");
                LaurentPoly num =
                    LaurentPoly::parse(text.substr(open + 1, close - open - 1));
                LaurentPoly den =
                    LaurentPoly::parse(text.substr(d_open + 1, d_close - d_open - 1));
                return QScalar(std::move(num), den);
            }
        }
    }
    return QScalar(LaurentPoly::parse(text));
}

bool canonical_equal(const QScalar& a, const QScalar& b) { return a == b; }

std::vector<LaurentPoly> clear_denominators(const std::vector<QScalar>& xs) {
    std::map<long, int> cs, cc;
    std::map<LaurentPoly, int> cg;
    for (const auto& x : xs) {
        merge_max(cs, x.sden_);
        merge_max(cc, x.cden_);
        merge_max(cg, x.gden_);
    }
    std::vector<LaurentPoly> out;
    out.reserve(xs.size());
    for (const auto& x : xs) {
        LaurentPoly p = x.num_;
        top_up(p, cs, x.sden_, cc, x.cden_, cg, x.gden_);
        out.push_back(std::move(p));
    }
    return out;
}

// ------------------------------------------------------------ q-combinatorics

LaurentPoly qint_poly(long n, long eps) {
    if (n == 0) return LaurentPoly();
    bool neg = n < 0;
    long m = neg ? -n : n;
    LaurentPoly p;
    for (long k = m - 1; k >= 1 - m; k -= 2) p += LaurentPoly::q_power(k * eps);
    return neg ? -p : p;
}

LaurentPoly qfact_poly(long m, long eps) {
    LaurentPoly p(1);
    for (long k = 2; k <= m; ++k) p *= qint_poly(k, eps);
    return p;
}

LaurentPoly qbinom_poly(long n, long d, long eps) {
    if (d < 0) return LaurentPoly();
    if (d == 0) return LaurentPoly(1);
    LaurentPoly numer(1);
    for (long k = 0; k < d; ++k) numer *= qint_poly(n - k, 1);
    LaurentPoly r = LaurentPoly::div_exact(numer, qfact_poly(d, 1));
    return eps == 1 ? r : r.subst_q_power(eps);
}

QScalar qint(long n, long eps) { return QScalar(qint_poly(n, eps)); }
QScalar qfact(long m, long eps) { return QScalar(qfact_poly(m, eps)); }
QScalar qbinom(long n, long d, long eps) { return QScalar(qbinom_poly(n, d, eps)); }

QScalar inv_qfact(long m, long eps) {
    QScalar r(1);
    r.div_qfact(m, eps);
    return r;
}

const char* to_string(Parity p) { return p.v == 0 ? "even" : "odd"; }

}  // namespace iqg
