// Acceptance suite: one line per criterion, exact checks only.
#include <iostream>
#include <random>
#include <sstream>

#include "iqg/drinfeld.hpp"
#include "iqg/iexpr.hpp"
#include "iqg/qidentities.hpp"
#include "iqg/qlinalg.hpp"
#include "iqg/udot.hpp"

using namespace iqg;

namespace {

int failures = 0;

void line(int criterion, const std::string& what, bool pass, long ms,
          const std::string& detail = "") {
    if (!pass) ++failures;
    std::cout << (pass ? "[pass]" : "[FAIL]") << " criterion " << criterion
              << ": " << what << " (" << ms << " ms)";
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n"
              << std::flush;
}

void report_failures(const Report& r, int max_shown = 2) {
    int shown = 0;
    for (const auto& f : r.failures) {
        if (shown++ >= max_shown) break;
        std::cout << "    " << f.identity << " at " << f.params << "\n";
    }
}

DDElement serre_element(DatumPtr d, int i, int j) {
    DDElement acc(d);
    long top = 1 - d->a(i, j);
    for (long r = 0; r <= top; ++r) {
        Word w;
        for (long t = 0; t < r; ++t) w.push_back(i);
        w.push_back(j);
        for (long t = 0; t < top - r; ++t) w.push_back(i);
        QScalar c = qbinom(top, r, d->eps_of(i));
        if (r % 2 != 0) c = -c;
        acc += half_word(d, std::move(w), Side::E, std::move(c));
    }
    return acc;
}

}  // namespace

int main() {
    // 1. G-function identity suite
    {
        Report r = verify_G_suite(GGrid{});
        line(1, "q-identity suite for G (" + std::to_string(r.checked) + " checks)",
             r.ok(), r.elapsed_ms);
        if (!r.ok()) report_failures(r);
    }

    // 2. T-function suite
    {
        Report r = verify_T_suite(TGrid{});
        line(2, "T suite: bridge to G, w-shift, vanishing region (" +
                    std::to_string(r.checked) + " checks)",
             r.ok(), r.elapsed_ms);
        if (!r.ok()) report_failures(r);
    }

    // 3. Appendix q-binomial lemmas
    {
        Report r = verify_appB_suite(AppBGrid{});
        line(3, "q-binomial lemma suite (" + std::to_string(r.checked) + " checks)",
             r.ok(), r.elapsed_ms);
        if (!r.ok()) report_failures(r);
    }

    // 4. classical Serre-Lusztig layer
    {
        Stopwatch sw;
        bool ok = true;
        long checks = 0;
        std::string detail;
        for (auto [a12, a21] :
             {std::pair{-1, -1}, std::pair{-2, -1}, std::pair{-3, -1}}) {
            auto d = make_rank2(a12, a21);
            Report r = verify_classical_suite(d, 0, 1, ClassicalGrid{});
            checks += r.checked;
            if (!r.ok()) {
                ok = false;
                detail = "a12=" + std::to_string(a12);
                report_failures(r);
            }
        }
        line(4, "classical vanishing, recursions, non-standard relations (" +
                    std::to_string(checks) + " checks)",
             ok, sw.ms(), detail);
    }

    // 5. minimal-degree relations (both flavors), swapped case, mixed middle
    {
        Stopwatch sw;
        bool ok = true;
        long checks = 0;
        {
            auto d = make_rank2(-1, -1);
            SerreMinimalGrid g;
            g.n_max = 3;
            g.t_max = 1;
            g.uis2_n_max = 2;
            Report r = verify_serre_minimal(d, 0, 1, g);
            checks += r.checked;
            if (!r.ok()) ok = false, report_failures(r);
        }
        {
            auto d = make_rank2(-2, -1);
            SerreMinimalGrid g;
            g.n_max = 2;
            g.t_max = 1;
            g.uis2_n_max = 2;
            Report r = verify_serre_minimal(d, 0, 1, g);
            checks += r.checked;
            if (!r.ok()) ok = false, report_failures(r);
        }
        {
            auto d = make_a3_swapped();
            SerreMinimalGrid g;
            g.n_max = 2;
            g.t_max = 1;
            Report r = verify_serre_minimal(d, 1, 0, g);
            checks += r.checked;
            if (!r.ok()) ok = false, report_failures(r);
        }
        line(5, "minimal-degree relation suites incl. swapped node and mixed "
                "middle (" + std::to_string(checks) + " checks)",
             ok, sw.ms());
    }

    // 6. recursion theorem, both families
    {
        Stopwatch sw;
        bool ok = true;
        long checks = 0;
        for (auto [a12, a21] : {std::pair{-1, -1}, std::pair{-2, -1}}) {
            auto d = make_rank2(a12, a21);
            RecursionGrid g;
            g.n_max = 2;
            Report r = verify_recursion(d, 0, 1, g);
            checks += r.checked;
            if (!r.ok()) ok = false, report_failures(r);
        }
        line(6, "three-term recursions for both y-families (" +
                    std::to_string(checks) + " checks)",
             ok, sw.ms());
    }

    // 7. vanishing theorem with gap-status notes
    {
        Stopwatch sw;
        bool ok = true;
        long checks = 0, notes = 0;
        for (auto [a12, a21] : {std::pair{-1, -1}, std::pair{-2, -1}}) {
            auto d = make_rank2(a12, a21);
            VanishingGrid g;
            g.n_max = 2;
            g.m_beyond = 3;
            Report r = verify_vanishing(d, 0, 1, g);
            checks += r.checked;
            notes += static_cast<long>(r.notes.size());
            if (!r.ok()) ok = false, report_failures(r);
        }
        // the boundary status must be reported, not asserted
        if (notes == 0) ok = false;
        line(7, "vanishing beyond the boundary; " + std::to_string(notes) +
                    " gap statuses reported (" + std::to_string(checks) +
                    " checks)",
             ok, sw.ms());
    }

    // 8. supporting lemmas
    {
        Stopwatch sw;
        bool ok = true;
        long checks = 0;
        {
            auto d = make_rank2(-1, -1);
            Report r = verify_support_lemmas(d, 0, 1, SupportGrid{});
            checks += r.checked;
            if (!r.ok()) ok = false, report_failures(r);
        }
        {
            auto d = make_a3_swapped();
            SupportGrid g;
            g.span_n_max = 4;
            Report r = verify_support_lemmas(d, 1, 0, g);
            checks += r.checked;
            if (!r.ok()) ok = false, report_failures(r);
        }
        line(8, "product formulas, induction-step identity, involution bridge, "
                "spanning sets (" + std::to_string(checks) + " checks)",
             ok, sw.ms());
    }

    // 9. idempotented rank-1 layer
    {
        UdotGrid g;  // order <= 4, lambda in [-3,3], roundtrip a,b <= 4
        Report r = verify_idp_expansion(g);
        line(9, "idempotented PBW expansions and commutation round-trip (" +
                    std::to_string(r.checked) + " checks)",
             r.ok(), r.elapsed_ms);
        if (!r.ok()) report_failures(r);
    }

    // 10. zero-oracle soundness regression
    {
        Stopwatch sw;
        bool ok = true;
        std::string detail;
        std::mt19937_64 rng(2026);
        auto a2 = make_rank2(-1, -1);
        auto b2 = make_rank2(-2, -1);
        long samples = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const auto& d = (trial % 2 == 0) ? a2 : b2;
            DDElement s = serre_element(d, trial % 4 < 2 ? 0 : 1,
                                        trial % 4 < 2 ? 1 : 0);
            long serre_len = 2 - d->a(trial % 4 < 2 ? 0 : 1, trial % 4 < 2 ? 1 : 0);
            long budget = 8 - serre_len;
            if (budget < 0) budget = 0;
            size_t lx = rng() % (budget / 2 + 1);
            size_t ly = rng() % (budget - lx + 1);
            Word wx(lx), wy(ly);
            for (auto& l : wx) l = static_cast<int>(rng() % 2);
            for (auto& l : wy) l = static_cast<int>(rng() % 2);
            DDElement prod = (half_word(d, wx, Side::E) * s) *
                             half_word(d, wy, Side::E);
            ++samples;
            if (!half_is_zero(*d, dd_to_half(prod, Side::E))) {
                ok = false;
                detail = "surviving two-sided multiple at trial " +
                         std::to_string(trial);
                break;
            }
        }
        WeightVec mu{2, 1};
        long ka = kostant_count(*a2, mu), kb = kostant_count(*b2, mu);
        long ra = iterated_r_rank(*a2, mu), rb = iterated_r_rank(*b2, mu);
        if (!(ka == 2 && ra == 2 && kb == 3 && rb == 3)) {
            ok = false;
            detail = "rank/count mismatch: " + std::to_string(ra) + "/" +
                     std::to_string(ka) + ", " + std::to_string(rb) + "/" +
                     std::to_string(kb);
        }
        line(10, "oracle kills " + std::to_string(samples) +
                     " ideal multiples; functional rank matches partition "
                     "counts (2 and 3)",
             ok, sw.ms(), detail);
    }

    // 11. braid candidate evidence (report-only for the harness; this
    //     criterion asserts that the report itself records passes)
    {
        auto d = make_rank2(-1, -1);
        Report r = check_braid_experimental(d, 0, +1, BraidGrid{});
        bool ok = !r.notes.empty();
        for (const auto& n : r.notes)
            if (n.find(": pass") == std::string::npos) ok = false;
        line(11, "braid candidate maps: inverse composition and relation "
                 "images all recorded as pass (" +
                     std::to_string(r.notes.size()) + " notes)",
             ok, r.elapsed_ms);
        for (const auto& n : r.notes)
            if (n.find(": pass") == std::string::npos)
                std::cout << "    " << n << "\n";
    }

    // 12. mutation sensitivity: every suite flags its documented
    //     single-exponent mutation on a reduced grid
    {
        Stopwatch sw;
        bool ok = true;
        std::string bad;
        auto expect_fail = [&](const char* name, const Report& r) {
            if (r.ok()) {
                ok = false;
                bad += std::string(name) + " ";
            }
        };
        GGrid gg;
        gg.w = {-1, 1};
        gg.u = {0, 2};
        gg.ell = {0, 1};
        gg.p = {-1, 1};
        gg.k = {0, 1};
        expect_fail("qcomb-G", verify_G_suite(gg, 1));
        TGrid tg;
        tg.w = {-1, 1};
        tg.u = {0, 2};
        tg.l = {0, 1};
        tg.mu = {0, 1};
        tg.beta = {0, 0};
        tg.alphas = {1, 2};
        expect_fail("qcomb-T", verify_T_suite(tg, 1));
        AppBGrid ag;
        ag.m = {0, 4};
        expect_fail("qcomb-appB", verify_appB_suite(ag, 1));
        auto d = make_rank2(-1, -1);
        ClassicalGrid cg;
        cg.ns = {1};
        cg.m_extra = 1;
        cg.t_max = 0;
        expect_fail("classical", verify_classical_suite(d, 0, 1, cg, 1));
        SerreMinimalGrid sg;
        sg.n_max = 1;
        sg.t_max = 0;
        expect_fail("serre-minimal", verify_serre_minimal(d, 0, 1, sg, 1));
        RecursionGrid rg;
        rg.n_max = 1;
        rg.m = {0, 2};
        expect_fail("recursion", verify_recursion(d, 0, 1, rg, 1));
        VanishingGrid vg;
        vg.n_max = 1;
        vg.m_beyond = 1;
        expect_fail("vanishing", verify_vanishing(d, 0, 1, vg, 1));
        SupportGrid pg;
        pg.b2r_r_max = 2;
        pg.divided_r_max = 2;
        pg.szz_m_max = 2;
        pg.hos_n_max = 1;
        pg.span_n_max = 2;
        expect_fail("support", verify_support_lemmas(d, 0, 1, pg, 1));
        UdotGrid ug;
        ug.order_max = 3;
        ug.lambda = {-1, 1};
        ug.roundtrip_max = 2;
        expect_fail("udot-idp", verify_idp_expansion(ug, 1));
        line(12, "every suite detects its documented formula mutation", ok,
             sw.ms(), bad.empty() ? "" : "undetected in: " + bad);
    }

    std::cout << (failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " ("
              << failures << " failing criteria)\n";
    return failures == 0 ? 0 : 1;
}
