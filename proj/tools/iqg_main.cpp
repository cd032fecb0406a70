// iqg: batch verification harness and expression calculator for the
// Drinfeld-double / i-quantum-group engine.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "iqg/cartan.hpp"
#include "iqg/exprdsl.hpp"
#include "iqg/iexpr.hpp"
#include "iqg/qidentities.hpp"
#include "iqg/udot.hpp"

using namespace iqg;

namespace {

const std::vector<std::string> kSuites = {
    "qcomb-G",   "qcomb-T",  "qcomb-appB", "classical",
    "serre-minimal", "recursion", "vanishing", "support",
    "udot-idp",  "braid-experimental"};

struct Options {
    std::vector<std::string> suites;
    bool all = false;
    std::string datum_file;
    std::string grid = "default";
    std::string grid_file;
    Range n{0, -1}, m{0, -1}, t{0, -1};
    std::string e_mode = "both";
    std::string parity = "both";
    bool json = false;
    int jobs = 1;
};

Range parse_range(const std::string& text) {
    auto pos = text.find("..");
    if (pos == std::string::npos) {
        long v = std::stol(text);
        return {v, v};
    }
    return {std::stol(text.substr(0, pos)), std::stol(text.substr(pos + 2))};
}

// named data used when no --datum file is supplied
struct NamedDatum {
    std::string name;
    DatumPtr d;
    int i, j;
};

std::vector<NamedDatum> default_data(bool include_g2) {
    std::vector<NamedDatum> out;
    out.push_back({"split-a12=-1", make_rank2(-1, -1), 0, 1});
    out.push_back({"split-a12=-2", make_rank2(-2, -1), 0, 1});
    if (include_g2) out.push_back({"split-a12=-3", make_rank2(-3, -1), 0, 1});
    return out;
}

NamedDatum swapped_datum() { return {"a3-swapped", make_a3_swapped(), 1, 0}; }

// (i, j) choice for a user-supplied datum: i is the first split node, j
// prefers a swapped partner, then any other node
std::pair<int, int> pick_nodes(const CartanDatum& d) {
    int i = -1;
    for (int t = 0; t < d.rank(); ++t)
        if (d.tau_of(t) == t) {
            i = t;
            break;
        }
    if (i < 0) throw std::runtime_error("datum has no split node");
    int j = -1;
    for (int t = 0; t < d.rank(); ++t)
        if (t != i && d.tau_of(t) != t && d.a(i, t) != 0) j = t;
    if (j < 0)
        for (int t = 0; t < d.rank(); ++t)
            if (t != i && d.a(i, t) != 0) j = t;
    if (j < 0)
        for (int t = 0; t < d.rank(); ++t)
            if (t != i) j = t;
    if (j < 0) throw std::runtime_error("datum needs at least two nodes");
    return {i, j};
}

void apply_grid_file(const std::string& path, GGrid& gg, TGrid& tg, AppBGrid& ag) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grid file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    auto rng = [](const nlohmann::json& v) {
        return Range{v.at(0).get<long>(), v.at(1).get<long>()};
    };
    if (j.contains("qcomb-G")) {
        auto& g = j["qcomb-G"];
        if (g.contains("w")) gg.w = rng(g["w"]);
        if (g.contains("u")) gg.u = rng(g["u"]);
        if (g.contains("ell")) gg.ell = rng(g["ell"]);
        if (g.contains("p")) gg.p = rng(g["p"]);
        if (g.contains("k")) gg.k = rng(g["k"]);
    }
    if (j.contains("qcomb-T")) {
        auto& g = j["qcomb-T"];
        if (g.contains("w")) tg.w = rng(g["w"]);
        if (g.contains("u")) tg.u = rng(g["u"]);
        if (g.contains("l")) tg.l = rng(g["l"]);
        if (g.contains("mu")) tg.mu = rng(g["mu"]);
        if (g.contains("beta")) tg.beta = rng(g["beta"]);
        if (g.contains("alpha")) tg.alphas = g["alpha"].get<std::vector<long>>();
    }
    if (j.contains("qcomb-appB")) {
        auto& g = j["qcomb-appB"];
        if (g.contains("m")) ag.m = rng(g["m"]);
        if (g.contains("a")) ag.a = rng(g["a"]);
        if (g.contains("n")) ag.n = rng(g["n"]);
    }
}

int run_verify(const Options& opt) {
    std::vector<std::string> selected = opt.suites;
    if (opt.all) selected = kSuites;
    if (selected.empty()) {
        std::cerr << "verify: no suite selected (use --suite or --all)\n";
        return 2;
    }
    for (const auto& s : selected)
        if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end()) {
            std::cerr << "verify: unknown suite '" << s << "'; known:";
            for (const auto& k : kSuites) std::cerr << " " << k;
            std::cerr << "\n";
            return 2;
        }

    GGrid gg;
    TGrid tg;
    AppBGrid ag;
    if (opt.grid == "small") {
        gg = GGrid{{-2, 2}, {0, 2}, {0, 2}, {-1, 1}, {-1, 1}};
        tg = TGrid{{-2, 2}, {0, 2}, {0, 2}, {0, 2}, {0, 1}, {1, 2}};
        ag = AppBGrid{{0, 5}, {-2, 0}, {0, 2}, {-3, 3}, {0, 3}};
    } else if (opt.grid != "default") {
        std::cerr << "verify: unknown grid preset '" << opt.grid << "'\n";
        return 2;
    }
    if (!opt.grid_file.empty()) apply_grid_file(opt.grid_file, gg, tg, ag);

    std::optional<NamedDatum> user;
    if (!opt.datum_file.empty()) {
        CartanDatum d = CartanDatum::load_file(opt.datum_file);
        auto bad = validate_datum(d);
        if (!bad.empty()) {
            std::cerr << "verify: invalid datum:\n";
            for (const auto& b : bad) std::cerr << "  " << b << "\n";
            return 2;
        }
        auto dp = std::make_shared<const CartanDatum>(std::move(d));
        auto [i, j] = pick_nodes(*dp);
        user = NamedDatum{opt.datum_file, dp, i, j};
    }

    std::vector<int> es;
    if (opt.e_mode == "both") es = {-1, 1};
    else if (opt.e_mode == "+1") es = {1};
    else if (opt.e_mode == "-1") es = {-1};
    else {
        std::cerr << "verify: --e must be +1, -1, or both\n";
        return 2;
    }
    std::vector<int> parities;
    if (opt.parity == "both") parities = {0, 1};
    else if (opt.parity == "even") parities = {0};
    else if (opt.parity == "odd") parities = {1};
    else {
        std::cerr << "verify: --parity must be even, odd, or both\n";
        return 2;
    }

    std::vector<Report> reports;
    bool failed = false;
    auto emit = [&](Report r, bool gating) {
        if (gating && !r.ok()) failed = true;
        if (opt.json) {
            std::cout << r.to_json_text() << "\n";
        } else {
            r.print_text(std::cout);
        }
        reports.push_back(std::move(r));
    };

    for (const auto& suite : selected) {
        if (suite == "qcomb-G") {
            emit(verify_G_suite(gg, 0, opt.jobs), true);
        } else if (suite == "qcomb-T") {
            emit(verify_T_suite(tg, 0, opt.jobs), true);
        } else if (suite == "qcomb-appB") {
            emit(verify_appB_suite(ag, 0, opt.jobs), true);
        } else if (suite == "classical") {
            ClassicalGrid g;
            if (!opt.n.empty()) {
                g.ns.clear();
                for (long n = std::max(0L, opt.n.lo); n <= opt.n.hi; ++n)
                    g.ns.push_back(n);
            }
            if (!opt.t.empty()) g.t_max = opt.t.hi;
            auto data = user ? std::vector<NamedDatum>{*user} : default_data(true);
            for (const auto& nd : data) {
                Report r = verify_classical_suite(nd.d, nd.i, nd.j, g);
                r.suite += " [" + nd.name + "]";
                emit(std::move(r), true);
            }
        } else if (suite == "serre-minimal") {
            auto data = user ? std::vector<NamedDatum>{*user} : default_data(false);
            if (!user) data.push_back(swapped_datum());
            for (const auto& nd : data) {
                SerreMinimalGrid g;
                g.n_max = nd.d->a(nd.i, nd.j) <= -2 || nd.d->rank() > 2 ? 2 : 3;
                g.uis2_n_max = 2;
                if (!opt.n.empty()) g.n_max = opt.n.hi;
                if (!opt.t.empty()) g.t_max = opt.t.hi;
                g.parities = parities;
                Report r = verify_serre_minimal(nd.d, nd.i, nd.j, g);
                r.suite += " [" + nd.name + "]";
                emit(std::move(r), true);
            }
        } else if (suite == "recursion") {
            auto data = user ? std::vector<NamedDatum>{*user} : default_data(false);
            for (const auto& nd : data) {
                RecursionGrid g;
                if (!opt.n.empty()) g.n_max = opt.n.hi;
                if (!opt.m.empty()) g.m = opt.m;
                g.parities = parities;
                g.es = es;
                Report r = verify_recursion(nd.d, nd.i, nd.j, g);
                r.suite += " [" + nd.name + "]";
                emit(std::move(r), true);
            }
        } else if (suite == "vanishing") {
            auto data = user ? std::vector<NamedDatum>{*user} : default_data(false);
            for (const auto& nd : data) {
                VanishingGrid g;
                if (!opt.n.empty()) g.n_max = opt.n.hi;
                g.parities = parities;
                g.es = es;
                Report r = verify_vanishing(nd.d, nd.i, nd.j, g);
                r.suite += " [" + nd.name + "]";
                emit(std::move(r), true);
            }
        } else if (suite == "support") {
            std::vector<NamedDatum> data;
            if (user) data = {*user};
            else {
                data = {default_data(false).front(), swapped_datum()};
            }
            for (const auto& nd : data) {
                SupportGrid g;
                if (nd.d->rank() > 2) g.span_n_max = 4;
                Report r = verify_support_lemmas(nd.d, nd.i, nd.j, g);
                r.suite += " [" + nd.name + "]";
                emit(std::move(r), true);
            }
        } else if (suite == "udot-idp") {
            UdotGrid g;
            emit(verify_idp_expansion(g), true);
        } else if (suite == "braid-experimental") {
            auto data = user ? std::vector<NamedDatum>{*user}
                             : std::vector<NamedDatum>{default_data(false).front()};
            for (const auto& nd : data)
                for (int e : es) {
                    BraidGrid g;
                    Report r = check_braid_experimental(nd.d, nd.i, e, g);
                    r.suite += " [" + nd.name + "]";
                    emit(std::move(r), false);  // never gates the exit code
                }
        }
    }

    if (opt.json) {
        nlohmann::json summary;
        summary["suites"] = nlohmann::json::array();
        for (const auto& r : reports)
            summary["suites"].push_back(
                {{"suite", r.suite}, {"checked", r.checked},
                 {"failures", r.failures.size()}, {"elapsed_ms", r.elapsed_ms}});
        summary["pass"] = !failed;
        std::cout << summary.dump(2) << "\n";
    } else {
        std::cout << (failed ? "FAIL" : "PASS") << " (" << reports.size()
                  << " suite runs)\n";
    }
    return failed ? 1 : 0;
}

DatumPtr load_datum_or_die(const std::string& path) {
    CartanDatum d = CartanDatum::load_file(path);
    auto bad = validate_datum(d);
    if (!bad.empty()) {
        std::ostringstream os;
        os << "invalid datum:";
        for (const auto& b : bad) os << " " << b << ";";
        throw std::runtime_error(os.str());
    }
    return std::make_shared<const CartanDatum>(std::move(d));
}

std::map<int, QScalar> load_varsigma(const std::string& path, const DatumPtr& d) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open varsigma file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    std::map<int, QScalar> out;
    for (auto it = j.begin(); it != j.end(); ++it)
        out[d->resolve_node(it.key())] = QScalar::parse(it.value().get<std::string>());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification harness for Drinfeld doubles and "
                 "quasi-split universal i-quantum groups"};
    app.require_subcommand(1);

    Options opt;
    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("--suite", opt.suites, "suite name (repeatable)");
    verify->add_flag("--all", opt.all, "run every suite");
    verify->add_option("--datum", opt.datum_file, "Cartan datum JSON file");
    verify->add_option("--grid", opt.grid, "grid preset: default | small");
    verify->add_option("--grid-file", opt.grid_file, "JSON grid overrides");
    std::string nr, mr, tr;
    verify->add_option("--n", nr, "n range, e.g. 0..3");
    verify->add_option("--m", mr, "m range");
    verify->add_option("--t", tr, "t range");
    verify->add_option("--e", opt.e_mode, "+1 | -1 | both");
    verify->add_option("--parity", opt.parity, "even | odd | both");
    verify->add_flag("--json", opt.json, "emit one JSON report per suite");
    verify->add_option("--jobs", opt.jobs, "worker threads for grid suites");

    std::string expr_text, datum_file, varsigma_file, target = "auto";
    auto* expand = app.add_subcommand("expand", "evaluate an expression and "
                                                "print its canonical form");
    expand->add_option("expr", expr_text, "expression")->required();
    expand->add_option("--datum", datum_file, "Cartan datum JSON file");
    expand->add_option("--varsigma", varsigma_file, "parameter table JSON");
    expand->add_option("--target", target, "auto | dd | i");

    std::string check_text, check_datum, check_varsigma;
    auto* check = app.add_subcommand("check", "check \"lhs = rhs\" or \"expr = 0\"");
    check->add_option("expr", check_text, "equation")->required();
    check->add_option("--datum", check_datum, "Cartan datum JSON file");
    check->add_option("--varsigma", check_varsigma, "parameter table JSON");

    std::string datum_path;
    auto* datum = app.add_subcommand("datum", "validate a Cartan datum file");
    datum->add_option("file", datum_path, "datum JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) {
            if (!nr.empty()) opt.n = parse_range(nr);
            if (!mr.empty()) opt.m = parse_range(mr);
            if (!tr.empty()) opt.t = parse_range(tr);
            return run_verify(opt);
        }
        if (expand->parsed()) {
            AstPtr a = parse_expr(expr_text);
            DatumPtr d;
            if (!datum_file.empty()) d = load_datum_or_die(datum_file);
            bool want_dd = target == "dd" ||
                           (target == "auto" && mentions_dd_generators(a));
            if (target != "auto" && target != "dd" && target != "i") {
                std::cerr << "expand: --target must be auto, dd, or i\n";
                return 2;
            }
            if (!d) {
                // datum-free expressions must be scalars
                std::cout << eval_scalar(a).str() << "\n";
                return 0;
            }
            if (want_dd) {
                std::cout << eval_dd(a, d).str() << "\n";
            } else {
                IExpr x = eval_iexpr(a, d);
                if (!varsigma_file.empty())
                    x = specialize_parameters(x, load_varsigma(varsigma_file, d));
                std::cout << x.str() << "\n";
            }
            return 0;
        }
        if (check->parsed()) {
            // split at the top-level '='
            int depth = 0;
            size_t eq = std::string::npos;
            for (size_t t = 0; t < check_text.size(); ++t) {
                char c = check_text[t];
                if (c == '(' || c == '[') ++depth;
                if (c == ')' || c == ']') --depth;
                if (c == '=' && depth == 0) {
                    eq = t;
                    break;
                }
            }
            if (eq == std::string::npos) {
                std::cerr << "check: expected \"lhs = rhs\"\n";
                return 2;
            }
            AstPtr lhs = parse_expr(check_text.substr(0, eq));
            AstPtr rhs = parse_expr(check_text.substr(eq + 1));
            if (check_datum.empty()) {
                QScalar v = eval_scalar(lhs) - eval_scalar(rhs);
                bool ok = v.is_zero();
                std::cout << (ok ? "pass" : "fail") << "\n";
                return ok ? 0 : 1;
            }
            DatumPtr d = load_datum_or_die(check_datum);
            DDElement diff = eval_dd(lhs, d) - eval_dd(rhs, d);
            bool ok;
            if (!check_varsigma.empty())
                ok = dd_pi_is_zero(diff, load_varsigma(check_varsigma, d));
            else
                ok = dd_is_zero(diff);
            std::cout << (ok ? "pass" : "fail") << "\n";
            return ok ? 0 : 1;
        }
        if (datum->parsed()) {
            CartanDatum d = CartanDatum::load_file(datum_path);
            auto bad = validate_datum(d);
            if (bad.empty()) {
                std::cout << "valid (" << d.rank() << " nodes)\n";
                return 0;
            }
            for (const auto& b : bad) std::cout << "violation: " << b << "\n";
            return 1;
        }
    } catch (const DslParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ScalarParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
