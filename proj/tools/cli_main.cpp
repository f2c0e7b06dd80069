// Batch front door: loads a JSON scenario, runs the requested mode and drops
// CSV/report artifacts into the output directory.
//
//   price   solve both parties' pricing problems, emit prices + surfaces
//   sweep   endowment sweep with monotonicity and nesting verdicts
//   verify  model validation plus the numerical invariant suite
//   oracle  closed-form counterexample contracts cross-checked in-engine
//
// Exit codes: 0 ok, 1 assertion failure, 2 bad config, 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "fairband/analysis.hpp"
#include "fairband/drivers.hpp"
#include "fairband/errors.hpp"
#include "fairband/lattice.hpp"
#include "fairband/pde.hpp"
#include "fairband/scalar_ode.hpp"
#include "fairband/scenario.hpp"
#include "fairband/strategy.hpp"

using namespace fairband;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct Reporter {
    std::ofstream file;
    bool all_pass = true;

    explicit Reporter(const std::filesystem::path& p) : file(p) {}

    void line(const std::string& s) {
        file << s << "\n";
        std::printf("%s\n", s.c_str());
    }
    void check(bool ok, const std::string& what) {
        line(std::string(ok ? "PASS " : "FAIL ") + what);
        all_pass = all_pass && ok;
    }
};

std::pair<double, double> solve_prices(const Scenario& sc, const GridSpec& grid) {
    ValueSurface h =
        solve_pde(Party::hedger, sc.rates, sc.asset, sc.contract, sc.collateral, sc.x1, grid);
    ValueSurface c = solve_pde(Party::counterparty, sc.rates, sc.asset, sc.contract,
                               sc.collateral, sc.x2, grid);
    return {price_at(h, 0.0, sc.asset.s0, sc.collateral),
            price_at(c, 0.0, sc.asset.s0, sc.collateral)};
}

// 5x the coarse/fine gap, the working tolerance for inequality verdicts
double derived_tolerance(const Scenario& sc, const GridSpec& grid) {
    GridSpec coarse = grid.coarsened(2);
    auto [ph_f, pc_f] = solve_prices(sc, grid);
    auto [ph_c, pc_c] = solve_prices(sc, coarse);
    double est = std::max(std::abs(ph_f - ph_c), std::abs(pc_f - pc_c));
    return 5.0 * est + 1e-12;
}

int run_price(const Scenario& sc, const std::filesystem::path& out, double tol) {
    ValueSurface h = solve_pde(Party::hedger, sc.rates, sc.asset, sc.contract, sc.collateral,
                               sc.x1, sc.grid);
    ValueSurface c = solve_pde(Party::counterparty, sc.rates, sc.asset, sc.contract,
                               sc.collateral, sc.x2, sc.grid);
    double ph = price_at(h, 0.0, sc.asset.s0, sc.collateral);
    double pc = price_at(c, 0.0, sc.asset.s0, sc.collateral);
    if (tol <= 0.0) tol = derived_tolerance(sc, sc.grid.coarsened(2));
    PriceRange range = bilateral_range(ph, pc, tol);

    {
        std::ofstream f(out / "surface_h.csv");
        h.write_csv(f);
        std::ofstream g(out / "surface_c.csv");
        c.write_csv(g);
    }
    {
        std::ofstream f(out / "prices.csv");
        f << "scenario,x1,x2,ph,pc,classification,case\n";
        f << sc.id << ',' << fmt(sc.x1) << ',' << fmt(sc.x2) << ',' << fmt(ph) << ',' << fmt(pc)
          << ',' << to_string(range.cls) << ',' << range.case_label << "\n";
    }
    Reporter rep(out / "report.txt");
    rep.line("scenario " + sc.id);
    rep.line("ph = " + fmt(ph) + "  (hedger, x1 = " + fmt(sc.x1) + ")");
    rep.line("pc = " + fmt(pc) + "  (counterparty, x2 = " + fmt(sc.x2) + ")");
    rep.line(std::string("range: ") + to_string(range.cls) + " (" + range.case_label +
             "), tol = " + fmt(tol));
    return 0;
}

int run_sweep(const Scenario& sc, const std::filesystem::path& out, double tol) {
    GridSpec grid = sc.grid;
    if (tol <= 0.0) tol = derived_tolerance(sc, grid);
    BilateralPricer pricer = [&](double x1, double x2) {
        Scenario s = sc;
        s.x1 = x1;
        s.x2 = x2;
        return solve_prices(s, grid);
    };
    std::vector<double> xs{-10.0, -1.0, -0.1, 0.0, 0.1, 1.0, 10.0};
    SweepReport rep = endowment_sweep(pricer, xs, tol);

    {
        std::ofstream f(out / "sweep.csv");
        f << "x,ph,pc\n";
        for (const auto& row : rep.rows)
            f << fmt(row.x) << ',' << fmt(row.ph) << ',' << fmt(row.pc) << "\n";
    }
    Reporter r(out / "report.txt");
    r.line("scenario " + sc.id + ", tol = " + fmt(tol));
    r.check(rep.hedger_monotone, "hedger price monotone in the endowment");
    r.check(rep.counterparty_monotone, "counterparty price monotone in the endowment");
    r.check(rep.nesting, "fair range nests inside the zero-endowment range");
    r.line("plateau gaps: +" + fmt(rep.plateau_gap_pos) + " / -" + fmt(rep.plateau_gap_neg));
    return r.all_pass ? 0 : 1;
}

int run_verify(const Scenario& sc, const std::filesystem::path& out, double tol,
               std::uint64_t seed) {
    Reporter r(out / "report.txt");
    GridSpec grid = sc.grid;
    if (tol <= 0.0) tol = derived_tolerance(sc, grid);
    r.line("scenario " + sc.id + ", tol = " + fmt(tol));

    // paired driver gap bounds on random samples
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-8.0, 8.0);
        bool strong = sc.rates.strong_funding();
        double worst_b = -1e300, worst_m = -1e300;
        for (int k = 0; k < 10000; ++k) {
            double y = u(rng), z = u(rng), s = std::abs(u(rng)) + 0.1;
            if (strong)
                worst_b = std::max(worst_b,
                                   driver_gap_borrow(0.3, y, {z}, {s}, -std::abs(u(rng)),
                                                     -std::abs(u(rng)), sc.rates));
            bool first = (k % 2) == 0;
            worst_m = std::max(
                worst_m, driver_gap_mixed(0.3, y, {z}, {s}, first ? std::abs(u(rng)) : 0.0,
                                          first ? 0.0 : -std::abs(u(rng)), sc.rates));
        }
        if (strong) r.check(worst_b <= 1e-12, "borrow-pair driver gap <= 0 (10^4 samples)");
        else r.line("SKIP borrow-pair driver gap (needs r_b <= r_ib)");
        r.check(worst_m <= 1e-12, "mixed-pair driver gap <= 0 (10^4 samples)");
    }

    // bilateral ordering node-wise when the hypotheses apply
    ValueSurface h = solve_pde(Party::hedger, sc.rates, sc.asset, sc.contract, sc.collateral,
                               sc.x1, grid);
    ValueSurface c = solve_pde(Party::counterparty, sc.rates, sc.asset, sc.contract,
                               sc.collateral, sc.x2, grid);
    EffectiveStream stream = effective_stream(sc.contract, sc.collateral, sc.rates,
                                              sc.asset.domain_lo, sc.asset.domain_hi);
    bool ordering_applies =
        sc.x1 * sc.x2 >= 0.0 || (stream.decreasing && sc.x1 >= 0.0 && sc.x2 <= 0.0) ||
        (stream.increasing && sc.x1 <= 0.0 && sc.x2 >= 0.0);
    if (ordering_applies) {
        double worst = -1e300;
        for (std::size_t j = 0; j < h.times.size(); ++j)
            for (std::size_t i = 0; i < h.spots.size(); ++i)
                worst = std::max(worst, c.v[j][i] - h.v[j][i]);
        r.check(worst <= tol, "pc <= ph + tol at every grid node (worst gap " + fmt(worst) + ")");
    } else {
        r.line("SKIP bilateral ordering (endowment signs outside the ordering hypotheses)");
    }

    // cross oracle: lattice vs finite differences
    {
        std::vector<double> flow_dates;
        for (const auto& f : sc.contract.flows) flow_dates.push_back(f.t);
        Lattice lat = build_lattice(sc.asset, sc.rates, sc.lattice_steps, flow_dates);
        LatticeSolution sol = solve_lattice_bsde(lat, Party::hedger, sc.x1, sc.rates, sc.asset,
                                                 sc.contract, sc.collateral);
        double scale = std::max(1.0, std::abs(price_at(h, 0.0, sc.asset.s0, sc.collateral)));
        auto rep = cross_check(h, sol, 0.005 * scale);
        r.check(rep.pass, "pde/lattice cross oracle: " + rep.str());
    }

    // comparison property: a raised payoff never lowers the surface
    {
        Contract bumped = sc.contract;
        auto base_payoff = sc.contract.payoff;
        bumped.payoff = [base_payoff](double s) {
            return (base_payoff ? base_payoff(s) : 0.0) + 1.0;
        };
        ValueSurface hb = solve_pde(Party::hedger, sc.rates, sc.asset, bumped, sc.collateral,
                                    sc.x1, grid);
        double worst = -1e300;
        for (std::size_t j = 0; j < h.times.size(); ++j)
            for (std::size_t i = 0; i < h.spots.size(); ++i)
                worst = std::max(worst, h.v[j][i] - hb.v[j][i]);
        r.check(worst <= 1e-10, "discrete comparison principle (payoff bump)");
    }
    return r.all_pass ? 0 : 1;
}

int run_oracle(const Scenario& sc, const std::filesystem::path& out) {
    Reporter r(out / "report.txt");
    const RateModel& rates = sc.rates;
    if (!rates.strictly_ordered()) {
        r.line("oracle mode needs r_l < r_b everywhere");
        return 2;
    }
    double x1 = sc.x1 > 0.0 ? sc.x1 : 1.0;
    double x2 = sc.x2 < 0.0 ? sc.x2 : -1.0;
    double t0 = 0.5 * rates.horizon;

    // received-flow contract
    double cap = std::min(x1 * rates.account(AccountKind::lend, t0),
                          -x2 * rates.account(AccountKind::borrow, t0));
    double alpha = 0.5 * cap;
    auto inc = counterexample_increasing(x1, x2, rates, t0, alpha);
    r.line("received-flow contract: alpha = " + fmt(alpha) + ", t0 = " + fmt(t0));
    r.line("  ph0 = " + fmt(inc.ph0) + ", pc0 = " + fmt(inc.pc0));
    auto ih = deterministic_price(Party::hedger, rates, inc.contract, {}, x1);
    auto ic = deterministic_price(Party::counterparty, rates, inc.contract, {}, x2);
    r.check(std::abs(ih.price0 - inc.ph0) < 1e-9, "scalar route reproduces ph0");
    r.check(std::abs(ic.price0 - inc.pc0) < 1e-9, "scalar route reproduces pc0");
    r.check(inc.ph0 < inc.pc0, "ph0 < pc0 (profitable range nonempty)");

    // two-flow contract on an intermediate rate
    PiecewiseCurve mid(0.5 * (rates.lend_rate.min_value() + rates.borrow_rate.max_value()));
    KappaSpec probe = make_kappa_spec(x1, x2, rates, t0, mid, 1e-9);
    double alpha2 = std::min(0.5, 0.5 * probe.alpha_max);
    KappaSpec spec = make_kappa_spec(x1, x2, rates, t0, mid, alpha2);
    auto kap = counterexample_kappa(x1, x2, rates, spec);
    r.line("two-flow contract: alpha = " + fmt(alpha2) + ", kappa1 = " + fmt(spec.kappa1) +
           ", kappa2 = " + fmt(spec.kappa2));
    r.line("  ph0 = " + fmt(kap.ph0) + ", pc0 = " + fmt(kap.pc0));
    auto kh = deterministic_price(Party::hedger, rates, kap.contract, {}, x1);
    auto kc = deterministic_price(Party::counterparty, rates, kap.contract, {}, x2);
    r.check(std::abs(kh.price0 - kap.ph0) < 1e-9, "scalar route reproduces ph0");
    r.check(std::abs(kc.price0 - kap.pc0) < 1e-9, "scalar route reproduces pc0");
    auto range = bilateral_range(kap.ph0, kap.pc0, 1e-12);
    r.check(range.cls == RangeClass::profitable, std::string("classification ") +
                                                     to_string(range.cls) + " (" +
                                                     range.case_label + ")");
    return r.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bilateral pricing engine for markets with differential rates"};
    std::string config_path, mode = "price", out_dir = "out", grid_arg;
    double tol = 0.0;
    int steps = 0;
    std::uint64_t seed = 12345;
    app.add_option("--config", config_path, "scenario JSON file")->required();
    app.add_option("--mode", mode, "price | sweep | verify | oracle")
        ->check(CLI::IsMember({"price", "sweep", "verify", "oracle"}));
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--grid", grid_arg, "space x time, e.g. 400x400");
    app.add_option("--steps", steps, "lattice steps");
    app.add_option("--tol", tol, "inequality tolerance (default: 5x refinement estimate)");
    app.add_option("--seed", seed, "rng seed for sampled checks");
    CLI11_PARSE(app, argc, argv);

    try {
        Scenario sc = load_scenario(config_path);
        if (!grid_arg.empty()) {
            auto xpos = grid_arg.find('x');
            if (xpos == std::string::npos)
                throw config_error("--grid expects NxM, got " + grid_arg);
            sc.grid.n_space = std::stoi(grid_arg.substr(0, xpos));
            sc.grid.n_time = std::stoi(grid_arg.substr(xpos + 1));
        }
        if (steps > 0) sc.lattice_steps = steps;

        ValidationReport vr = validate_model(sc.rates, sc.asset, sc.contract, sc.collateral);
        if (!vr.ok()) {
            std::fprintf(stderr, "invalid model:\n%s", vr.str().c_str());
            return 2;
        }

        std::filesystem::path out(out_dir);
        std::filesystem::create_directories(out);

        if (mode == "price") return run_price(sc, out, tol);
        if (mode == "sweep") return run_sweep(sc, out, tol);
        if (mode == "verify") return run_verify(sc, out, tol, seed);
        return run_oracle(sc, out);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const numerical_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
