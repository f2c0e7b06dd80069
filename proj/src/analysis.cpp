#include "fairband/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fairband {

const char* to_string(RangeClass cls) {
    switch (cls) {
        case RangeClass::fair: return "fair";
        case RangeClass::profitable: return "profitable";
        case RangeClass::degenerate: return "degenerate";
    }
    return "?";
}

PriceRange bilateral_range(double ph, double pc, double tol) {
    if (!std::isfinite(ph) || !std::isfinite(pc))
        throw std::domain_error("bilateral range needs finite prices");
    PriceRange out;
    out.ph = ph;
    out.pc = pc;
    if (std::abs(ph - pc) <= tol) {
        out.cls = RangeClass::degenerate;
        out.case_label = "degenerate";
        return out;
    }
    if (pc < ph) {
        out.cls = RangeClass::fair;
        if (pc >= 0.0) out.case_label = "H.1";
        else if (ph > 0.0) out.case_label = "H.2";
        else out.case_label = "H.3";
    } else {
        out.cls = RangeClass::profitable;
        if (ph >= 0.0) out.case_label = "C.1";
        else if (pc > 0.0) out.case_label = "C.2";
        else out.case_label = "C.3";
    }
    return out;
}

Counterexample counterexample_increasing(double x1, double x2, const RateModel& rates, double t0,
                                         double alpha) {
    if (!(x1 > 0.0 && x2 < 0.0))
        throw std::domain_error("increasing counterexample needs x1 > 0 > x2");
    if (!(t0 > 0.0 && t0 < rates.horizon))
        throw std::domain_error("flow date must lie strictly inside (0, T)");
    double bl = rates.account(AccountKind::lend, t0);
    double bb = rates.account(AccountKind::borrow, t0);
    double cap = std::min(x1 * bl, -x2 * bb);
    if (!(alpha > 0.0 && alpha <= cap))
        throw std::domain_error("alpha outside (0, min(x1 B_l(t0), -x2 B_b(t0))] = (0, " +
                                std::to_string(cap) + "]");
    Counterexample out;
    out.alpha = alpha;
    out.t0 = t0;
    out.ph0 = -alpha / bl;
    out.pc0 = -alpha / bb;
    out.contract.flows.push_back({t0, [alpha](double) { return alpha; }});
    return out;
}

KappaSpec make_kappa_spec(double x1, double x2, const RateModel& rates, double t0,
                          const PiecewiseCurve& mid_rate, double alpha) {
    if (!(x1 > 0.0 && x2 < 0.0))
        throw std::domain_error("kappa construction needs x1 > 0 > x2");
    if (!(t0 > 0.0 && t0 < rates.horizon))
        throw std::domain_error("flow date must lie strictly inside (0, T)");
    if (!curve_lt(rates.lend_rate, mid_rate) || !curve_lt(mid_rate, rates.borrow_rate))
        throw std::domain_error("intermediate rate must satisfy r_l < r < r_b everywhere");

    const double T = rates.horizon;
    KappaSpec spec;
    spec.t0 = t0;
    spec.mid_rate = mid_rate;
    spec.alpha = alpha;
    spec.growth = std::exp(mid_rate.integral(t0, T));

    double bl0 = rates.account(AccountKind::lend, t0);
    double blT = rates.account(AccountKind::lend, T);
    double bb0 = rates.account(AccountKind::borrow, t0);
    double bbT = rates.account(AccountKind::borrow, T);
    spec.kappa1 = -1.0 / bl0 + spec.growth / blT;
    spec.kappa2 = 1.0 / bb0 - spec.growth / bbT;

    double mid_less_lend = mid_rate.integral(t0, T) - rates.lend_rate.integral(t0, T);
    double mid_less_borrow = mid_rate.integral(t0, T) - rates.borrow_rate.integral(t0, T);
    spec.alpha_max = std::min({x1 * bl0 * std::exp(-mid_less_lend),
                               -x2 * bb0 * std::exp(-mid_less_borrow), x1 / spec.kappa1});
    spec.alpha_min = x2 / spec.kappa2;

    if (!(alpha > 0.0 && alpha >= spec.alpha_min && alpha <= spec.alpha_max))
        throw std::domain_error("alpha outside the feasibility interval (max(0, " +
                                std::to_string(spec.alpha_min) + "), " +
                                std::to_string(spec.alpha_max) + "]");
    return spec;
}

Counterexample counterexample_kappa(double x1, double x2, const RateModel& rates,
                                    const KappaSpec& spec) {
    KappaSpec checked = make_kappa_spec(x1, x2, rates, spec.t0, spec.mid_rate, spec.alpha);
    Counterexample out;
    out.alpha = checked.alpha;
    out.t0 = checked.t0;
    out.ph0 = -checked.alpha * checked.kappa1;
    out.pc0 = checked.alpha * checked.kappa2;
    double a = checked.alpha, g = checked.growth;
    out.contract.flows.push_back({checked.t0, [a](double) { return -a; }});
    out.contract.flows.push_back({rates.horizon, [a, g](double) { return a * g; }});
    return out;
}

SweepReport endowment_sweep(const BilateralPricer& pricer, const std::vector<double>& xs,
                            double tol) {
    SweepReport rep;
    rep.tol = tol;
    for (double x : xs) {
        auto [ph, pc] = pricer(x, x);
        rep.rows.push_back({x, ph, pc});
    }

    std::sort(rep.rows.begin(), rep.rows.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.x < b.x; });

    rep.hedger_monotone = true;
    rep.counterparty_monotone = true;
    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
        const auto& a = rep.rows[i];
        const auto& b = rep.rows[i + 1];
        if (a.x >= 0.0 && b.x >= a.x) {
            // ph nonincreasing, pc nondecreasing as x grows away from 0
            if (b.ph > a.ph + tol) rep.hedger_monotone = false;
            if (b.pc < a.pc - tol) rep.counterparty_monotone = false;
        }
        if (b.x <= 0.0 && a.x <= b.x) {
            // toward -inf (left of the grid) ph rises going left: equivalently
            // ph nondecreasing as x increases to 0 on the nonpositive side
            if (b.ph < a.ph - tol) rep.hedger_monotone = false;
            if (b.pc > a.pc + tol) rep.counterparty_monotone = false;
        }
    }

    // nesting against the zero-endowment range
    double ph0 = 0.0, pc0 = 0.0;
    bool have0 = false;
    for (const auto& r : rep.rows)
        if (r.x == 0.0) {
            ph0 = r.ph;
            pc0 = r.pc;
            have0 = true;
        }
    rep.nesting = have0;
    if (have0)
        for (const auto& r : rep.rows)
            if (r.ph > ph0 + tol || r.pc < pc0 - tol) rep.nesting = false;

    // plateau gaps between the two largest (resp. smallest) endowments
    std::vector<SweepRow> sorted = rep.rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.x < b.x; });
    if (sorted.size() >= 2) {
        rep.plateau_gap_pos =
            std::abs(sorted[sorted.size() - 1].ph - sorted[sorted.size() - 2].ph);
        rep.plateau_gap_neg = std::abs(sorted[0].ph - sorted[1].ph);
    }
    return rep;
}

double stability_estimate(const BilateralPricer& pricer,
                          const std::vector<std::pair<double, double>>& x_pairs) {
    double worst = 0.0;
    for (const auto& [x1, x2] : x_pairs) {
        if (x1 == x2) throw std::domain_error("stability estimate needs distinct endowments");
        double ph1 = pricer(x1, x1).first;
        double ph2 = pricer(x2, x2).first;
        worst = std::max(worst, std::abs(ph1 - ph2) / std::abs(x1 - x2));
    }
    return worst;
}

HomogeneityReport homogeneity_check(const std::function<double(double)>& pricer_scaled,
                                    const std::vector<double>& lambdas) {
    HomogeneityReport rep;
    rep.lambdas = lambdas;
    double base = pricer_scaled(1.0);
    for (double lam : lambdas) {
        if (lam < 0.0) throw std::domain_error("homogeneity check needs lambda >= 0");
        double scaled = pricer_scaled(lam);
        rep.max_abs_gap = std::max(rep.max_abs_gap, std::abs(scaled - lam * base));
    }
    return rep;
}

}  // namespace fairband
