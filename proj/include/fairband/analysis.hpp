#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fairband/curves.hpp"
#include "fairband/market.hpp"

namespace fairband {

enum class RangeClass { fair, profitable, degenerate };

// Bilateral price pair: pc is the counterparty's price of (-A, -C), ph the
// hedger's price of (A, C). [pc, ph] with pc <= ph is the fair range; the
// reversed interval is profitable for both parties (and hands a reseller an
// arbitrage).
struct PriceRange {
    double pc = 0.0;
    double ph = 0.0;
    RangeClass cls = RangeClass::degenerate;
    std::string case_label;  // H.1..H.3 / C.1..C.3 by the signs of the pair
};

PriceRange bilateral_range(double ph, double pc, double tol);

const char* to_string(RangeClass cls);

// The single-received-flow contract showing that opposite-sign endowments can
// reverse the price ordering: flow +alpha at t0 gives closed-form prices
//   ph0 = -alpha / B_l(t0),   pc0 = -alpha / B_b(t0),
// with ph0 < pc0 whenever r_l < r_b. Feasibility: 0 < alpha <=
// min(x1 B_l(t0), -x2 B_b(t0)).
struct Counterexample {
    double ph0 = 0.0;
    double pc0 = 0.0;
    Contract contract;
    double alpha = 0.0, t0 = 0.0;
};

Counterexample counterexample_increasing(double x1, double x2, const RateModel& rates, double t0,
                                         double alpha);

// The two-flow contract (pay alpha at t0, receive alpha e^{int r} at T) built
// on an intermediate deterministic rate r strictly inside (r_l, r_b):
//   ph0 = -alpha kappa1,  pc0 = +alpha kappa2, both kappas positive, so the
// bilaterally profitable range is nonempty.
struct KappaSpec {
    double t0 = 0.0;
    PiecewiseCurve mid_rate;   // r with r_l < r < r_b everywhere
    double alpha = 0.0;
    double kappa1 = 0.0, kappa2 = 0.0;
    double alpha_max = 0.0;    // feasibility upper bound
    double alpha_min = 0.0;    // feasibility lower bound (<= 0 for x2 < 0)
    double growth = 0.0;       // e^{int_{t0}^T r}
};

// Validates feasibility for the given endowments; throws std::domain_error
// naming the violated bound.
KappaSpec make_kappa_spec(double x1, double x2, const RateModel& rates, double t0,
                          const PiecewiseCurve& mid_rate, double alpha);

Counterexample counterexample_kappa(double x1, double x2, const RateModel& rates,
                                    const KappaSpec& spec);

// Computes (ph, pc) for a pair of endowments; analysis stays solver-agnostic.
using BilateralPricer = std::function<std::pair<double, double>(double x1, double x2)>;

struct SweepRow {
    double x = 0.0, ph = 0.0, pc = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    // monotonicity within the sampled grid, up to tol
    bool hedger_monotone = false;        // ph nonincreasing on x >= 0, nondecreasing on x <= 0
    bool counterparty_monotone = false;  // pc the other way around
    bool nesting = false;                // [pc(x), ph(x)] inside [pc(0), ph(0)], widened by tol
    double plateau_gap_pos = 0.0;        // |ph(x_max) - ph(second largest)| etc.
    double plateau_gap_neg = 0.0;
    double tol = 0.0;
};

SweepReport endowment_sweep(const BilateralPricer& pricer, const std::vector<double>& xs,
                            double tol);

// Empirical Lipschitz ratio max |ph(x1) - ph(x2)| / |x1 - x2| over the pairs.
double stability_estimate(const BilateralPricer& pricer,
                          const std::vector<std::pair<double, double>>& x_pairs);

struct HomogeneityReport {
    double max_abs_gap = 0.0;  // max over lambda of |ph(lambda x, lambda A, lambda C) - lambda ph|
    std::vector<double> lambdas;
};

// pricer_scaled(lambda) must price the contract (lambda A, lambda C) at
// endowment lambda x.
HomogeneityReport homogeneity_check(const std::function<double(double)>& pricer_scaled,
                                    const std::vector<double>& lambdas);

}  // namespace fairband
