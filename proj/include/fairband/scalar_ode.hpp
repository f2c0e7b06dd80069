#pragma once

#include <functional>
#include <vector>

#include "fairband/curves.hpp"
#include "fairband/market.hpp"

namespace fairband {

// Exact integrator for the kinked linear equation
//     w'(t) = r_pos(t) w^+ - r_neg(t) w^- + m(t)
// with piecewise-constant coefficients: per-piece closed-form exponentials,
// zero crossings of w located analytically. Integrates backward when t1 < t0.
double canonical_ode_integrate(const PiecewiseCurve& r_pos, const PiecewiseCurve& r_neg,
                               const PiecewiseCurve& m, double t0, double t1, double w0);

// RK4 fallback for general right-hand sides that are smooth except along a
// moving branch level: whenever kink_level(t, w) - w changes side within a
// step, the crossing time is bisected to 1e-12 before continuing.
double kinked_ode_integrate(const std::function<double(double, double)>& rhs,
                            const std::function<double(double, double)>& kink_level, double t0,
                            double t1, double w0, int n_steps);

// Ex-dividend price of a contract with state-independent flows: with no spot
// exposure the hedge ratio vanishes and the pricing problem collapses to a
// scalar equation, integrated exactly (piecewise exponentials) when the
// contract carries dated flows only. `values` holds the ex-dividend price at
// `times` (post-flow at flow dates).
struct DeterministicPrice {
    double price0 = 0.0;
    std::vector<double> times;
    std::vector<double> values;
};

DeterministicPrice deterministic_price(Party party, const RateModel& rates,
                                       const Contract& contract,
                                       const CollateralSpec& collateral, double x,
                                       int n_report = 129);

}  // namespace fairband
