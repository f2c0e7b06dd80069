#pragma once

#include <string>
#include <vector>

#include "fairband/market.hpp"
#include "fairband/surface.hpp"

namespace fairband {

// Recombining trinomial discretization of the spot under the pricing measure,
// log-spaced levels, per-node probabilities matching the first two arithmetic
// moments of dS = (beta s - kappa) dt + sigma dW exactly. Probabilities are
// never clamped: infeasible moment matching raises config_error naming the
// node.
struct LatticeBranch {
    int center = 0;  // index of the middle child on the next level
    double p_down = 0.0, p_mid = 0.0, p_up = 0.0;
    double mean = 0.0;      // matched conditional mean of the spot
    double variance = 0.0;  // matched conditional variance
};

struct Lattice {
    std::vector<double> times;
    double dx = 0.0;         // log spacing
    double sigma_ref = 0.0;  // reference log-volatility used to pick dx
    double s0 = 0.0;
    std::vector<std::vector<double>> spots;          // [level][node], level j has 2j+1 nodes
    std::vector<std::vector<LatticeBranch>> branch;  // [step][node]
};

Lattice build_lattice(const AssetModel& asset, const RateModel& rates, int n_steps,
                      const std::vector<double>& extra_times = {});

// Backward-induction solution of the party's pricing problem on the lattice:
// implicit in the value, explicit in the hedge ratio (conditional-covariance
// estimator). y carries price + collateral like ValueSurface; z is the hedge
// ratio in shares.
struct LatticeSolution {
    std::vector<double> times;
    std::vector<std::vector<double>> spots;
    std::vector<std::vector<double>> y;
    std::vector<std::vector<double>> z;

    double root_value() const { return y[0][0]; }
    double root_delta() const { return z[0][0]; }
    void write_csv(std::ostream& os) const;  // t,s,Y,Z
};

LatticeSolution solve_lattice_bsde(const Lattice& lattice, Party party, double x,
                                   const RateModel& rates, const AssetModel& asset,
                                   const Contract& contract, const CollateralSpec& collateral);

// Max |surface - lattice| over lattice nodes inside the surface hull and a
// +-band_sds log-sd band around s0. Nodes within maturity_margin * T of the
// payoff date are skipped (default: the last 5% of the horizon): at a payoff kink the two discretizations smooth
// differently and pointwise agreement there is not a resolution question.
struct CrossCheckReport {
    double max_abs_diff = 0.0;
    double at_t = 0.0, at_s = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string str() const;
};

CrossCheckReport cross_check(const ValueSurface& surface, const LatticeSolution& lattice,
                             double tol, double band_sds = 2.5, double maturity_margin = 0.05);

}  // namespace fairband
