#pragma once

#include <vector>

#include "fairband/curves.hpp"

namespace fairband {

// Arguments of a generator evaluation. z is in shares, one entry per asset;
// the exposure z^i S^i is formed internally so the same convention serves the
// finite-difference solver (z = dv/ds) and the lattice. x is the endowment
// parameter, used only by the hedger/counterparty generator family.
struct DriverQuery {
    double t = 0.0;
    std::vector<double> spots;
    double y = 0.0;
    std::vector<double> z;
    double x = 0.0;
};

enum class CashBranch { lend, borrow };

inline double pos(double v) { return v > 0.0 ? v : 0.0; }
inline double neg(double v) { return v < 0.0 ? -v : 0.0; }

// Drift of the portfolio value carried at the lending (resp. borrowing)
// account: leading term sum r_k z^i S^i, funding charge on long positions,
// and the lend/borrow split on the residual cash balance.
double wealth_drift(const DriverQuery& q, const RateModel& rates, CashBranch branch);

// Generator of the discounted wealth: B_k^{-1} f_k(t, B_k y, z) - r_k y.
double discounted_wealth_drift(const DriverQuery& q, const RateModel& rates, CashBranch branch);

// Common funding-cost generator shared by both parties (no leading term):
//   -sum r_ib (zS)^+ + r_l (y + sum (zS)^-)^+ - r_b (y + sum (zS)^-)^-.
double funding_generator(const DriverQuery& q, const RateModel& rates);

// Endowment-aware generators of the hedger's and counterparty's pricing
// problems under the common auxiliary measure; beta is the auxiliary drift
// rate curve (applied to every asset).
double hedger_generator(const DriverQuery& q, const RateModel& rates, const PiecewiseCurve& beta);
double counterparty_generator(const DriverQuery& q, const RateModel& rates,
                              const PiecewiseCurve& beta);

// Sign-specific generators used by the monotone-contract and independence
// arguments. The *_reduced forms are the x-free reductions valid on the sign
// domain of y where they are applied; they ignore q.x entirely.
enum class SignVariant {
    hedger_lend,            // x >= 0 branch of the hedger generator
    counterparty_borrow,    // x <= 0 branch of the counterparty generator
    hedger_borrow,          // x <= 0 branch of the hedger generator
    counterparty_lend,      // x >= 0 branch of the counterparty generator
    hedger_lend_reduced,    // x-free, valid for y >= 0
    counterparty_lend_reduced  // x-free, valid for y <= 0
};
double sign_generator(const DriverQuery& q, const RateModel& rates, const PiecewiseCurve& beta,
                      SignVariant variant);

// Gap delta of the paired borrow-discounted drivers,
//   f~_b(t, y + x1, z) + f~_b(t, -y + x2, -z);
// nonpositive whenever x1, x2 <= 0 and r_l <= r_b <= r_ib. Preconditions are
// enforced with std::domain_error.
double driver_gap_borrow(double t, double y, const std::vector<double>& z,
                         const std::vector<double>& spots, double x1, double x2,
                         const RateModel& rates);

// Gap delta of the mixed-endowment pair,
//   g(t, y + x1 B_l, z) + g(t, -y + x2 B_b, -z) - x1 r_l B_l - x2 r_b B_b;
// nonpositive whenever x1 x2 = 0 (and r_l <= r_b). Requires r_l <= r_b.
double driver_gap_mixed(double t, double y, const std::vector<double>& z,
                        const std::vector<double>& spots, double x1, double x2,
                        const RateModel& rates);

// A valid Lipschitz bound for all generators above in (y, z.S), built from the
// rate and drift bounds; used by the property tests.
double driver_lipschitz_bound(const RateModel& rates, const PiecewiseCurve& beta);

}  // namespace fairband
