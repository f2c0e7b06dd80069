#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fairband/curves.hpp"

namespace fairband {

// Cash flows (A, C) are booked from the hedger's side; the counterparty
// faces (-A, -C) throughout.
enum class Party { hedger, counterparty };

// One risky asset with absolute-coefficient diffusion dynamics
//   dS = mu(t,S) dt + sigma(t,S) dW,   dividends accruing at kappa(t,S) per year.
// beta is the auxiliary funding drift rate used by the pricing measure; it must
// stay between the borrow and funding rates and defaults to the borrow rate.
struct AssetModel {
    std::function<double(double, double)> mu;     // currency / year
    std::function<double(double, double)> sigma;  // currency / sqrt(year)
    std::function<double(double, double)> kappa;  // currency / year
    PiecewiseCurve beta;                          // 1 / year
    double s0 = 100.0;
    double domain_lo = 1.0;
    double domain_hi = 1000.0;

    double beta_abs(double t, double s) const { return beta.value(t) * s; }
    // Drift of the spot under the pricing measure.
    double pricing_drift(double t, double s) const { return beta_abs(t, s) - kappa(t, s); }
};

AssetModel make_asset(double s0, std::function<double(double, double)> sigma,
                      double beta_rate, double domain_lo, double domain_hi);

struct DatedFlow {
    double t = 0.0;
    std::function<double(double)> amount;  // of spot at the flow date; positive = hedger receives
};

// Cash-flow stream of a bilateral contract, booked from the hedger's side.
// initial_flow is the premium leg (the quantity being priced); dated and
// continuous flows are received by the hedger when positive. terminal_payoff
// is the amount the hedger delivers at maturity, i.e. the terminal condition
// of the pricing problem (a short call carries payoff (s-K)^+).
struct Contract {
    double initial_flow = 0.0;
    std::vector<DatedFlow> flows;
    std::function<double(double, double)> continuous;  // currency / year
    std::function<double(double)> payoff;

    double continuous_at(double t, double s) const { return continuous ? continuous(t, s) : 0.0; }
    double payoff_at(double s) const { return payoff ? payoff(s) : 0.0; }
    // Sum of dated flows landing exactly at time t (matched to 1e-12).
    double flows_at(double t, double s) const;
    Contract negated() const;
    Contract scaled(double lambda) const;
};

// Exogenous margin account C(t,s); positive = held by the hedger. C(T,.) = 0.
struct CollateralSpec {
    std::function<double(double, double)> amount;

    double at(double t, double s) const { return amount ? amount(t, s) : 0.0; }
    bool is_zero() const { return !amount; }
    CollateralSpec negated() const;
    CollateralSpec scaled(double lambda) const;
};

enum class EndowmentSign { nonnegative, nonpositive, zero };

struct Endowment {
    double x = 0.0;

    EndowmentSign sign() const {
        if (x == 0.0) return EndowmentSign::zero;
        return x > 0.0 ? EndowmentSign::nonnegative : EndowmentSign::nonpositive;
    }
};

struct Violation {
    std::string invariant;  // short rule name, e.g. "r_l <= r_b"
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool mentions(const std::string& invariant) const;
    std::string str() const;
};

// Checks every structural assumption the pricing theory rests on; reports
// violations without throwing or mutating anything.
ValidationReport validate_model(const RateModel& rates, const AssetModel& asset,
                                const Contract& contract, const CollateralSpec& collateral);

// Accrued margin interest F^C_t = -int_0^t C_u r_c(u) du, trapezoid on the
// supplied (times, spots) grid; `t` must not exceed the last grid time.
double collateral_funding_cost(const CollateralSpec& collateral, const RateModel& rates,
                               std::span<const double> times, std::span<const double> spots,
                               double t);
// Convenience for state-independent collateral: trapezoid on n uniform cells.
double collateral_funding_cost(const CollateralSpec& collateral, const RateModel& rates,
                               double t, int n_cells = 512);

// The effective stream A + C + F^C feeding every pricing problem, split into
// the pieces the solvers consume plus monotonicity flags obtained by sampling
// increments on [domain_lo, domain_hi] x [0, T].
struct EffectiveStream {
    std::vector<DatedFlow> jumps;  // contract dated flows, ascending dates in (0, T]
    std::function<double(double)> terminal_jump;        // flows at T minus delivered payoff
    std::function<double(double, double)> source;       // a - r_c C  (collateral drift excluded)
    std::function<double(double, double)> density;      // a - r_c C + dC/dt, for classification
    bool state_dependent_collateral = false;
    bool decreasing = false;  // A^C - A^C_0 nonincreasing on (0, T]
    bool increasing = false;
};

EffectiveStream effective_stream(const Contract& contract, const CollateralSpec& collateral,
                                 const RateModel& rates, double domain_lo, double domain_hi);

}  // namespace fairband
