#pragma once

#include <cstddef>
#include <vector>

namespace fairband {

// Piecewise-constant, right-continuous curve on [0, inf).
// value(t) = values[k] for t in [knots[k], knots[k+1]); knots[0] must be 0.
struct PiecewiseCurve {
    std::vector<double> knots;
    std::vector<double> values;

    PiecewiseCurve() : knots{0.0}, values{0.0} {}
    explicit PiecewiseCurve(double constant) : knots{0.0}, values{constant} {}
    PiecewiseCurve(std::vector<double> k, std::vector<double> v);

    double value(double t) const;
    double integral(double t) const;  // \int_0^t, exact
    double integral(double t1, double t2) const { return integral(t2) - integral(t1); }

    double min_value() const;
    double max_value() const;

    // Knot times falling strictly inside (t1, t2), ascending.
    std::vector<double> breakpoints_in(double t1, double t2) const;

    bool is_constant() const { return values.size() == 1; }
};

// a(t) <= b(t) for all t >= 0 (resp. strictly).
bool curve_leq(const PiecewiseCurve& a, const PiecewiseCurve& b);
bool curve_lt(const PiecewiseCurve& a, const PiecewiseCurve& b);

enum class AccountKind { lend, borrow, funding, collateral };

// Deterministic rate term structure of the cash, funding and collateral
// accounts over [0, horizon]. Account values are B(t) = exp(int_0^t r), so
// B(0) = 1 and all accounts are continuous and nondecreasing for r >= 0.
struct RateModel {
    PiecewiseCurve lend_rate;                 // unsecured lending
    PiecewiseCurve borrow_rate;               // unsecured borrowing
    std::vector<PiecewiseCurve> funding_rate; // per risky asset, long positions
    PiecewiseCurve collateral_rate;           // margin account accrual
    double horizon = 1.0;
    // When set, validation additionally demands lend < borrow everywhere.
    bool require_strict_spread = false;

    std::size_t num_assets() const { return funding_rate.size(); }

    const PiecewiseCurve& curve(AccountKind kind, std::size_t asset = 0) const;
    double rate(AccountKind kind, double t, std::size_t asset = 0) const;

    // exp(int_0^t r) for the selected account; throws outside [0, horizon].
    double account(AccountKind kind, double t, std::size_t asset = 0) const;

    bool strictly_ordered() const;  // lend < borrow everywhere
    bool strong_funding() const;    // borrow <= funding everywhere, all assets
};

// View of one account value process B(t).
struct AccountCurve {
    const RateModel* rates = nullptr;
    AccountKind kind = AccountKind::lend;
    std::size_t asset = 0;

    double value(double t) const { return rates->account(kind, t, asset); }
};

// Convenience constructors for flat-rate models used throughout the tests.
RateModel flat_rates(double lend, double borrow, double funding,
                     double collateral = 0.0, double horizon = 1.0);

}  // namespace fairband
