#include "fairband/curves.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fairband/errors.hpp"

namespace fairband {

PiecewiseCurve::PiecewiseCurve(std::vector<double> k, std::vector<double> v)
    : knots(std::move(k)), values(std::move(v)) {
    if (knots.empty() || knots.size() != values.size())
        throw config_error("piecewise curve needs one value per knot");
    if (knots.front() != 0.0)
        throw config_error("piecewise curve must start at t = 0");
    if (!std::is_sorted(knots.begin(), knots.end()) ||
        std::adjacent_find(knots.begin(), knots.end()) != knots.end())
        throw config_error("piecewise curve knots must be strictly increasing");
    for (double x : values)
        if (!std::isfinite(x)) throw config_error("piecewise curve value not finite");
}

double PiecewiseCurve::value(double t) const {
    // index of the last knot <= t (t < 0 clamps to the first piece)
    auto it = std::upper_bound(knots.begin(), knots.end(), t);
    std::size_t idx = (it == knots.begin()) ? 0 : static_cast<std::size_t>(it - knots.begin() - 1);
    return values[idx];
}

double PiecewiseCurve::integral(double t) const {
    if (t <= 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < knots.size(); ++k) {
        double lo = knots[k];
        double hi = (k + 1 < knots.size()) ? knots[k + 1] : t;
        if (lo >= t) break;
        acc += values[k] * (std::min(hi, t) - lo);
    }
    return acc;
}

double PiecewiseCurve::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double PiecewiseCurve::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

std::vector<double> PiecewiseCurve::breakpoints_in(double t1, double t2) const {
    std::vector<double> out;
    for (double k : knots)
        if (k > t1 && k < t2) out.push_back(k);
    return out;
}

namespace {

// Merged knot grid of two curves; both are constant on each cell.
std::vector<double> merged_knots(const PiecewiseCurve& a, const PiecewiseCurve& b) {
    std::set<double> s(a.knots.begin(), a.knots.end());
    s.insert(b.knots.begin(), b.knots.end());
    return {s.begin(), s.end()};
}

}  // namespace

bool curve_leq(const PiecewiseCurve& a, const PiecewiseCurve& b) {
    for (double t : merged_knots(a, b))
        if (a.value(t) > b.value(t)) return false;
    return true;
}

bool curve_lt(const PiecewiseCurve& a, const PiecewiseCurve& b) {
    for (double t : merged_knots(a, b))
        if (a.value(t) >= b.value(t)) return false;
    return true;
}

const PiecewiseCurve& RateModel::curve(AccountKind kind, std::size_t asset) const {
    switch (kind) {
        case AccountKind::lend: return lend_rate;
        case AccountKind::borrow: return borrow_rate;
        case AccountKind::collateral: return collateral_rate;
        case AccountKind::funding:
            if (asset >= funding_rate.size())
                throw config_error("no funding curve for asset index " + std::to_string(asset));
            return funding_rate[asset];
    }
    throw config_error("unknown account kind");
}

double RateModel::rate(AccountKind kind, double t, std::size_t asset) const {
    return curve(kind, asset).value(t);
}

double RateModel::account(AccountKind kind, double t, std::size_t asset) const {
    if (t < 0.0 || t > horizon)
        throw std::domain_error("account time " + std::to_string(t) + " outside [0, " +
                                std::to_string(horizon) + "]");
    return std::exp(curve(kind, asset).integral(t));
}

bool RateModel::strictly_ordered() const { return curve_lt(lend_rate, borrow_rate); }

bool RateModel::strong_funding() const {
    for (const auto& f : funding_rate)
        if (!curve_leq(borrow_rate, f)) return false;
    return true;
}

RateModel flat_rates(double lend, double borrow, double funding, double collateral,
                     double horizon) {
    RateModel m;
    m.lend_rate = PiecewiseCurve(lend);
    m.borrow_rate = PiecewiseCurve(borrow);
    m.funding_rate = {PiecewiseCurve(funding)};
    m.collateral_rate = PiecewiseCurve(collateral);
    m.horizon = horizon;
    return m;
}

}  // namespace fairband
