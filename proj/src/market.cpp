#include "fairband/market.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fairband/errors.hpp"

namespace fairband {

namespace {

constexpr double kFlowDateEps = 1e-12;
constexpr double kBoundCap = 1e12;  // stand-in for admissibility: bounded on the domain

}  // namespace

AssetModel make_asset(double s0, std::function<double(double, double)> sigma, double beta_rate,
                      double domain_lo, double domain_hi) {
    AssetModel a;
    a.mu = [](double, double) { return 0.0; };
    a.sigma = std::move(sigma);
    a.kappa = [](double, double) { return 0.0; };
    a.beta = PiecewiseCurve(beta_rate);
    a.s0 = s0;
    a.domain_lo = domain_lo;
    a.domain_hi = domain_hi;
    return a;
}

double Contract::flows_at(double t, double s) const {
    double acc = 0.0;
    for (const auto& f : flows)
        if (std::abs(f.t - t) <= kFlowDateEps) acc += f.amount(s);
    return acc;
}

Contract Contract::negated() const {
    Contract out;
    out.initial_flow = -initial_flow;
    for (const auto& f : flows) {
        auto fn = f.amount;
        out.flows.push_back({f.t, [fn](double s) { return -fn(s); }});
    }
    if (continuous) {
        auto a = continuous;
        out.continuous = [a](double t, double s) { return -a(t, s); };
    }
    if (payoff) {
        auto h = payoff;
        out.payoff = [h](double s) { return -h(s); };
    }
    return out;
}

Contract Contract::scaled(double lambda) const {
    Contract out;
    out.initial_flow = lambda * initial_flow;
    for (const auto& f : flows) {
        auto fn = f.amount;
        out.flows.push_back({f.t, [fn, lambda](double s) { return lambda * fn(s); }});
    }
    if (continuous) {
        auto a = continuous;
        out.continuous = [a, lambda](double t, double s) { return lambda * a(t, s); };
    }
    if (payoff) {
        auto h = payoff;
        out.payoff = [h, lambda](double s) { return lambda * h(s); };
    }
    return out;
}

CollateralSpec CollateralSpec::negated() const {
    if (!amount) return {};
    auto c = amount;
    return {[c](double t, double s) { return -c(t, s); }};
}

CollateralSpec CollateralSpec::scaled(double lambda) const {
    if (!amount) return {};
    auto c = amount;
    return {[c, lambda](double t, double s) { return lambda * c(t, s); }};
}

bool ValidationReport::mentions(const std::string& invariant) const {
    for (const auto& v : violations)
        if (v.invariant == invariant) return true;
    return false;
}

std::string ValidationReport::str() const {
    std::ostringstream os;
    if (ok()) {
        os << "model valid";
        return os.str();
    }
    for (const auto& v : violations) os << v.invariant << ": " << v.detail << "\n";
    return os.str();
}

namespace {

template <class Fn>
bool bounded_on_domain(Fn&& f, double lo, double hi, double T, int nt = 33, int ns = 65) {
    for (int j = 0; j <= nt; ++j) {
        double t = T * j / nt;
        for (int i = 0; i <= ns; ++i) {
            double s = lo + (hi - lo) * i / ns;
            double v = f(t, s);
            if (!std::isfinite(v) || std::abs(v) > kBoundCap) return false;
        }
    }
    return true;
}

}  // namespace

ValidationReport validate_model(const RateModel& rates, const AssetModel& asset,
                                const Contract& contract, const CollateralSpec& collateral) {
    ValidationReport rep;
    auto flag = [&rep](const std::string& inv, const std::string& detail) {
        rep.violations.push_back({inv, detail});
    };

    const double T = rates.horizon;
    if (!(T > 0.0)) flag("T > 0", "horizon must be positive");

    if (rates.lend_rate.min_value() < 0.0 || rates.borrow_rate.min_value() < 0.0 ||
        rates.collateral_rate.min_value() < 0.0)
        flag("rates >= 0", "negative cash or collateral rate");
    for (const auto& f : rates.funding_rate)
        if (f.min_value() < 0.0) flag("rates >= 0", "negative funding rate");

    if (!curve_leq(rates.lend_rate, rates.borrow_rate))
        flag("r_l <= r_b", "lending rate exceeds borrowing rate somewhere");
    for (std::size_t i = 0; i < rates.funding_rate.size(); ++i)
        if (!curve_leq(rates.lend_rate, rates.funding_rate[i]))
            flag("r_l <= r_ib", "lending rate exceeds funding rate of asset " + std::to_string(i));
    if (rates.require_strict_spread && !rates.strictly_ordered())
        flag("r_l < r_b", "strict spread requested but rates touch");

    // Auxiliary drift band of the pricing measure.
    if (!curve_leq(rates.borrow_rate, asset.beta))
        flag("r_b <= beta", "auxiliary drift below the borrowing rate somewhere");
    for (std::size_t i = 0; i < rates.funding_rate.size(); ++i)
        if (!curve_leq(asset.beta, rates.funding_rate[i]))
            flag("beta <= r_ib", "auxiliary drift above funding rate of asset " + std::to_string(i));

    if (!(asset.domain_lo > 0.0 && asset.domain_lo < asset.s0 && asset.s0 < asset.domain_hi))
        flag("s_min < s0 < s_max", "spot domain does not bracket the initial spot");

    if (asset.sigma) {
        double lo_sig = 1e300, hi_sig = 0.0;
        for (int j = 0; j <= 32; ++j)
            for (int i = 0; i <= 64; ++i) {
                double t = T * j / 32.0;
                double s = asset.domain_lo + (asset.domain_hi - asset.domain_lo) * i / 64.0;
                double v = asset.sigma(t, s);
                lo_sig = std::min(lo_sig, v);
                hi_sig = std::max(hi_sig, std::abs(v));
            }
        if (!(lo_sig > 0.0))
            flag("sigma > 0", "volatility not bounded away from zero on the domain");
        if (!(hi_sig < kBoundCap)) flag("sigma bounded", "volatility unbounded on the domain");
    } else {
        flag("sigma > 0", "no volatility function");
    }

    double prev = 0.0;
    for (const auto& f : contract.flows) {
        if (!(f.t > 0.0 && f.t <= T))
            flag("flow dates in (0, T]", "flow at t = " + std::to_string(f.t));
        if (f.t <= prev) flag("flow dates strictly increasing", "at t = " + std::to_string(f.t));
        prev = f.t;
        if (f.amount) {
            auto fn = f.amount;
            if (!bounded_on_domain([&fn](double, double s) { return fn(s); }, asset.domain_lo,
                                   asset.domain_hi, T))
                flag("flows bounded", "dated flow unbounded on the domain");
        }
    }
    if (contract.continuous &&
        !bounded_on_domain(contract.continuous, asset.domain_lo, asset.domain_hi, T))
        flag("flows bounded", "continuous flow unbounded on the domain");
    if (contract.payoff) {
        auto h = contract.payoff;
        if (!bounded_on_domain([&h](double, double s) { return h(s); }, asset.domain_lo,
                               asset.domain_hi, T))
            flag("flows bounded", "terminal payoff unbounded on the domain");
    }

    if (!collateral.is_zero()) {
        for (int i = 0; i <= 64; ++i) {
            double s = asset.domain_lo + (asset.domain_hi - asset.domain_lo) * i / 64.0;
            if (std::abs(collateral.at(T, s)) > 1e-9) {
                flag("C_T = 0", "margin account nonzero at maturity");
                break;
            }
        }
        if (!bounded_on_domain(collateral.amount, asset.domain_lo, asset.domain_hi, T))
            flag("flows bounded", "collateral unbounded on the domain");
    }

    return rep;
}

double collateral_funding_cost(const CollateralSpec& collateral, const RateModel& rates,
                               std::span<const double> times, std::span<const double> spots,
                               double t) {
    if (times.size() < 2 || times.size() != spots.size())
        throw std::domain_error("collateral funding cost needs a grid of (time, spot) samples");
    if (t < times.front() - 1e-12 || t > times.back() + 1e-12)
        throw std::domain_error("time outside the sampled grid");
    if (collateral.is_zero()) return 0.0;
    double acc = 0.0;
    auto integrand = [&](std::size_t k) {
        return collateral.at(times[k], spots[k]) * rates.rate(AccountKind::collateral, times[k]);
    };
    for (std::size_t k = 0; k + 1 < times.size() && times[k] < t; ++k) {
        double hi = std::min(times[k + 1], t);
        acc += 0.5 * (integrand(k) + integrand(k + 1)) * (hi - times[k]);
    }
    return -acc;
}

double collateral_funding_cost(const CollateralSpec& collateral, const RateModel& rates, double t,
                               int n_cells) {
    std::vector<double> times(n_cells + 1), spots(n_cells + 1, 0.0);
    for (int k = 0; k <= n_cells; ++k) times[k] = t * k / n_cells;
    if (t == 0.0) return 0.0;
    return collateral_funding_cost(collateral, rates, times, spots, t);
}

EffectiveStream effective_stream(const Contract& contract, const CollateralSpec& collateral,
                                 const RateModel& rates, double domain_lo, double domain_hi) {
    EffectiveStream out;
    const double T = rates.horizon;
    // Flows landing exactly at maturity are folded into the terminal jump.
    for (const auto& f : contract.flows)
        if (f.t < T - kFlowDateEps) out.jumps.push_back(f);
    std::sort(out.jumps.begin(), out.jumps.end(),
              [](const DatedFlow& a, const DatedFlow& b) { return a.t < b.t; });
    Contract c = contract;  // copy of the callables for capture
    CollateralSpec col = collateral;
    RateModel r = rates;

    out.terminal_jump = [c, T](double s) { return c.flows_at(T, s) - c.payoff_at(s); };
    out.source = [c, col, r](double t, double s) {
        return c.continuous_at(t, s) - r.rate(AccountKind::collateral, t) * col.at(t, s);
    };

    const double dt = T * 1e-6;
    out.density = [c, col, r, dt](double t, double s) {
        double base = c.continuous_at(t, s) - r.rate(AccountKind::collateral, t) * col.at(t, s);
        if (col.is_zero()) return base;
        double t_lo = std::max(0.0, t - dt), t_hi = t + dt;
        return base + (col.at(t_hi, s) - col.at(t_lo, s)) / (t_hi - t_lo);
    };

    // Collateral that moves with the spot makes the sign of dA^C path-dependent;
    // leave both flags unset in that case.
    if (!collateral.is_zero()) {
        for (int i = 0; i <= 32 && !out.state_dependent_collateral; ++i) {
            double t = T * i / 32.0;
            double lo = collateral.at(t, domain_lo), hi = collateral.at(t, domain_hi);
            double mid = collateral.at(t, 0.5 * (domain_lo + domain_hi));
            if (std::abs(lo - hi) > 1e-12 || std::abs(lo - mid) > 1e-12)
                out.state_dependent_collateral = true;
        }
    }

    if (!out.state_dependent_collateral) {
        const double eps = 1e-10;
        bool nonpos = true, nonneg = true;
        for (int j = 0; j <= 64; ++j) {
            double t = T * (j + 0.5) / 65.0;
            for (int i = 0; i <= 16; ++i) {
                double s = domain_lo + (domain_hi - domain_lo) * i / 16.0;
                double d = out.density(t, s);
                if (d > eps) nonpos = false;
                if (d < -eps) nonneg = false;
            }
        }
        for (const auto& f : out.jumps)
            for (int i = 0; i <= 32; ++i) {
                double s = domain_lo + (domain_hi - domain_lo) * i / 32.0;
                double a = f.amount ? f.amount(s) : 0.0;
                if (a > eps) nonpos = false;
                if (a < -eps) nonneg = false;
            }
        for (int i = 0; i <= 32; ++i) {
            double s = domain_lo + (domain_hi - domain_lo) * i / 32.0;
            double a = out.terminal_jump(s);
            if (a > eps) nonpos = false;
            if (a < -eps) nonneg = false;
        }
        out.decreasing = nonpos;
        out.increasing = nonneg;
    }
    return out;
}

}  // namespace fairband
