#include "fairband/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "fairband/drivers.hpp"
#include "fairband/errors.hpp"
#include "fairband/scalar_ode.hpp"

namespace fairband {

StrategySnapshot extract_strategy(const ValueSurface& surface, const RateModel& rates,
                                  const CollateralSpec& collateral, double x, Party party,
                                  double t, double s) {
    const bool hedger = party == Party::hedger;
    double w = surface.value_at(t, s);
    double slope = surface.delta_at(t, s);

    StrategySnapshot snap;
    snap.xi = hedger ? slope : -slope;

    double B_l = rates.account(AccountKind::lend, t);
    double B_b = rates.account(AccountKind::borrow, t);
    double B_ib = rates.account(AccountKind::funding, t);
    double B_c = rates.account(AccountKind::collateral, t);

    double exposure = snap.xi * s;
    snap.psi_ib = -pos(exposure) / B_ib;

    double endow_leg = x >= 0.0 ? x * B_l : x * B_b;
    double core = (hedger ? w : -w) + endow_leg + neg(exposure);
    snap.psi_l = pos(core) / B_l;
    snap.psi_b = -neg(core) / B_b;

    double c_faced = hedger ? collateral.at(t, s) : -collateral.at(t, s);
    snap.eta_b = -pos(c_faced) / B_c;
    snap.eta_l = neg(c_faced) / B_c;
    return snap;
}

std::vector<std::vector<double>> simulate_spot_paths(const AssetModel& asset, double horizon,
                                                     int n_paths, int n_steps, std::uint64_t seed,
                                                     bool pricing_measure, PathKind kind) {
    std::mt19937_64 rng(seed);
    // explicit Box-Muller on 53-bit uniforms keeps runs byte-reproducible
    auto uniform = [&rng]() {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };
    auto gauss = [&]() {
        double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    };

    std::vector<std::vector<double>> paths(n_paths, std::vector<double>(n_steps + 1, asset.s0));
    double dt = horizon / n_steps;
    for (auto& path : paths) {
        double s = asset.s0;
        for (int k = 0; k < n_steps; ++k) {
            double t = k * dt;
            double drift_abs = pricing_measure ? asset.pricing_drift(t, s) : asset.mu(t, s);
            double sig_rel = asset.sigma(t, s) / s;
            double nu = drift_abs / s - 0.5 * sig_rel * sig_rel;
            double shock = kind == PathKind::gaussian
                               ? gauss()
                               : ((rng() & 1u) ? 1.0 : -1.0);
            s *= std::exp(nu * dt + sig_rel * std::sqrt(dt) * shock);
            path[k + 1] = s;
        }
    }
    return paths;
}

namespace {

struct PartyStream {
    // flows as faced by the simulating party (hedger: as booked; counterparty:
    // negated), evaluated lazily on the path
    const Contract* contract;
    const CollateralSpec* collateral;
    double sign;  // +1 hedger, -1 counterparty

    double dated(double t_lo, double t_hi, double s) const {
        double acc = 0.0;
        for (const auto& f : contract->flows)
            if (f.t > t_lo + 1e-12 && f.t <= t_hi + 1e-12 && f.amount) acc += f.amount(s);
        return sign * acc;
    }
    double continuous(double t, double s) const { return sign * contract->continuous_at(t, s); }
    double payoff(double s) const { return sign * contract->payoff_at(s); }
    double margin(double t, double s) const { return sign * collateral->at(t, s); }
};

}  // namespace

WealthPath simulate_replication(const ValueSurface& surface, const RateModel& rates,
                                const AssetModel& asset, const Contract& contract,
                                const CollateralSpec& collateral, double x, Party party,
                                std::span<const double> times, std::span<const double> spots) {
    double premium = price_at(surface, times.front(), spots.front(), collateral);
    if (party == Party::counterparty) premium = -premium;
    return simulate_replication(surface, rates, asset, contract, collateral, x, party, times,
                                spots, premium);
}

WealthPath simulate_replication(const ValueSurface& surface, const RateModel& rates,
                                const AssetModel& asset, const Contract& contract,
                                const CollateralSpec& collateral, double x, Party party,
                                std::span<const double> times, std::span<const double> spots,
                                double premium) {
    if (times.size() != spots.size() || times.size() < 2)
        throw std::domain_error("replication needs matching time and spot samples");
    for (double s : spots)
        if (s < surface.spots.front() || s > surface.spots.back())
            throw std::domain_error("spot path leaves the surface hull");

    PartyStream stream{&contract, &collateral, party == Party::hedger ? 1.0 : -1.0};
    const double T = rates.horizon;

    WealthPath out;
    out.times.assign(times.begin(), times.end());
    out.portfolio_value.resize(times.size());
    out.wealth.resize(times.size());

    double vp = x + premium + stream.margin(times.front(), spots.front());
    out.portfolio_value[0] = vp;
    out.wealth[0] = vp - stream.margin(times.front(), spots.front());

    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        double t = times[k], t_next = times[k + 1];
        double s = spots[k], s_next = spots[k + 1];
        double dt = t_next - t;

        StrategySnapshot pos_k = extract_strategy(surface, rates, collateral, x, party, t, s);
        double exposure = pos_k.xi * s;
        double cash = vp + neg(exposure);  // lend/borrow balance after funding the stock

        // grow each leg by its exact account factor over the step
        double grow_l = std::exp(rates.lend_rate.integral(t, t_next));
        double grow_b = std::exp(rates.borrow_rate.integral(t, t_next));
        double grow_f = std::exp(rates.funding_rate[0].integral(t, t_next));

        double vp_next = pos_k.xi * s_next + pos_k.xi * asset.kappa(t, s) * dt -
                         pos(exposure) * grow_f + pos(cash) * grow_l - neg(cash) * grow_b;

        // contract cash flows over (t, t_next]
        vp_next += stream.continuous(t, s) * dt;
        vp_next += stream.dated(t, t_next, s_next);
        // margin account: rehypothecated cash plus accrued interest
        vp_next += stream.margin(t_next, s_next) - stream.margin(t, s);
        vp_next -= rates.rate(AccountKind::collateral, t) * stream.margin(t, s) * dt;

        if (t_next >= T - 1e-12) vp_next -= stream.payoff(s_next);

        vp = vp_next;
        out.portfolio_value[k + 1] = vp;
        out.wealth[k + 1] = vp - stream.margin(t_next, s_next);
    }

    double v0t = x >= 0.0 ? x * rates.account(AccountKind::lend, T)
                          : x * rates.account(AccountKind::borrow, T);
    out.terminal_error = out.wealth.back() - v0t;
    return out;
}

UPath netted_wealth_U(const Contract& contract, const CollateralSpec& collateral,
                      const RateModel& rates, int n_steps, double premium) {
    const double T = rates.horizon;
    const double s_ref = 1.0;

    // spot-dependent data must be frozen along a path before coming here
    auto flat = [](auto&& fn) {
        double base = fn(1.0);
        for (double s : {0.5, 37.0, 103.0, 511.0})
            if (std::abs(fn(s) - base) > 1e-11 * (1.0 + std::abs(base))) return false;
        return true;
    };
    for (const auto& f : contract.flows)
        if (f.amount && !flat(f.amount))
            throw std::domain_error("netted wealth needs state-independent flows");
    if (contract.payoff && !flat(contract.payoff))
        throw std::domain_error("netted wealth needs a state-independent payoff");
    if (!collateral.is_zero() &&
        !flat([&](double s) { return collateral.at(0.37 * T, s); }))
        throw std::domain_error("netted wealth needs state-independent collateral");

    std::vector<std::pair<double, double>> flows;
    for (const auto& f : contract.flows)
        flows.emplace_back(f.t, f.amount ? f.amount(s_ref) : 0.0);
    double payoff = contract.payoff_at(s_ref);
    std::sort(flows.begin(), flows.end());

    UPath out;
    out.times.resize(n_steps + 1);
    out.u.resize(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) out.times[k] = T * k / n_steps;

    bool exact = collateral.is_zero();
    if (exact && contract.continuous)
        for (int j = 0; j <= 32 && exact; ++j)
            exact = std::abs(contract.continuous(T * j / 32.0, s_ref)) < 1e-14;

    const PiecewiseCurve zero(0.0);
    Contract c = contract;
    CollateralSpec col = collateral;
    RateModel r = rates;
    auto rhs = [c, col, r](double t, double u) {
        double cc = col.at(t, 1.0);
        double w = u - cc;
        return r.rate(AccountKind::lend, t) * pos(w) - r.rate(AccountKind::borrow, t) * neg(w) -
               c.continuous_at(t, 1.0) + r.rate(AccountKind::collateral, t) * cc;
    };
    auto kink = [col](double t, double) { return col.at(t, 1.0); };

    double u = -premium;
    double t_cur = 0.0;
    std::size_t next_flow = 0;
    for (int k = 0; k <= n_steps; ++k) {
        double t_target = out.times[k];
        while (next_flow < flows.size() && flows[next_flow].first <= t_target + 1e-14) {
            double tf = flows[next_flow].first;
            u = exact ? canonical_ode_integrate(r.lend_rate, r.borrow_rate, zero, t_cur, tf, u)
                      : kinked_ode_integrate(rhs, kink, t_cur, tf, u,
                                             std::max(8, int(512 * (tf - t_cur) / T)));
            u -= flows[next_flow].second;
            t_cur = tf;
            ++next_flow;
        }
        u = exact ? canonical_ode_integrate(r.lend_rate, r.borrow_rate, zero, t_cur, t_target, u)
                  : kinked_ode_integrate(rhs, kink, t_cur, t_target, u,
                                         std::max(8, int(512 * (t_target - t_cur) / T)));
        t_cur = t_target;
        out.u[k] = u;
    }
    // settle the terminal delivery
    out.u.back() -= -payoff;
    return out;
}

ArbitrageReport arbitrage_diagnostic(const ValueSurface& surface, const RateModel& rates,
                                     const AssetModel& asset, const Contract& contract,
                                     const CollateralSpec& collateral, double x, double premium,
                                     const std::vector<std::vector<double>>& paths,
                                     const std::vector<double>& path_times) {
    ArbitrageReport rep;
    const double T = rates.horizon;
    const bool lend_side = x >= 0.0;
    const AccountKind disc_kind = lend_side ? AccountKind::lend : AccountKind::borrow;
    if (!lend_side && !rates.strong_funding())
        throw std::domain_error("borrow-discounted diagnostic needs r_b <= r_ib");

    double excess_sum = 0.0;
    for (const auto& spots : paths) {
        WealthPath wp = simulate_replication(surface, rates, asset, contract, collateral, x,
                                             Party::hedger, path_times, spots, premium);
        // per-path netted offset leg (flows read along this path)
        UPath up;
        {
            // evaluate dated flows at the path spot at their (snapped) date
            Contract tmp;
            tmp.initial_flow = premium;
            for (const auto& f : contract.flows) {
                double s_at = spots.front();
                for (std::size_t k = 0; k < path_times.size(); ++k)
                    if (path_times[k] >= f.t - 1e-12) {
                        s_at = spots[k];
                        break;
                    }
                double amt = f.amount ? f.amount(s_at) : 0.0;
                tmp.flows.push_back({f.t, [amt](double) { return amt; }});
            }
            double h = contract.payoff_at(spots.back());
            tmp.payoff = [h](double) { return h; };
            if (contract.continuous) {
                // freeze the continuous flow along the path (piecewise in t)
                auto cont = contract.continuous;
                std::vector<double> ts(path_times.begin(), path_times.end());
                std::vector<double> ss(spots.begin(), spots.end());
                tmp.continuous = [cont, ts, ss](double t, double) {
                    std::size_t k = 0;
                    while (k + 1 < ts.size() && ts[k + 1] <= t) ++k;
                    return cont(t, ss[k]);
                };
            }
            CollateralSpec frozen_col;
            if (!collateral.is_zero()) {
                auto col = collateral.amount;
                std::vector<double> ts(path_times.begin(), path_times.end());
                std::vector<double> ss(spots.begin(), spots.end());
                frozen_col.amount = [col, ts, ss](double t, double) {
                    std::size_t k = 0;
                    while (k + 1 < ts.size() && ts[k + 1] <= t) ++k;
                    return col(t, ss[k]);
                };
            }
            up = netted_wealth_U(tmp, frozen_col, rates, int(path_times.size()) - 1, premium);
        }

        // discounted netted wealth minus the hedge integral must not rise
        double integral = 0.0;
        double prev_d = 0.0;
        for (std::size_t k = 0; k < path_times.size(); ++k) {
            double t = path_times[k];
            double disc = 1.0 / rates.account(disc_kind, std::min(t, T));
            double vnet = wp.wealth[k] + up.u[k];
            double d = disc * vnet - integral;
            rep.min_discounted_netted = std::min(rep.min_discounted_netted, disc * vnet);
            if (k > 0) rep.max_violation = std::max(rep.max_violation, d - prev_d);
            prev_d = d;
            if (k + 1 < path_times.size()) {
                // compensated increment of the discounted cum-dividend spot
                double t2 = path_times[k + 1];
                double disc2 = 1.0 / rates.account(disc_kind, std::min(t2, T));
                StrategySnapshot pos_k =
                    extract_strategy(surface, rates, collateral, x, Party::hedger, t, spots[k]);
                double dS = disc2 * spots[k + 1] - disc * spots[k] +
                            disc * asset.kappa(t, spots[k]) * (t2 - t);
                integral += pos_k.xi * dS;
            }
        }
        double v0t = x >= 0.0 ? x * rates.account(AccountKind::lend, T)
                              : x * rates.account(AccountKind::borrow, T);
        rep.netted_excess_max =
            std::max(rep.netted_excess_max, wp.wealth.back() + up.u.back() - v0t);
        rep.replication_excess_min = std::min(rep.replication_excess_min, wp.terminal_error);
        rep.replication_excess_max = std::max(rep.replication_excess_max, wp.terminal_error);
        excess_sum += wp.terminal_error;
    }
    rep.replication_excess_mean = paths.empty() ? 0.0 : excess_sum / double(paths.size());
    return rep;
}

void write_path_report(std::ostream& os, const std::vector<PathRecord>& records) {
    os << "path_id,e_T,max_violation\n";
    char buf[120];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g\n", r.path_id, r.e_t, r.max_violation);
        os << buf;
    }
}

}  // namespace fairband
