#include "fairband/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>

#include "fairband/drivers.hpp"
#include "fairband/errors.hpp"

namespace fairband {

namespace {

std::vector<double> lattice_times(double horizon, int n_steps,
                                  const std::vector<double>& extra) {
    if (n_steps < 1) throw config_error("lattice needs at least one step");
    std::set<double> ts;
    for (int j = 0; j <= n_steps; ++j) ts.insert(horizon * j / n_steps);
    for (double t : extra)
        if (t > 0.0 && t < horizon) ts.insert(t);
    std::vector<double> out;
    for (double t : ts)
        if (out.empty() || t - out.back() > 1e-12 * std::max(1.0, horizon)) out.push_back(t);
    out.back() = horizon;
    return out;
}

double max_relative_vol(const AssetModel& asset, double horizon) {
    double top = 0.0;
    for (int j = 0; j <= 16; ++j)
        for (int i = 0; i <= 32; ++i) {
            double t = horizon * j / 16.0;
            double s = asset.domain_lo + (asset.domain_hi - asset.domain_lo) * i / 32.0;
            top = std::max(top, asset.sigma(t, s) / s);
        }
    if (!(top > 0.0)) throw config_error("volatility must be positive to build a lattice");
    return top;
}

}  // namespace

Lattice build_lattice(const AssetModel& asset, const RateModel& rates, int n_steps,
                      const std::vector<double>& extra_times) {
    Lattice lat;
    // align steps with every rate breakpoint: coefficients are then exact
    // per step for piecewise-constant curves
    std::vector<double> merged = extra_times;
    for (const PiecewiseCurve* curve :
         {&rates.lend_rate, &rates.borrow_rate, &rates.collateral_rate, &asset.beta})
        for (double k : curve->knots) merged.push_back(k);
    for (const auto& f : rates.funding_rate)
        for (double k : f.knots) merged.push_back(k);
    lat.times = lattice_times(rates.horizon, n_steps, merged);
    lat.s0 = asset.s0;
    lat.sigma_ref = max_relative_vol(asset, rates.horizon);

    double dt_max = 0.0;
    for (std::size_t j = 0; j + 1 < lat.times.size(); ++j)
        dt_max = std::max(dt_max, lat.times[j + 1] - lat.times[j]);
    lat.dx = lat.sigma_ref * std::sqrt(3.0 * dt_max);

    const std::size_t m = lat.times.size();
    lat.spots.resize(m);
    const double log_s0 = std::log(lat.s0);
    for (std::size_t j = 0; j < m; ++j) {
        lat.spots[j].resize(2 * j + 1);
        for (std::size_t i = 0; i < 2 * j + 1; ++i)
            lat.spots[j][i] =
                std::exp(log_s0 + (static_cast<double>(i) - static_cast<double>(j)) * lat.dx);
    }

    lat.branch.resize(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) {
        double t = lat.times[j];
        double dt = lat.times[j + 1] - lat.times[j];
        lat.branch[j].resize(2 * j + 1);
        for (std::size_t i = 0; i < 2 * j + 1; ++i) {
            double s = lat.spots[j][i];
            LatticeBranch& b = lat.branch[j][i];
            b.mean = s + asset.pricing_drift(t, s) * dt;
            double sig = asset.sigma(t, s);
            b.variance = sig * sig * dt;
            if (!(b.mean > 0.0))
                throw config_error("lattice drift pushed the spot nonpositive at node (" +
                                   std::to_string(j) + "," + std::to_string(i) + ")");
            // middle child: nearest level-(j+1) node in log space
            int k = static_cast<int>(std::lround(std::log(b.mean / lat.s0) / lat.dx)) +
                    static_cast<int>(j) + 1;
            k = std::clamp(k, 1, 2 * static_cast<int>(j) + 1);
            b.center = k;
            double s_d = lat.spots[j + 1][k - 1];
            double s_m = lat.spots[j + 1][k];
            double s_u = lat.spots[j + 1][k + 1];
            double M = b.mean, V = b.variance;
            b.p_up = (V + (M - s_m) * (M - s_d)) / ((s_u - s_m) * (s_u - s_d));
            b.p_down = (V + (M - s_m) * (M - s_u)) / ((s_d - s_m) * (s_d - s_u));
            b.p_mid = 1.0 - b.p_up - b.p_down;
            const double tol = 1e-10;
            if (b.p_up < -tol || b.p_down < -tol || b.p_mid < -tol || b.p_up > 1.0 + tol ||
                b.p_down > 1.0 + tol || b.p_mid > 1.0 + tol)
                throw config_error("moment matching infeasible at node (" + std::to_string(j) +
                                   "," + std::to_string(i) + ")");
            b.p_up = std::clamp(b.p_up, 0.0, 1.0);
            b.p_down = std::clamp(b.p_down, 0.0, 1.0);
            b.p_mid = 1.0 - b.p_up - b.p_down;
        }
    }
    return lat;
}

LatticeSolution solve_lattice_bsde(const Lattice& lattice, Party party, double x,
                                   const RateModel& rates, const AssetModel& asset,
                                   const Contract& contract, const CollateralSpec& collateral) {
    const std::size_t m = lattice.times.size();
    const double T = rates.horizon;

    // snap each dated flow to the nearest lattice time; never to t = 0,
    // where it would fall out of the pricing problem
    std::vector<std::vector<const DatedFlow*>> flows_at_step(m);
    for (const auto& f : contract.flows) {
        std::size_t best = 1;
        double best_d = 1e300;
        for (std::size_t j = 1; j < m; ++j) {
            double d = std::abs(lattice.times[j] - f.t);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        flows_at_step[best].push_back(&f);
    }

    LatticeSolution sol;
    sol.times = lattice.times;
    sol.spots = lattice.spots;
    sol.y.resize(m);
    sol.z.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        sol.y[j].assign(2 * j + 1, 0.0);
        sol.z[j].assign(2 * j + 1, 0.0);
    }

    // settlement values: terminal payoff and any flow snapped to maturity
    std::vector<double> state(2 * (m - 1) + 1);
    for (std::size_t i = 0; i < state.size(); ++i) {
        double s = lattice.spots[m - 1][i];
        double v = contract.payoff_at(s);
        for (const DatedFlow* f : flows_at_step[m - 1])
            if (f->amount) v -= f->amount(s);
        state[i] = v;
        sol.y[m - 1][i] = v + collateral.at(T, s);
    }

    DriverQuery q;
    q.spots.resize(1);
    q.z.resize(1);
    q.x = x;

    for (std::size_t j = m - 1; j-- > 0;) {
        double t = lattice.times[j];
        double dt = lattice.times[j + 1] - t;
        std::vector<double> next_state(2 * j + 1);
        for (std::size_t i = 0; i < 2 * j + 1; ++i) {
            const LatticeBranch& b = lattice.branch[j][i];
            double s = lattice.spots[j][i];
            double wd = state[b.center - 1], wm = state[b.center], wu = state[b.center + 1];
            double sd = lattice.spots[j + 1][b.center - 1];
            double sm = lattice.spots[j + 1][b.center];
            double su = lattice.spots[j + 1][b.center + 1];
            double expect = b.p_down * wd + b.p_mid * wm + b.p_up * wu;
            // conditional-covariance estimator of the hedge ratio
            double cov = b.p_down * wd * (sd - b.mean) + b.p_mid * wm * (sm - b.mean) +
                         b.p_up * wu * (su - b.mean);
            double z = b.variance > 0.0 ? cov / b.variance : 0.0;

            double c = collateral.at(t, s);
            double src = contract.continuous_at(t, s) -
                         rates.rate(AccountKind::collateral, t) * c;
            q.t = t;
            q.spots[0] = s;
            q.z[0] = z;
            // implicit scalar equation y = E - dt (g(y + C) + src); the fixed
            // point map contracts at rate dt * (max cash rate)
            double y = expect;
            bool done = false;
            for (int it = 0; it < 200; ++it) {
                q.y = y + c;
                double gen = party == Party::hedger
                                 ? hedger_generator(q, rates, asset.beta)
                                 : counterparty_generator(q, rates, asset.beta);
                double y_next = expect - dt * (gen + src);
                if (std::abs(y_next - y) <= 1e-13 * std::max(1.0, std::abs(y_next))) {
                    y = y_next;
                    done = true;
                    break;
                }
                y = y_next;
            }
            if (!done)
                throw numerical_error("lattice value iteration stalled at t = " +
                                      std::to_string(t));
            if (!std::isfinite(y))
                throw numerical_error("non-finite lattice value at t = " + std::to_string(t));

            sol.y[j][i] = y + c;
            sol.z[j][i] = z;
            // cross the dated flows snapped to this time
            double w_state = y;
            for (const DatedFlow* f : flows_at_step[j])
                if (f->amount) w_state -= f->amount(s);
            next_state[i] = w_state;
        }
        state = std::move(next_state);
    }
    return sol;
}

void LatticeSolution::write_csv(std::ostream& os) const {
    os << "t,s,Y,Z\n";
    char buf[160];
    for (std::size_t j = 0; j < times.size(); ++j)
        for (std::size_t i = 0; i < spots[j].size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g\n", times[j], spots[j][i],
                          y[j][i], z[j][i]);
            os << buf;
        }
}

std::string CrossCheckReport::str() const {
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << " max |pde - lattice| = " << max_abs_diff << " at (t,s) = ("
       << at_t << "," << at_s << "), tol = " << tol;
    return os.str();
}

CrossCheckReport cross_check(const ValueSurface& surface, const LatticeSolution& lattice,
                             double tol, double band_sds, double maturity_margin) {
    CrossCheckReport rep;
    rep.tol = tol;
    const double T = lattice.times.back();
    // root spot and an overall log-vol scale recovered from the tree itself
    const double s0 = lattice.spots[0][0];
    double sig = 0.0;
    if (lattice.times.size() > 1 && lattice.spots.size() > 1) {
        double dt = lattice.times[1] - lattice.times[0];
        double dxl = std::log(lattice.spots[1][2] / lattice.spots[1][1]);
        sig = dxl / std::sqrt(3.0 * dt);
    }
    double band = band_sds * sig * std::sqrt(std::max(T, 1e-12));
    double lo = s0 * std::exp(-band), hi = s0 * std::exp(band);

    const double t_cut = T * (1.0 - maturity_margin);
    for (std::size_t j = 0; j < lattice.times.size(); ++j) {
        double t = lattice.times[j];
        if (t > t_cut) continue;
        for (std::size_t i = 0; i < lattice.spots[j].size(); ++i) {
            double s = lattice.spots[j][i];
            if (s < lo || s > hi || !surface.in_hull(t, s)) continue;
            double d = std::abs(surface.value_at(t, s) - lattice.y[j][i]);
            if (d > rep.max_abs_diff) {
                rep.max_abs_diff = d;
                rep.at_t = t;
                rep.at_s = s;
            }
        }
    }
    rep.pass = rep.max_abs_diff <= tol;
    return rep;
}

}  // namespace fairband
