#include "fairband/pde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairband/drivers.hpp"
#include "fairband/errors.hpp"
#include "fairband/scalar_ode.hpp"

namespace fairband {

namespace {

struct Tridiag {
    std::vector<double> lo, mid, hi;  // lo[0] and hi[n-1] unused

    explicit Tridiag(std::size_t n) : lo(n, 0.0), mid(n, 0.0), hi(n, 0.0) {}

    std::vector<double> apply(const std::vector<double>& x) const {
        std::size_t n = mid.size();
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = mid[i] * x[i];
            if (i > 0) acc += lo[i] * x[i - 1];
            if (i + 1 < n) acc += hi[i] * x[i + 1];
            y[i] = acc;
        }
        return y;
    }
};

// Thomas factorization of (I - c*L); no pivoting, the system is strictly
// diagonally dominant for the parabolic rows.
struct TridiagSolver {
    std::vector<double> lo, diag, hi;

    TridiagSolver(const Tridiag& L, double c, const std::vector<bool>& identity_row) {
        std::size_t n = L.mid.size();
        lo.resize(n);
        diag.resize(n);
        hi.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (identity_row[i]) {
                lo[i] = 0.0;
                diag[i] = 1.0;
                hi[i] = 0.0;
            } else {
                lo[i] = -c * L.lo[i];
                diag[i] = 1.0 - c * L.mid[i];
                hi[i] = -c * L.hi[i];
            }
        }
    }

    std::vector<double> solve(std::vector<double> rhs) const {
        std::size_t n = diag.size();
        std::vector<double> c_star(n), d_star(n);
        double beta = diag[0];
        if (beta == 0.0) throw numerical_error("singular tridiagonal system");
        c_star[0] = hi[0] / beta;
        d_star[0] = rhs[0] / beta;
        for (std::size_t i = 1; i < n; ++i) {
            beta = diag[i] - lo[i] * c_star[i - 1];
            if (beta == 0.0) throw numerical_error("singular tridiagonal system");
            c_star[i] = hi[i] / beta;
            d_star[i] = (rhs[i] - lo[i] * d_star[i - 1]) / beta;
        }
        for (std::size_t i = n - 1; i-- > 0;) d_star[i] -= c_star[i] * d_star[i + 1];
        return d_star;
    }
};

struct PdeContext {
    Party party;
    const RateModel& rates;
    const AssetModel& asset;
    const Contract& contract;
    const CollateralSpec& collateral;
    double x;
    const GridSpec& grid;
    std::vector<double> spots;

    // first-derivative weights per node, shared by the advection stencil and
    // the generator's hedge-ratio argument (exact cancellation of beta)
    std::vector<double> d1_lo, d1_mid, d1_hi;

    explicit PdeContext(Party p, const RateModel& r, const AssetModel& a, const Contract& c,
                        const CollateralSpec& col, double x_, const GridSpec& g)
        : party(p), rates(r), asset(a), contract(c), collateral(col), x(x_), grid(g) {
        spots = build_spots(g);
        std::size_t n = spots.size();
        d1_lo.resize(n);
        d1_mid.resize(n);
        d1_hi.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0) {
                // one-sided first order, consistent with the boundary row of L
                d1_lo[i] = 0.0;
                d1_mid[i] = -1.0 / (spots[1] - spots[0]);
                d1_hi[i] = 1.0 / (spots[1] - spots[0]);
            } else if (i + 1 == n) {
                d1_lo[i] = -1.0 / (spots[n - 1] - spots[n - 2]);
                d1_mid[i] = 1.0 / (spots[n - 1] - spots[n - 2]);
                d1_hi[i] = 0.0;
            } else {
                derivative_weights(spots, i, &d1_lo[i], &d1_mid[i], &d1_hi[i]);
            }
        }
    }

    Tridiag build_operator(double t) const {
        std::size_t n = spots.size();
        Tridiag L(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = spots[i];
            double adv = asset.pricing_drift(t, s);
            if (i == 0) {
                L.mid[i] = adv * d1_mid[i];
                L.hi[i] = adv * d1_hi[i];
            } else if (i + 1 == n) {
                L.lo[i] = adv * d1_lo[i];
                L.mid[i] = adv * d1_mid[i];
            } else {
                double sig = asset.sigma(t, s);
                double diff = 0.5 * sig * sig;
                double hm = s - spots[i - 1], hp = spots[i + 1] - s;
                double d2_lo = 2.0 / (hm * (hm + hp));
                double d2_mid = -2.0 / (hm * hp);
                double d2_hi = 2.0 / (hp * (hm + hp));
                L.lo[i] = diff * d2_lo + adv * d1_lo[i];
                L.mid[i] = diff * d2_mid + adv * d1_mid[i];
                L.hi[i] = diff * d2_hi + adv * d1_hi[i];
            }
        }
        return L;
    }

    double hedge_ratio(const std::vector<double>& v, std::size_t i) const {
        double z = d1_mid[i] * v[i];
        if (i > 0) z += d1_lo[i] * v[i - 1];
        if (i + 1 < v.size()) z += d1_hi[i] * v[i + 1];
        return z;
    }

    // generator + sources at every node for the given state
    std::vector<double> rhs(double t, const std::vector<double>& v) const {
        std::size_t n = spots.size();
        std::vector<double> out(n);
        DriverQuery q;
        q.t = t;
        q.spots.resize(1);
        q.z.resize(1);
        q.x = x;
        for (std::size_t i = 0; i < n; ++i) {
            double s = spots[i];
            double c = collateral.at(t, s);
            q.spots[0] = s;
            q.y = v[i] + c;
            q.z[0] = hedge_ratio(v, i);
            double gen = party == Party::hedger
                             ? hedger_generator(q, rates, asset.beta)
                             : counterparty_generator(q, rates, asset.beta);
            double src = contract.continuous_at(t, s) -
                         rates.rate(AccountKind::collateral, t) * c;
            out[i] = gen + src;
        }
        return out;
    }
};

}  // namespace

ValueSurface solve_pde(Party party, const RateModel& rates, const AssetModel& asset,
                       const Contract& contract, const CollateralSpec& collateral, double x,
                       const GridSpec& grid) {
    if (!(grid.s_min < asset.s0 && asset.s0 < grid.s_max))
        throw config_error("grid must bracket the initial spot");
    if (grid.theta < 0.0 || grid.theta > 1.0) throw config_error("theta outside [0,1]");

    PdeContext ctx(party, rates, asset, contract, collateral, x, grid);
    const std::vector<double>& spots = ctx.spots;
    const std::size_t n = spots.size();
    const double T = rates.horizon;

    // align the time grid with the dated flows and every rate breakpoint, so
    // piecewise-constant coefficients are exact per step
    std::vector<double> must_include;
    for (const auto& f : contract.flows) must_include.push_back(f.t);
    for (const PiecewiseCurve* curve :
         {&rates.lend_rate, &rates.borrow_rate, &rates.collateral_rate, &asset.beta})
        for (double k : curve->knots) must_include.push_back(k);
    for (const auto& f : rates.funding_rate)
        for (double k : f.knots) must_include.push_back(k);
    std::vector<double> times = build_times(T, grid.n_time, must_include);
    const std::size_t m = times.size();

    // explicit-part positivity bound when the scheme has an explicit piece
    if (grid.theta < 0.5) {
        double dt = T / grid.n_time;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double sig = asset.sigma(0.0, spots[i]);
            double hm = spots[i] - spots[i - 1], hp = spots[i + 1] - spots[i];
            if ((1.0 - 2.0 * grid.theta) * dt * sig * sig / (hm * hp) > 1.0)
                throw config_error("grid too coarse for the explicit part at s = " +
                                   std::to_string(spots[i]));
        }
    }

    std::vector<bool> identity_row(n, false);
    const bool dirichlet = grid.boundary == BoundaryKind::dirichlet_discounted;
    if (dirichlet) identity_row.front() = identity_row.back() = true;

    // Dirichlet boundary: terminal value discounted at the sign-matching cash
    // rate (a simple closure; the default linearity boundary has no such
    // approximation).
    auto dirichlet_value = [&](double t, double s) {
        double h = contract.payoff_at(s) - contract.flows_at(T, s);
        double r = h >= 0.0 ? rates.lend_rate.integral(t, T) : rates.borrow_rate.integral(t, T);
        return h * std::exp(-r);
    };

    ValueSurface out;
    out.times = times;
    out.spots = spots;
    out.v.assign(m, std::vector<double>(n, 0.0));
    out.delta.assign(m, std::vector<double>(n, 0.0));

    // settlement values at maturity
    std::vector<double> state(n);
    for (std::size_t i = 0; i < n; ++i)
        state[i] = contract.payoff_at(spots[i]) - contract.flows_at(T, spots[i]);

    auto store_row = [&](std::size_t j, const std::vector<double>& v) {
        for (std::size_t i = 0; i < n; ++i) {
            double w = v[i] + collateral.at(times[j], spots[i]);
            if (!std::isfinite(w))
                throw numerical_error("non-finite surface value at t = " +
                                      std::to_string(times[j]));
            out.v[j][i] = w;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double wl, wm, wh;
            derivative_weights(spots, i, &wl, &wm, &wh);
            std::size_t a = (i == 0) ? 0 : (i + 1 == n ? n - 3 : i - 1);
            out.delta[j][i] = wl * out.v[j][a] + wm * out.v[j][a + 1] + wh * out.v[j][a + 2];
        }
    };

    store_row(m - 1, state);

    for (std::size_t j = m - 1; j-- > 0;) {
        double t_new = times[j], t_old = times[j + 1];
        double dt = t_old - t_new;
        // coefficients at the theta point of the step: second order for
        // Crank-Nicolson, and exact for piecewise-constant rates now that the
        // breakpoints sit on grid times
        double t_star = grid.theta * t_new + (1.0 - grid.theta) * t_old;
        if (t_star >= t_old) t_star = t_new;  // stay inside the open piece
        Tridiag L = ctx.build_operator(t_star);
        TridiagSolver solver(L, grid.theta * dt, identity_row);

        std::vector<double> rhs_base = state;
        if (grid.theta < 1.0) {
            std::vector<double> Lv = L.apply(state);
            std::vector<double> R = ctx.rhs(t_star, state);
            for (std::size_t i = 0; i < n; ++i)
                rhs_base[i] += (1.0 - grid.theta) * dt * (Lv[i] - R[i]);
        }

        std::vector<double> v_new = state;  // initial Picard guess
        bool converged = false;
        for (int it = 0; it < grid.picard_max_iter; ++it) {
            std::vector<double> rhs = rhs_base;
            if (grid.theta > 0.0) {
                std::vector<double> R = ctx.rhs(t_star, v_new);
                for (std::size_t i = 0; i < n; ++i) rhs[i] -= grid.theta * dt * R[i];
            }
            if (dirichlet) {
                rhs.front() = dirichlet_value(t_new, spots.front());
                rhs.back() = dirichlet_value(t_new, spots.back());
            }
            std::vector<double> next = solver.solve(std::move(rhs));
            double diff = 0.0, scale = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                diff = std::max(diff, std::abs(next[i] - v_new[i]));
                scale = std::max(scale, std::abs(next[i]));
            }
            v_new = std::move(next);
            if (diff <= grid.picard_tol * scale) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw numerical_error("Picard iteration did not converge at t = " +
                                  std::to_string(t_new));

        store_row(j, v_new);

        // cross the dated flows: continuation state left of t_new
        state = std::move(v_new);
        if (t_new > 0.0) {
            for (const auto& f : contract.flows)
                if (std::abs(f.t - t_new) <= 1e-12 && f.amount)
                    for (std::size_t i = 0; i < n; ++i) state[i] -= f.amount(spots[i]);
        }
    }

    return out;
}

ValueSurface deterministic_surface(Party party, const RateModel& rates, const Contract& contract,
                                   const CollateralSpec& collateral, double x, double s_min,
                                   double s_max) {
    DeterministicPrice res = deterministic_price(party, rates, contract, collateral, x, 257);
    // the surface carries price + collateral
    std::vector<double> w(res.values.size());
    for (std::size_t k = 0; k < w.size(); ++k)
        w[k] = res.values[k] + collateral.at(res.times[k], 0.5 * (s_min + s_max));
    return flat_surface(res.times, w, s_min, s_max);
}

}  // namespace fairband
