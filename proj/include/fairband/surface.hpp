#pragma once

#include <iosfwd>
#include <vector>

#include "fairband/market.hpp"

namespace fairband {

enum class GridStretch { uniform, log_space };
enum class BoundaryKind { linearity, dirichlet_discounted };

struct GridSpec {
    double s_min = 0.0;
    double s_max = 0.0;
    int n_space = 128;  // number of spot intervals (nodes = n_space + 1)
    int n_time = 128;   // number of time intervals before flow dates are inserted
    GridStretch stretching = GridStretch::log_space;
    BoundaryKind boundary = BoundaryKind::linearity;
    double theta = 0.5;        // 1 = implicit Euler, 0.5 = Crank-Nicolson
    double picard_tol = 1e-12;
    int picard_max_iter = 50;

    GridSpec refined(int factor) const {
        GridSpec g = *this;
        g.n_space *= factor;
        g.n_time *= factor;
        return g;
    }
    GridSpec coarsened(int factor) const {
        GridSpec g = *this;
        g.n_space /= factor;
        g.n_time /= factor;
        return g;
    }
};

std::vector<double> build_spots(const GridSpec& grid);
// Uniform partition of [0, T] into n_time cells with must_include merged in.
std::vector<double> build_times(double horizon, int n_time, std::vector<double> must_include);

// Grid of (t, s) -> (v, dv/ds). v carries the party's price plus the margin
// amount (the quantity every pricing problem actually evolves); subtract
// C(t, s) to read off the ex-dividend price. The stored maturity row is the
// settlement value, so v(T, s) equals the terminal payoff when no flow is
// dated exactly at T.
struct ValueSurface {
    std::vector<double> times;                // ascending
    std::vector<double> spots;                // ascending
    std::vector<std::vector<double>> v;       // [time][spot]
    std::vector<std::vector<double>> delta;   // [time][spot]

    bool in_hull(double t, double s) const;
    double value_at(double t, double s) const;  // bilinear; throws outside the hull
    double delta_at(double t, double s) const;
    void write_csv(std::ostream& os) const;  // header t,s,v,delta; 12 significant digits
};

// Ex-dividend price: interpolated surface value minus the margin amount.
double price_at(const ValueSurface& surface, double t, double s,
                const CollateralSpec& collateral);

// Spot-independent surface carrying a deterministic value path (delta = 0);
// lets cash-only contracts flow through the same replication machinery.
ValueSurface flat_surface(const std::vector<double>& times, const std::vector<double>& values,
                          double s_min, double s_max, int n_space = 16);

// Three-point first-derivative weights on a possibly non-uniform grid
// (centered inside, one-sided second order at the ends).
void derivative_weights(const std::vector<double>& x, std::size_t i, double* w_lo, double* w_mid,
                        double* w_hi);

}  // namespace fairband
