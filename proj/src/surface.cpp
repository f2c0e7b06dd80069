#include "fairband/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include "fairband/errors.hpp"

namespace fairband {

std::vector<double> build_spots(const GridSpec& grid) {
    if (grid.n_space < 16) throw config_error("grid needs n_space >= 16");
    if (!(grid.s_min > 0.0 && grid.s_min < grid.s_max))
        throw config_error("grid needs 0 < s_min < s_max");
    std::vector<double> s(grid.n_space + 1);
    if (grid.stretching == GridStretch::uniform) {
        double h = (grid.s_max - grid.s_min) / grid.n_space;
        for (int i = 0; i <= grid.n_space; ++i) s[i] = grid.s_min + h * i;
    } else {
        double lo = std::log(grid.s_min), hi = std::log(grid.s_max);
        double h = (hi - lo) / grid.n_space;
        for (int i = 0; i <= grid.n_space; ++i) s[i] = std::exp(lo + h * i);
    }
    s.front() = grid.s_min;
    s.back() = grid.s_max;
    return s;
}

std::vector<double> build_times(double horizon, int n_time, std::vector<double> must_include) {
    if (n_time < 16) throw config_error("grid needs n_time >= 16");
    std::set<double> ts;
    for (int j = 0; j <= n_time; ++j) ts.insert(horizon * j / n_time);
    for (double t : must_include)
        if (t > 0.0 && t < horizon) ts.insert(t);
    std::vector<double> out(ts.begin(), ts.end());
    // merge near-duplicates introduced by flow dates sitting on grid points
    std::vector<double> dedup;
    for (double t : out)
        if (dedup.empty() || t - dedup.back() > 1e-12 * std::max(1.0, horizon)) dedup.push_back(t);
    dedup.back() = horizon;
    return dedup;
}

namespace {

// index of the left grid node of the cell containing x
std::size_t cell_index(const std::vector<double>& xs, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs.begin());
    if (i == 0) return 0;
    if (i >= xs.size()) return xs.size() - 2;
    return i - 1;
}

double bilinear(const std::vector<double>& ts, const std::vector<double>& xs,
                const std::vector<std::vector<double>>& f, double t, double x) {
    std::size_t j = cell_index(ts, t), i = cell_index(xs, x);
    double wt = (ts[j + 1] > ts[j]) ? (t - ts[j]) / (ts[j + 1] - ts[j]) : 0.0;
    double wx = (xs[i + 1] > xs[i]) ? (x - xs[i]) / (xs[i + 1] - xs[i]) : 0.0;
    double lo = f[j][i] * (1 - wx) + f[j][i + 1] * wx;
    double hi = f[j + 1][i] * (1 - wx) + f[j + 1][i + 1] * wx;
    return lo * (1 - wt) + hi * wt;
}

}  // namespace

bool ValueSurface::in_hull(double t, double s) const {
    const double eps_t = 1e-10 * std::max(1.0, times.back());
    const double eps_s = 1e-10 * spots.back();
    return t >= times.front() - eps_t && t <= times.back() + eps_t &&
           s >= spots.front() - eps_s && s <= spots.back() + eps_s;
}

double ValueSurface::value_at(double t, double s) const {
    if (!in_hull(t, s))
        throw std::domain_error("surface lookup outside the grid hull");
    return bilinear(times, spots, v, t, s);
}

double ValueSurface::delta_at(double t, double s) const {
    if (!in_hull(t, s))
        throw std::domain_error("surface lookup outside the grid hull");
    return bilinear(times, spots, delta, t, s);
}

void ValueSurface::write_csv(std::ostream& os) const {
    os << "t,s,v,delta\n";
    char buf[160];
    for (std::size_t j = 0; j < times.size(); ++j)
        for (std::size_t i = 0; i < spots.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g\n", times[j], spots[i],
                          v[j][i], delta[j][i]);
            os << buf;
        }
}

double price_at(const ValueSurface& surface, double t, double s,
                const CollateralSpec& collateral) {
    return surface.value_at(t, s) - collateral.at(t, s);
}

ValueSurface flat_surface(const std::vector<double>& times, const std::vector<double>& values,
                          double s_min, double s_max, int n_space) {
    ValueSurface out;
    out.times = times;
    out.spots.resize(n_space + 1);
    for (int i = 0; i <= n_space; ++i)
        out.spots[i] = s_min + (s_max - s_min) * i / n_space;
    out.v.assign(times.size(), std::vector<double>(out.spots.size(), 0.0));
    out.delta = out.v;
    for (std::size_t j = 0; j < times.size(); ++j)
        std::fill(out.v[j].begin(), out.v[j].end(), values[j]);
    return out;
}

void derivative_weights(const std::vector<double>& x, std::size_t i, double* w_lo, double* w_mid,
                        double* w_hi) {
    std::size_t n = x.size();
    if (i == 0) {
        double h0 = x[1] - x[0], h1 = x[2] - x[1];
        *w_lo = -(2 * h0 + h1) / (h0 * (h0 + h1));  // weight of x[0]
        *w_mid = (h0 + h1) / (h0 * h1);             // weight of x[1]
        *w_hi = -h0 / (h1 * (h0 + h1));             // weight of x[2]
    } else if (i == n - 1) {
        double h0 = x[n - 2] - x[n - 3], h1 = x[n - 1] - x[n - 2];
        *w_lo = h1 / (h0 * (h0 + h1));              // weight of x[n-3]
        *w_mid = -(h0 + h1) / (h0 * h1);            // weight of x[n-2]
        *w_hi = (h0 + 2 * h1) / (h1 * (h0 + h1));   // weight of x[n-1]
    } else {
        double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
        *w_lo = -hp / (hm * (hm + hp));
        *w_mid = (hp - hm) / (hm * hp);
        *w_hi = hm / (hp * (hm + hp));
    }
}

}  // namespace fairband
