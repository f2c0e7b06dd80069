#pragma once

#include "fairband/market.hpp"
#include "fairband/surface.hpp"

namespace fairband {

// Backward theta-scheme solve of the party's quasi-linear pricing equation
//   dv/dt + 1/2 sigma^2 v_ss + (beta s - kappa) v_s = g(t, x, s, v + C, v_s) + a - r_c C
// on [0,T] x [s_min, s_max]. Dated flows enter as jump conditions
// v(t_k-, s) = v(t_k, s) - flow_k(s); the maturity row holds the settlement
// value payoff(s) - flows_at(T, s). The nonlinear generator is handled by
// per-step Picard iteration; the linear part is solved tridiagonally.
// The returned surface stores v + C (see ValueSurface).
ValueSurface solve_pde(Party party, const RateModel& rates, const AssetModel& asset,
                       const Contract& contract, const CollateralSpec& collateral,
                       double x, const GridSpec& grid);

// Flat-in-s surface for cash-only contracts, built from the exact scalar
// integration; plugs into the same strategy machinery as a PDE surface.
ValueSurface deterministic_surface(Party party, const RateModel& rates, const Contract& contract,
                                   const CollateralSpec& collateral, double x, double s_min,
                                   double s_max);

}  // namespace fairband
