#pragma once

#include <string>

#include "fairband/market.hpp"
#include "fairband/surface.hpp"

namespace fairband {

// A fully specified pricing problem parsed from a JSON scenario file:
// rate curves as [t_start, value] lists, asset coefficients and contract
// legs as expression strings over t and s.
struct Scenario {
    std::string id = "scenario";
    RateModel rates;
    AssetModel asset;
    Contract contract;
    CollateralSpec collateral;
    double x1 = 0.0;
    double x2 = 0.0;
    GridSpec grid;      // defaults derived from the asset domain
    int lattice_steps = 200;
};

Scenario load_scenario(const std::string& path);       // throws config_error with diagnostics
Scenario parse_scenario(const std::string& json_text, const std::string& origin = "<inline>");

}  // namespace fairband
