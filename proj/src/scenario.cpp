#include "fairband/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fairband/errors.hpp"
#include "fairband/expr.hpp"

namespace fairband {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& field,
                       const std::string& what) {
    throw config_error(origin + ": field '" + field + "': " + what);
}

PiecewiseCurve parse_curve(const json& j, const std::string& origin, const std::string& field) {
    if (j.is_number()) return PiecewiseCurve(j.get<double>());
    if (!j.is_array()) fail(origin, field, "expected a number or a list of [t_start, value]");
    std::vector<double> knots, values;
    for (const auto& kv : j) {
        if (!kv.is_array() || kv.size() != 2 || !kv[0].is_number() || !kv[1].is_number())
            fail(origin, field, "each entry must be [t_start, value]");
        knots.push_back(kv[0].get<double>());
        values.push_back(kv[1].get<double>());
    }
    try {
        return PiecewiseCurve(std::move(knots), std::move(values));
    } catch (const config_error& e) {
        fail(origin, field, e.what());
    }
}

Expr parse_expr_field(const json& j, const std::string& origin, const std::string& field) {
    try {
        if (j.is_number()) return Expr::constant(j.get<double>());
        if (j.is_string()) return Expr::parse(j.get<std::string>());
    } catch (const config_error& e) {
        fail(origin, field, e.what());
    }
    fail(origin, field, "expected a number or an expression string");
}

double require_number(const json& j, const std::string& origin, const std::string& key,
                      const std::string& display) {
    if (!j.contains(key) || !j[key].is_number()) fail(origin, display, "expected a number");
    return j[key].get<double>();
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(origin + ": " + e.what());
    }

    Scenario sc;
    if (root.contains("id") && root["id"].is_string()) sc.id = root["id"].get<std::string>();

    if (!root.contains("rates") || !root["rates"].is_object())
        fail(origin, "rates", "missing object");
    const json& jr = root["rates"];
    sc.rates.lend_rate = parse_curve(jr.value("r_l", json(0.0)), origin, "rates.r_l");
    sc.rates.borrow_rate = parse_curve(jr.value("r_b", json(0.0)), origin, "rates.r_b");
    sc.rates.funding_rate = {parse_curve(jr.value("r_ib", json(0.0)), origin, "rates.r_ib")};
    sc.rates.collateral_rate = parse_curve(jr.value("r_c", json(0.0)), origin, "rates.r_c");
    sc.rates.horizon = jr.value("T", 1.0);
    if (!(sc.rates.horizon > 0.0)) fail(origin, "rates.T", "horizon must be positive");

    if (!root.contains("asset") || !root["asset"].is_object())
        fail(origin, "asset", "missing object");
    const json& ja = root["asset"];
    sc.asset.s0 = require_number(ja, origin, "s0", "asset.s0");
    if (ja.contains("domain")) {
        if (!ja["domain"].is_array() || ja["domain"].size() != 2)
            fail(origin, "asset.domain", "expected [s_min, s_max]");
        sc.asset.domain_lo = ja["domain"][0].get<double>();
        sc.asset.domain_hi = ja["domain"][1].get<double>();
    } else {
        sc.asset.domain_lo = sc.asset.s0 / 5.0;
        sc.asset.domain_hi = sc.asset.s0 * 5.0;
    }
    Expr mu = parse_expr_field(ja.value("mu", json(0.0)), origin, "asset.mu");
    Expr sigma = parse_expr_field(ja.value("sigma", json("0.2*s")), origin, "asset.sigma");
    Expr kappa = parse_expr_field(ja.value("kappa", json(0.0)), origin, "asset.kappa");
    sc.asset.mu = [mu](double t, double s) { return mu.eval(t, s); };
    sc.asset.sigma = [sigma](double t, double s) { return sigma.eval(t, s); };
    sc.asset.kappa = [kappa](double t, double s) { return kappa.eval(t, s); };
    if (ja.contains("beta")) sc.asset.beta = parse_curve(ja["beta"], origin, "asset.beta");
    else sc.asset.beta = sc.rates.borrow_rate;

    if (!root.contains("contract") || !root["contract"].is_object())
        fail(origin, "contract", "missing object");
    const json& jc = root["contract"];
    sc.contract.initial_flow = jc.value("p", 0.0);
    if (jc.contains("flows")) {
        if (!jc["flows"].is_array()) fail(origin, "contract.flows", "expected a list");
        for (const auto& fl : jc["flows"]) {
            if (!fl.is_array() || fl.size() != 2 || !fl[0].is_number())
                fail(origin, "contract.flows", "each entry must be [t, amount-expression]");
            double t = fl[0].get<double>();
            if (!(t > 0.0 && t <= sc.rates.horizon))
                fail(origin, "contract.flows", "flow date outside (0, T]");
            Expr amount = parse_expr_field(fl[1], origin, "contract.flows");
            sc.contract.flows.push_back({t, [amount](double s) { return amount.eval(0.0, s); }});
        }
    }
    if (jc.contains("continuous")) {
        Expr a = parse_expr_field(jc["continuous"], origin, "contract.continuous");
        sc.contract.continuous = [a](double t, double s) { return a.eval(t, s); };
    }
    if (jc.contains("payoff")) {
        Expr h = parse_expr_field(jc["payoff"], origin, "contract.payoff");
        sc.contract.payoff = [h](double s) { return h.eval(0.0, s); };
    }

    if (root.contains("collateral")) {
        if (!root["collateral"].is_object() || !root["collateral"].contains("expr"))
            fail(origin, "collateral", "expected an object with field 'expr'");
        Expr ce = parse_expr_field(root["collateral"]["expr"], origin, "collateral.expr");
        sc.collateral.amount = [ce](double t, double s) { return ce.eval(t, s); };
    }

    if (root.contains("endowments")) {
        const json& je = root["endowments"];
        sc.x1 = je.value("x1", 0.0);
        sc.x2 = je.value("x2", 0.0);
    }

    sc.grid.s_min = sc.asset.domain_lo;
    sc.grid.s_max = sc.asset.domain_hi;
    if (root.contains("grid")) {
        const json& jg = root["grid"];
        sc.grid.n_space = jg.value("n_space", sc.grid.n_space);
        sc.grid.n_time = jg.value("n_time", sc.grid.n_time);
        std::string stretch = jg.value("stretching", "log");
        sc.grid.stretching =
            stretch == "uniform" ? GridStretch::uniform : GridStretch::log_space;
        std::string boundary = jg.value("boundary", "linearity");
        sc.grid.boundary = boundary == "dirichlet-discounted" ? BoundaryKind::dirichlet_discounted
                                                              : BoundaryKind::linearity;
        sc.lattice_steps = jg.value("lattice_steps", sc.lattice_steps);
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

}  // namespace fairband
