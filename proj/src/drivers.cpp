#include "fairband/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairband {

namespace {

struct Exposure {
    double sum = 0.0;        // sum z^i S^i
    double sum_pos_funding = 0.0;  // sum r_ib^i (z^i S^i)^+
    double sum_neg = 0.0;    // sum (z^i S^i)^-
    double sum_beta = 0.0;   // sum beta (z^i S^i)
};

Exposure exposure(const DriverQuery& q, const RateModel& rates, const PiecewiseCurve* beta) {
    if (q.z.size() != q.spots.size())
        throw std::domain_error("driver query needs one hedge ratio per spot");
    Exposure e;
    double b = beta ? beta->value(q.t) : 0.0;
    for (std::size_t i = 0; i < q.z.size(); ++i) {
        double zs = q.z[i] * q.spots[i];
        e.sum += zs;
        e.sum_pos_funding += rates.rate(AccountKind::funding, q.t, i) * pos(zs);
        e.sum_neg += neg(zs);
        e.sum_beta += b * zs;
    }
    return e;
}

double cash_split(double balance, double r_l, double r_b) {
    return r_l * pos(balance) - r_b * neg(balance);
}

}  // namespace

double wealth_drift(const DriverQuery& q, const RateModel& rates, CashBranch branch) {
    Exposure e = exposure(q, rates, nullptr);
    double r_l = rates.rate(AccountKind::lend, q.t);
    double r_b = rates.rate(AccountKind::borrow, q.t);
    double lead = (branch == CashBranch::lend ? r_l : r_b) * e.sum;
    return lead - e.sum_pos_funding + cash_split(q.y + e.sum_neg, r_l, r_b);
}

double discounted_wealth_drift(const DriverQuery& q, const RateModel& rates, CashBranch branch) {
    AccountKind kind = branch == CashBranch::lend ? AccountKind::lend : AccountKind::borrow;
    double B = rates.account(kind, q.t);
    double r = rates.rate(kind, q.t);
    DriverQuery scaled = q;
    scaled.y = B * q.y;
    return wealth_drift(scaled, rates, branch) / B - r * q.y;
}

double funding_generator(const DriverQuery& q, const RateModel& rates) {
    Exposure e = exposure(q, rates, nullptr);
    double r_l = rates.rate(AccountKind::lend, q.t);
    double r_b = rates.rate(AccountKind::borrow, q.t);
    return -e.sum_pos_funding + cash_split(q.y + e.sum_neg, r_l, r_b);
}

namespace {

double funding_generator_at(const DriverQuery& q, const RateModel& rates, double y,
                            bool flip_z) {
    DriverQuery shifted = q;
    shifted.y = y;
    if (flip_z)
        for (double& zi : shifted.z) zi = -zi;
    return funding_generator(shifted, rates);
}

}  // namespace

double hedger_generator(const DriverQuery& q, const RateModel& rates, const PiecewiseCurve& beta) {
    Exposure e = exposure(q, rates, &beta);
    if (q.x >= 0.0) {
        double B_l = rates.account(AccountKind::lend, q.t);
        double r_l = rates.rate(AccountKind::lend, q.t);
        return e.sum_beta - q.x * r_l * B_l + funding_generator_at(q, rates, q.y + q.x * B_l, false);
    }
    double B_b = rates.account(AccountKind::borrow, q.t);
    double r_b = rates.rate(AccountKind::borrow, q.t);
    return e.sum_beta - q.x * r_b * B_b + funding_generator_at(q, rates, q.y + q.x * B_b, false);
}

double counterparty_generator(const DriverQuery& q, const RateModel& rates,
                              const PiecewiseCurve& beta) {
    Exposure e = exposure(q, rates, &beta);
    if (q.x >= 0.0) {
        double B_l = rates.account(AccountKind::lend, q.t);
        double r_l = rates.rate(AccountKind::lend, q.t);
        return e.sum_beta + q.x * r_l * B_l - funding_generator_at(q, rates, -q.y + q.x * B_l, true);
    }
    double B_b = rates.account(AccountKind::borrow, q.t);
    double r_b = rates.rate(AccountKind::borrow, q.t);
    return e.sum_beta + q.x * r_b * B_b - funding_generator_at(q, rates, -q.y + q.x * B_b, true);
}

double sign_generator(const DriverQuery& q, const RateModel& rates, const PiecewiseCurve& beta,
                      SignVariant variant) {
    Exposure e = exposure(q, rates, &beta);
    double B_l = rates.account(AccountKind::lend, q.t);
    double B_b = rates.account(AccountKind::borrow, q.t);
    double r_l = rates.rate(AccountKind::lend, q.t);
    double r_b = rates.rate(AccountKind::borrow, q.t);
    switch (variant) {
        case SignVariant::hedger_lend:
            return e.sum_beta - q.x * r_l * B_l +
                   funding_generator_at(q, rates, q.y + q.x * B_l, false);
        case SignVariant::counterparty_borrow:
            return e.sum_beta + q.x * r_b * B_b -
                   funding_generator_at(q, rates, -q.y + q.x * B_b, true);
        case SignVariant::hedger_borrow:
            return e.sum_beta - q.x * r_b * B_b +
                   funding_generator_at(q, rates, q.y + q.x * B_b, false);
        case SignVariant::counterparty_lend:
            return e.sum_beta + q.x * r_l * B_l -
                   funding_generator_at(q, rates, -q.y + q.x * B_l, true);
        case SignVariant::hedger_lend_reduced:
            // sum beta zS - sum r_ib (zS)^+ + r_l y + r_l sum (zS)^-
            return e.sum_beta - e.sum_pos_funding + r_l * q.y + r_l * e.sum_neg;
        case SignVariant::counterparty_lend_reduced: {
            // sum beta zS + sum r_ib (-zS)^+ + r_l y - r_l sum (-zS)^-
            double pos_flipped = 0.0, neg_flipped = 0.0;
            for (std::size_t i = 0; i < q.z.size(); ++i) {
                double zs = q.z[i] * q.spots[i];
                pos_flipped += rates.rate(AccountKind::funding, q.t, i) * pos(-zs);
                neg_flipped += neg(-zs);
            }
            return e.sum_beta + pos_flipped + r_l * q.y - r_l * neg_flipped;
        }
    }
    throw std::domain_error("unknown sign variant");
}

double driver_gap_borrow(double t, double y, const std::vector<double>& z,
                         const std::vector<double>& spots, double x1, double x2,
                         const RateModel& rates) {
    if (x1 > 0.0 || x2 > 0.0)
        throw std::domain_error("driver_gap_borrow requires x1 <= 0 and x2 <= 0");
    if (!curve_leq(rates.lend_rate, rates.borrow_rate))
        throw std::domain_error("driver_gap_borrow requires r_l <= r_b");
    if (!rates.strong_funding())
        throw std::domain_error("driver_gap_borrow requires r_b <= r_ib");
    DriverQuery a{t, spots, y + x1, z, 0.0};
    DriverQuery b{t, spots, -y + x2, z, 0.0};
    for (double& zi : b.z) zi = -zi;
    return discounted_wealth_drift(a, rates, CashBranch::borrow) +
           discounted_wealth_drift(b, rates, CashBranch::borrow);
}

double driver_gap_mixed(double t, double y, const std::vector<double>& z,
                        const std::vector<double>& spots, double x1, double x2,
                        const RateModel& rates) {
    if (!curve_leq(rates.lend_rate, rates.borrow_rate))
        throw std::domain_error("driver_gap_mixed requires r_l <= r_b");
    double B_l = rates.account(AccountKind::lend, t);
    double B_b = rates.account(AccountKind::borrow, t);
    double r_l = rates.rate(AccountKind::lend, t);
    double r_b = rates.rate(AccountKind::borrow, t);
    DriverQuery a{t, spots, y + x1 * B_l, z, 0.0};
    DriverQuery b{t, spots, -y + x2 * B_b, z, 0.0};
    for (double& zi : b.z) zi = -zi;
    return funding_generator(a, rates) + funding_generator(b, rates) - x1 * r_l * B_l -
           x2 * r_b * B_b;
}

double driver_lipschitz_bound(const RateModel& rates, const PiecewiseCurve& beta) {
    double r_cash = std::max(rates.lend_rate.max_value(), rates.borrow_rate.max_value());
    double r_fund = 0.0;
    for (const auto& f : rates.funding_rate) r_fund = std::max(r_fund, f.max_value());
    double b = std::max(std::abs(beta.max_value()), std::abs(beta.min_value()));
    // leading/beta term + funding charge + cash-split term (1-Lipschitz in both args)
    return r_cash + r_fund + b + r_cash;
}

}  // namespace fairband
