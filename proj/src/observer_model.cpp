#include "doblab/observer_model.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "doblab/error.hpp"

namespace doblab {

namespace {

void require_positive(std::vector<std::string>& errs, const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) errs.push_back(std::string(name) + " must be > 0 (got " + std::to_string(v) + ")");
}

void raise(const std::vector<std::string>& errs) {
    if (errs.empty()) return;
    std::string msg;
    for (const auto& e : errs) msg += (msg.empty() ? "" : "; ") + e;
    throw ConfigError(msg);
}

}  // namespace

void PlantParams::validate() const {
    std::vector<std::string> errs;
    require_positive(errs, "J_m", J_m);
    require_positive(errs, "K_tau", K_tau);
    require_positive(errs, "J_mn", J_mn);
    require_positive(errs, "K_tau_n", K_tau_n);
    raise(errs);
}

void ObserverConfig::validate() const {
    std::vector<std::string> errs;
    require_positive(errs, "g_dob", g_dob);
    require_positive(errs, "g_rfob", g_rfob);
    require_positive(errs, "g_v", g_v);
    require_positive(errs, "J_hat", J_hat);
    require_positive(errs, "K_tau_hat", K_tau_hat);
    raise(errs);
}

double alpha(const PlantParams& p) {
    p.validate();
    return (p.J_mn * p.K_tau) / (p.J_m * p.K_tau_n);
}

SecondOrder second_order_params(double alpha, double kappa, double g_dob) {
    if (!(alpha > 0.0) || !(kappa > 0.0) || !(g_dob > 0.0))
        throw ConfigError("second_order_params: alpha, kappa and g_dob must be > 0");
    return {std::sqrt(alpha * kappa) * g_dob, 0.5 * std::sqrt(kappa / alpha)};
}

DesignVerdict check_bandwidth_constraint(double a, double g_dob, double g_v) {
    const double kappa = g_v / g_dob;
    const auto so = second_order_params(a, kappa, g_dob);
    DesignVerdict v{};
    v.alpha = a;
    v.kappa = kappa;
    v.w_n = so.w_n;
    v.xi = so.xi;
    v.constraint_lhs = a * g_dob;
    v.constraint_rhs = 0.5 * g_v;
    v.satisfied = v.constraint_lhs <= v.constraint_rhs;
    v.margin = v.constraint_rhs - v.constraint_lhs;
    return v;
}

DesignVerdict check_bandwidth_constraint(const PlantParams& p, const ObserverConfig& o) {
    o.validate();
    return check_bandwidth_constraint(alpha(p), o.g_dob, o.g_v);
}

}  // namespace doblab
