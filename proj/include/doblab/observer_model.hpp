#pragma once

#include <map>
#include <string>

namespace doblab {

/// True and nominal motor parameters. Inertia in kg*m^2 (or kg for a linear
/// axis), torque coefficient in N*m/A (N/A).
struct PlantParams {
    double J_m = 0.004;
    double K_tau = 0.4;
    double J_mn = 0.004;
    double K_tau_n = 0.4;

    /// Throws ConfigError unless every field is strictly positive.
    void validate() const;
};

/// Observer design: filter cutoffs (rad/s) and the identified parameters the
/// reaction force observer uses.
struct ObserverConfig {
    double g_dob = 300.0;
    double g_rfob = 300.0;
    double g_v = 1000.0;
    double J_hat = 0.004;
    double K_tau_hat = 0.4;

    double kappa() const { return g_v / g_dob; }
    void validate() const;
};

/// Damping threshold under which the inner-loop sensitivity starts peaking.
inline constexpr double kCriticalDamping = 0.70710678118654752440;  // 1/sqrt(2)

struct SecondOrder {
    double w_n;
    double xi;
};

struct DesignVerdict {
    double alpha;
    double kappa;
    double w_n;
    double xi;
    double constraint_lhs;  ///< alpha * g_dob
    double constraint_rhs;  ///< g_v / 2
    bool satisfied;
    double margin;          ///< rhs - lhs
};

/// J_mn*K_tau / (J_m*K_tau_n); > 1 turns the DOB into a lead compensator.
double alpha(const PlantParams& p);

/// Natural frequency sqrt(alpha*kappa)*g_dob and damping 0.5*sqrt(kappa/alpha)
/// of the inner-loop characteristic polynomial s^2 + kappa*g*s + alpha*kappa*g^2.
SecondOrder second_order_params(double alpha, double kappa, double g_dob);

/// Bandwidth constraint alpha*g_dob <= g_v/2, i.e. xi >= 1/sqrt(2).
DesignVerdict check_bandwidth_constraint(const PlantParams& p, const ObserverConfig& o);

/// Convenience overload working from alpha directly.
DesignVerdict check_bandwidth_constraint(double alpha, double g_dob, double g_v);

}  // namespace doblab
