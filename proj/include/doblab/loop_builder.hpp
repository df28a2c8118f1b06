#pragma once

#include <string>
#include <utility>
#include <vector>

#include "doblab/observer_model.hpp"
#include "doblab/transfer_function.hpp"

namespace doblab {

/// PD outer-loop gains acting on the acceleration reference.
struct PositionGains {
    double K_p = 400.0;  ///< 1/s^2
    double K_D = 40.0;   ///< 1/s
    void validate() const;
};

/// Spring-damper contact model F_l = D_env*(qdot - qdot_e) + K_env*(q - q_e).
struct Environment {
    double D_env = 10.0;   ///< N*s/m
    double K_env = 1e5;    ///< N/m
    double q_e = 0.01;     ///< m
    double qdot_e = 0.0;   ///< m/s
    void validate() const;
};

enum class Velocity { ideal, filtered };

/// L_DOB: alpha*g_dob/s (ideal) or alpha*g_v*g_dob/(s(s+g_v)) (filtered).
TransferFunction dob_open_loop(double alpha, double g_dob, double g_v, Velocity velocity);

/// T_Sen = s(s+g_v) / (s^2 + g_v s + alpha g_v g_dob).
TransferFunction sensitivity_tf(double alpha, double g_dob, double g_v);

/// Closed-form acceleration transfer with ideal velocity measurement, as
/// printed: numerator s(s+g)(s^2+K_D s+K_p) over
/// alpha^-1 s^3 + (g+K_D)s^2 + (K_p+g K_D)s + g K_p.
/// The numerator is one degree above the denominator; use den() for stability.
TransferFunction position_loop_ideal(double alpha, double g_dob, const PositionGains& gains);

/// Closed-form acceleration transfer with a first-order velocity filter, as printed.
TransferFunction position_loop_finite_gv(double alpha, double g_dob, double g_v, const PositionGains& gains);

/// Block-reduced q_ddot/q_ddot_ref of the DOB position loop, built from the
/// plant, DOB, velocity filter and PD primitives (independent of the closed forms).
TransferFunction compose_position_loop(const PlantParams& plant, const ObserverConfig& obs,
                                       const PositionGains& gains, Velocity velocity);

/// Coefficient-wise comparison of two characteristic polynomials after
/// normalizing both to a unit leading coefficient.
struct PolynomialDiscrepancy {
    bool same_degree;
    double max_relative_error;
    double leading_ratio;  ///< a.leading() / b.leading() before normalization
    std::string summary;
};
PolynomialDiscrepancy compare_characteristic(const Polynomial& a, const Polynomial& b);

/// Partial maps of the reaction force observer.
struct RfobEstimator {
    TransferFunction from_current;   ///< K_tau_hat g_rfob/(s+g_rfob)
    TransferFunction from_velocity;  ///< -J_hat g_rfob s/(s+g_rfob)
};
RfobEstimator rfob_estimator_tf(const ObserverConfig& obs);

struct ForceLoopModel {
    TransferFunction open_loop;      ///< F_l_hat / q_ddot_des, i.e. the loop gain with C_f factored out
    TransferFunction closed_loop;    ///< F_l_hat / F_l_ref at the given C_f
    TransferFunction true_force_tf;  ///< F_l / F_l_ref at the given C_f
    std::vector<Complex> zeros;      ///< of open_loop
    std::vector<Complex> poles;      ///< of open_loop
    double max_zero_real() const;
};

/// RFOB force loop against a permanently engaged spring-damper wall
/// (q_e and qdot_e shifted to zero). Throws NumericError(no_contact) when the
/// environment has neither stiffness nor damping.
ForceLoopModel compose_force_loop(const PlantParams& plant, const ObserverConfig& obs, const Environment& env,
                                  double C_f, Velocity velocity);

}  // namespace doblab
