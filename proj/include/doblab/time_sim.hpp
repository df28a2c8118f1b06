#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "doblab/config.hpp"
#include "doblab/poly.hpp"
#include "doblab/transfer_function.hpp"

namespace doblab {

/// Fixed-step RK4 settings. The controller and observers run at the
/// integration step; measurement noise is drawn once per step and held.
struct SimConfig {
    double dt = 1e-5;
    double duration = 1.0;
    std::uint64_t seed = 1;
    double noise_std = 0.0;  ///< Gaussian noise on the raw velocity, before the g_v filter
    double initial_position = 0.0;  ///< q_m(0); the force loop's preloaded start overrides it
    /// On a non-finite state: false throws NumericError(divergence), true ends
    /// the record at the last finite sample and sets Trajectory::diverged_at.
    bool truncate_on_divergence = false;

    /// dt*max(cutoffs) <= 0.5, duration >= 10 dt, noise_std >= 0.
    void validate(const ObserverConfig& obs) const;
    std::size_t sample_count() const;
};

/// F_frc = coulomb*tanh(qdot/smoothing_velocity) + viscous*qdot.
struct FrictionModel {
    double coulomb = 0.0;
    double viscous = 0.0;
    double smoothing_velocity = 1e-3;
    void validate() const;
    double force(double qdot) const;
};

/// Sum of an optional windowed sinusoid and piecewise polynomial segments,
/// all with analytic derivatives.
struct PositionReference {
    struct Sinusoid {
        double amplitude = 0.1;     ///< rad or m
        double frequency_hz = 1.0;
        double t_start = 1.0;
        double t_end = 10.0;
    };
    struct Segment {
        double t0;
        double t1;
        Polynomial shape;  ///< in tau = t - t0
    };
    std::optional<Sinusoid> sinusoid;
    std::vector<Segment> segments;

    struct Sample {
        double q, qd, qdd;
    };
    Sample at(double t) const;
};

/// F_ref(t) = initial for t < t_step, initial + step afterwards.
struct ForceReference {
    double initial = 0.0;
    double step = 1.0;
    double t_step = 1.0;
    double at(double t) const { return t < t_step ? initial : initial + step; }
};

struct TrajectorySample {
    double t;
    double q_m;
    double qdot_m;
    double v_meas;
    double I_m;
    double F_dis_hat;
    double F_l_hat;
    double F_l_true;
    bool contact;
};

struct Trajectory {
    double dt = 0.0;
    std::vector<TrajectorySample> samples;
    std::optional<double> diverged_at;  ///< set only under truncate_on_divergence
};

/// DOB position loop (PD outer loop with acceleration feedforward).
/// Throws ConfigError on invalid settings, NumericError(divergence) with the
/// failing time when the state becomes non-finite.
Trajectory simulate_position(const PlantParams& plant, const ObserverConfig& obs, const PositionGains& gains,
                             const PositionReference& ref, const FrictionModel& friction, const SimConfig& sim);

enum class ContactMode {
    unilateral,  ///< wall pushes only, engaged while q > q_e
    bilateral,   ///< linear spring-damper, always engaged
};

/// RFOB force loop against the wall. With ref.initial > 0 the run starts at
/// the in-contact equilibrium for that preload.
Trajectory simulate_force(const PlantParams& plant, const ObserverConfig& obs, double C_f, const ForceReference& ref,
                          const Environment& env, const FrictionModel& friction, const SimConfig& sim,
                          ContactMode contact = ContactMode::unilateral);

/// Unactuated, frictionless, contact-free plant from (q0, qdot0); I_m stays 0.
Trajectory simulate_free_motion(const PlantParams& plant, double q0, double qdot0, const SimConfig& sim);

enum class Signal { q_m, qdot_m, v_meas, I_m, F_dis_hat, F_l_hat, F_l_true };
double signal_value(const TrajectorySample& s, Signal which);

struct MetricWindow {
    double t0;
    double t1;
    double late_fraction = 0.5;  ///< trailing share of [t0, t1] used for oscillation/steady-state
};

struct ResponseMetrics {
    double overshoot;           ///< fraction of the final reference
    double settling_time;       ///< s after t0 to stay inside the 2% band
    double steady_state_error;  ///< |late mean - final reference|
    double oscillation_index;   ///< late-window variance / reference scale^2
    double velocity_noise_rms;  ///< rms(v_meas - qdot_m) over the window
};

/// A run that diverged inside the window reports every metric as +inf.
ResponseMetrics compute_metrics(const Trajectory& traj, Signal which, const std::function<double(double)>& reference,
                                const MetricWindow& window);

/// Least-squares amplitude of the omega-sinusoid in `which - reference` over a window.
double sinusoid_amplitude(const Trajectory& traj, Signal which, const std::function<double(double)>& reference,
                          double omega, double t0, double t1);

/// rms(a.which - b.which) over a window; both runs must share the time grid.
double difference_rms(const Trajectory& a, const Trajectory& b, Signal which, double t0, double t1);

/// Step response of a proper transfer function by RK4 on its controllable
/// canonical realization, sampled on the same grid as the simulator.
std::vector<double> tf_step_response(const TransferFunction& tf, double amplitude, double dt, std::size_t samples);

/// CSV: header t,q_m,qdot_m,v_meas,I_m,F_dis_hat,F_l_hat,F_l_true,contact.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace doblab
