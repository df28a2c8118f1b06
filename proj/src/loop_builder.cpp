#include "doblab/loop_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "doblab/error.hpp"

namespace doblab {

void PositionGains::validate() const {
    if (!(K_p > 0.0) || !(K_D > 0.0)) throw ConfigError("K_p and K_D must be > 0");
}

void Environment::validate() const {
    if (!(D_env >= 0.0) || !(K_env >= 0.0)) throw ConfigError("D_env and K_env must be >= 0");
}

namespace {

const Polynomial kS{0.0, 1.0};

// g/(s+g)
TransferFunction low_pass(double g) { return {Polynomial{g}, Polynomial{g, 1.0}}; }

TransferFunction velocity_filter(double g_v, Velocity velocity) {
    return velocity == Velocity::ideal ? TransferFunction::gain(1.0) : low_pass(g_v);
}

}  // namespace

TransferFunction dob_open_loop(double alpha, double g_dob, double g_v, Velocity velocity) {
    if (!(alpha > 0.0) || !(g_dob > 0.0) || (velocity == Velocity::filtered && !(g_v > 0.0)))
        throw ConfigError("dob_open_loop: parameters must be > 0");
    if (velocity == Velocity::ideal) return {Polynomial{alpha * g_dob}, kS};
    return {Polynomial{alpha * g_v * g_dob}, Polynomial{0.0, g_v, 1.0}};
}

TransferFunction sensitivity_tf(double alpha, double g_dob, double g_v) {
    if (!(alpha > 0.0) || !(g_dob > 0.0) || !(g_v > 0.0)) throw ConfigError("sensitivity_tf: parameters must be > 0");
    return {Polynomial{0.0, g_v, 1.0}, Polynomial{alpha * g_v * g_dob, g_v, 1.0}};
}

TransferFunction position_loop_ideal(double alpha, double g_dob, const PositionGains& gains) {
    gains.validate();
    const double Kp = gains.K_p, Kd = gains.K_D;
    const Polynomial pd{Kp, Kd, 1.0};
    Polynomial num = kS * Polynomial{g_dob, 1.0} * pd;
    Polynomial den{g_dob * Kp, Kp + g_dob * Kd, g_dob + Kd, 1.0 / alpha};
    return {std::move(num), std::move(den)};
}

TransferFunction position_loop_finite_gv(double alpha, double g_dob, double g_v, const PositionGains& gains) {
    gains.validate();
    const Polynomial pd{gains.K_p, gains.K_D, 1.0};
    Polynomial num = alpha * (Polynomial{g_v, 1.0} * Polynomial{g_dob, 1.0} * pd);
    Polynomial den = Polynomial{0.0, 0.0, alpha * g_v * g_dob, g_v, 1.0} + num;
    return {std::move(num), std::move(den)};
}

TransferFunction compose_position_loop(const PlantParams& plant, const ObserverConfig& obs,
                                       const PositionGains& gains, Velocity velocity) {
    plant.validate();
    obs.validate();
    gains.validate();
    // Signals are carried at acceleration level: a = (K_tau/J_m) I, v = H a/s, q = a/s^2.
    const double to_acc = plant.K_tau / plant.J_m;
    const double to_current = plant.J_mn / plant.K_tau_n;
    const TransferFunction H = velocity_filter(obs.g_v, velocity);
    const TransferFunction Qd = low_pass(obs.g_dob);

    // DOB: I_cmp = Qd (I - (J_mn/K_tau_n) s v) = Qd (1 - (J_mn/K_tau_n)(K_tau/J_m) H) I, positive feedback.
    const TransferFunction dob_path = -1.0 * (Qd * (TransferFunction::gain(1.0) + (-to_current * to_acc) * H));
    const TransferFunction current_gain = tf_feedback(TransferFunction::gain(1.0), dob_path);
    const TransferFunction inner = (to_current * to_acc) * current_gain;  // a / q_ddot_des

    // q_ddot_des = (s^2+K_D s+K_p)/s^2 a_ref - (K_D s H + K_p)/s^2 a
    const TransferFunction feedforward{Polynomial{gains.K_p, gains.K_D, 1.0}, Polynomial{1.0}};
    const TransferFunction feedback = TransferFunction{Polynomial{0.0, gains.K_D}, Polynomial{1.0}} * H +
                                      TransferFunction::gain(gains.K_p);
    const TransferFunction forward = inner * TransferFunction{Polynomial{1.0}, Polynomial{0.0, 0.0, 1.0}};
    return tf_feedback(forward, feedback) * feedforward;
}

PolynomialDiscrepancy compare_characteristic(const Polynomial& a, const Polynomial& b) {
    PolynomialDiscrepancy d{};
    d.same_degree = a.degree() == b.degree();
    d.leading_ratio = a.leading() / b.leading();
    const Polynomial an = a * (1.0 / a.leading());
    const Polynomial bn = b * (1.0 / b.leading());
    const std::size_t n = std::max(an.coeffs().size(), bn.coeffs().size());
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = an.coeff(k), y = bn.coeff(k);
        const double scale = std::max({std::abs(x), std::abs(y), std::numeric_limits<double>::min()});
        worst = std::max(worst, std::abs(x - y) / scale);
    }
    d.max_relative_error = worst;
    std::ostringstream os;
    os << "deg " << (a.degree() ? std::to_string(*a.degree()) : "none") << " vs "
       << (b.degree() ? std::to_string(*b.degree()) : "none") << ", leading ratio " << d.leading_ratio
       << ", max relative coefficient error " << worst << " [" << format_polynomial(an) << "] vs ["
       << format_polynomial(bn) << "]";
    d.summary = os.str();
    return d;
}

RfobEstimator rfob_estimator_tf(const ObserverConfig& obs) {
    obs.validate();
    return {TransferFunction{Polynomial{obs.K_tau_hat * obs.g_rfob}, Polynomial{obs.g_rfob, 1.0}},
            TransferFunction{Polynomial{0.0, -obs.J_hat * obs.g_rfob}, Polynomial{obs.g_rfob, 1.0}}};
}

double ForceLoopModel::max_zero_real() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& z : zeros) m = std::max(m, z.real());
    return m;
}

ForceLoopModel compose_force_loop(const PlantParams& plant, const ObserverConfig& obs, const Environment& env,
                                  double C_f, Velocity velocity) {
    plant.validate();
    obs.validate();
    env.validate();
    if (env.D_env == 0.0 && env.K_env == 0.0)
        throw NumericError(NumericFault::no_contact, "compose_force_loop: environment has no stiffness or damping");
    if (!(C_f > 0.0)) throw ConfigError("compose_force_loop: C_f must be > 0");

    const double J = plant.J_m, Kt = plant.K_tau;
    const double Jn = plant.J_mn, Ktn = plant.K_tau_n;
    const double Jh = obs.J_hat, Kth = obs.K_tau_hat;
    const double gd = obs.g_dob, gr = obs.g_rfob;

    // Velocity filter H = hn/hd.
    const Polynomial hn = velocity == Velocity::ideal ? Polynomial{1.0} : Polynomial{obs.g_v};
    const Polynomial hd = velocity == Velocity::ideal ? Polynomial{1.0} : Polynomial{obs.g_v, 1.0};
    const Polynomial s2 = monomial(2);
    const Polynomial E{env.K_env, env.D_env};
    const Polynomial Pd = Polynomial{0.0, 0.0, J} + E;  // X = K_tau I / Pd

    // Current loop: I (s hd Pd + g_dob (J_mn K_tau/K_tau_n) hn s^2) = (s+g_dob) hd Pd I_des.
    const Polynomial delta = kS * hd * Pd + (gd * Jn * Kt / Ktn) * (hn * s2);

    // RFOB bracket K_tau_hat hd Pd - J_hat K_tau hn s^2. The s^2 coefficient of
    // the ideal-velocity form is formed as one scalar so J_hat = J_m cancels exactly.
    Polynomial bracket;
    if (velocity == Velocity::ideal) {
        double lead = Kth * J - Jh * Kt;
        if (std::abs(lead) <= 1e-14 * std::max(Kth * J, Jh * Kt)) lead = 0.0;
        bracket = Polynomial{Kth * env.K_env, Kth * env.D_env, lead};
    } else {
        bracket = Kth * (hd * Pd) - (Jh * Kt) * (hn * s2);
    }

    const Polynomial ln = (Jn / Ktn * gr) * (Polynomial{gd, 1.0} * bracket);
    const Polynomial ld = Polynomial{gr, 1.0} * delta;
    const Polynomial char_poly = ld + C_f * ln;
    const Polynomial force_num = (C_f * Jn / Ktn * Kt) * (E * Polynomial{gd, 1.0} * hd * Polynomial{gr, 1.0});

    ForceLoopModel m{TransferFunction{ln, ld}, TransferFunction{C_f * ln, char_poly},
                     TransferFunction{force_num, char_poly}, {}, {}};
    m.zeros = m.open_loop.zeros();
    m.poles = m.open_loop.poles();
    return m;
}

}  // namespace doblab
