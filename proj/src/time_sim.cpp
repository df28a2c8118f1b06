#include "doblab/time_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "doblab/error.hpp"

namespace doblab {

void SimConfig::validate(const ObserverConfig& obs) const {
    std::vector<std::string> errs;
    if (!(dt > 0.0) || !std::isfinite(dt)) errs.emplace_back("sim.dt must be > 0");
    if (!(duration > 0.0) || !std::isfinite(duration)) errs.emplace_back("sim.duration must be > 0");
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) errs.emplace_back("sim.noise_std must be >= 0");
    if (!std::isfinite(initial_position)) errs.emplace_back("sim.initial_position must be finite");
    const double g_max = std::max({obs.g_dob, obs.g_rfob, obs.g_v});
    if (dt > 0.0 && dt * g_max > 0.5)
        errs.emplace_back("sim.dt * max cutoff = " + std::to_string(dt * g_max) + " exceeds 0.5");
    if (dt > 0.0 && duration < 10.0 * dt) errs.emplace_back("sim.duration must cover at least 10 steps");
    if (!errs.empty()) {
        std::string msg;
        for (const auto& e : errs) msg += (msg.empty() ? "" : "; ") + e;
        throw ConfigError(msg);
    }
}

std::size_t SimConfig::sample_count() const {
    // The small slack keeps durations that are exact multiples of dt from losing their last sample.
    return static_cast<std::size_t>(std::floor(duration / dt * (1.0 + 1e-12))) + 1;
}

void FrictionModel::validate() const {
    if (!(coulomb >= 0.0) || !(viscous >= 0.0) || !(smoothing_velocity > 0.0))
        throw ConfigError("friction: coulomb, viscous must be >= 0 and smoothing_velocity > 0");
}

double FrictionModel::force(double qdot) const {
    return coulomb * std::tanh(qdot / smoothing_velocity) + viscous * qdot;
}

PositionReference::Sample PositionReference::at(double t) const {
    Sample r{0.0, 0.0, 0.0};
    if (sinusoid && t >= sinusoid->t_start && t <= sinusoid->t_end) {
        const double w = 2.0 * std::numbers::pi * sinusoid->frequency_hz;
        const double ph = w * (t - sinusoid->t_start);
        r.q += sinusoid->amplitude * std::sin(ph);
        r.qd += sinusoid->amplitude * w * std::cos(ph);
        r.qdd -= sinusoid->amplitude * w * w * std::sin(ph);
    }
    for (const auto& seg : segments) {
        if (t < seg.t0) continue;
        // Past t1 the segment holds its end value.
        if (t > seg.t1) {
            r.q += seg.shape(seg.t1 - seg.t0);
            continue;
        }
        const double tau = t - seg.t0;
        const Polynomial d1 = seg.shape.derivative();
        r.q += seg.shape(tau);
        r.qd += d1(tau);
        r.qdd += d1.derivative()(tau);
    }
    return r;
}

namespace {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
State<N> axpy(const State<N>& x, double h, const State<N>& k) {
    State<N> y;
    for (std::size_t i = 0; i < N; ++i) y[i] = x[i] + h * k[i];
    return y;
}

// One classical RK4 step of x' = f(t, x).
template <std::size_t N, class F>
State<N> rk4_step(const F& f, double t, const State<N>& x, double h) {
    const State<N> k1 = f(t, x);
    const State<N> k2 = f(t + 0.5 * h, axpy(x, 0.5 * h, k1));
    const State<N> k3 = f(t + 0.5 * h, axpy(x, 0.5 * h, k2));
    const State<N> k4 = f(t + h, axpy(x, h, k3));
    State<N> y;
    for (std::size_t i = 0; i < N; ++i) y[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return y;
}

// True when the run must stop: the state is non-finite and truncation is on.
template <std::size_t N>
bool diverged(const State<N>& x, double t, const SimConfig& sim, Trajectory& traj) {
    for (double v : x)
        if (!std::isfinite(v)) {
            if (sim.truncate_on_divergence) {
                traj.diverged_at = t;
                return true;
            }
            std::ostringstream os;
            os << "simulation diverged at t = " << t << " s";
            throw NumericError(NumericFault::divergence, os.str());
        }
    return false;
}

// Per-step held measurement noise; no draws at all when the level is zero.
class NoiseSource {
public:
    NoiseSource(std::uint64_t seed, double std_dev) : rng_(seed), dist_(0.0, std_dev > 0.0 ? std_dev : 1.0), on_(std_dev > 0.0) {}
    double next() { return on_ ? dist_(rng_) : 0.0; }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> dist_;
    bool on_;
};

// Realizable observer Q(K I - J s v) with Q = g/(s+g): z' = g (K I + g J v - z), estimate z - g J v.
struct Observer {
    double g, K, J;
    double estimate(double z, double v) const { return z - g * J * v; }
    double rate(double z, double I, double v) const { return g * (K * I + g * J * v - z); }
};

}  // namespace

Trajectory simulate_position(const PlantParams& plant, const ObserverConfig& obs, const PositionGains& gains,
                             const PositionReference& ref, const FrictionModel& friction, const SimConfig& sim) {
    plant.validate();
    obs.validate();
    gains.validate();
    friction.validate();
    sim.validate(obs);

    const Observer dob{obs.g_dob, plant.K_tau_n, plant.J_mn};
    const double gv = obs.g_v;
    NoiseSource noise(sim.seed, sim.noise_std);

    // x = [q, qdot, v_meas, z_dob]
    struct Outputs {
        double v, F_dis_hat, I;
    };
    const auto outputs = [&](double t, const State<4>& x) {
        const double v = x[2];
        const double F_dis_hat = dob.estimate(x[3], v);
        const auto r = ref.at(t);
        const double a_des = r.qdd + gains.K_D * (r.qd - v) + gains.K_p * (r.q - x[0]);
        const double I = (plant.J_mn * a_des + F_dis_hat) / plant.K_tau_n;
        return Outputs{v, F_dis_hat, I};
    };

    const std::size_t n = sim.sample_count();
    Trajectory traj;
    traj.dt = sim.dt;
    traj.samples.reserve(n);
    State<4> x{sim.initial_position, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * sim.dt;
        const Outputs o = outputs(t, x);
        traj.samples.push_back({t, x[0], x[1], o.v, o.I, o.F_dis_hat, 0.0, 0.0, false});
        if (k + 1 == n) break;
        const double nk = noise.next();
        const auto f = [&](double ts, const State<4>& s) {
            const Outputs os = outputs(ts, s);
            return State<4>{s[1], (plant.K_tau * os.I - friction.force(s[1])) / plant.J_m, gv * (s[1] + nk - s[2]),
                            dob.rate(s[3], os.I, os.v)};
        };
        x = rk4_step(f, t, x, sim.dt);
        if (diverged(x, t + sim.dt, sim, traj)) break;
    }
    return traj;
}

Trajectory simulate_force(const PlantParams& plant, const ObserverConfig& obs, double C_f, const ForceReference& ref,
                          const Environment& env, const FrictionModel& friction, const SimConfig& sim,
                          ContactMode contact) {
    plant.validate();
    obs.validate();
    env.validate();
    friction.validate();
    sim.validate(obs);
    if (!(C_f > 0.0)) throw ConfigError("C_f must be > 0");
    if (!std::isfinite(ref.initial) || !std::isfinite(ref.step) || !std::isfinite(ref.t_step))
        throw ConfigError("force reference must be finite");
    if (ref.initial < 0.0) throw ConfigError("force reference initial value must be >= 0");

    const Observer dob{obs.g_dob, plant.K_tau_n, plant.J_mn};
    const Observer rfob{obs.g_rfob, obs.K_tau_hat, obs.J_hat};
    const double gv = obs.g_v;
    NoiseSource noise(sim.seed, sim.noise_std);

    const auto wall = [&](double q, double qd) -> std::pair<double, bool> {
        const double pen = q - env.q_e;
        const double F = env.K_env * pen + env.D_env * (qd - env.qdot_e);
        if (contact == ContactMode::bilateral) return {F, true};
        if (pen <= 0.0) return {0.0, false};
        return {std::max(0.0, F), true};
    };

    // x = [q, qdot, v_meas, z_dob, z_rfob]
    struct Outputs {
        double v, F_dis_hat, F_l_hat, I;
    };
    const auto outputs = [&](double t, const State<5>& x) {
        const double v = x[2];
        const double F_dis_hat = dob.estimate(x[3], v);
        const double F_l_hat = rfob.estimate(x[4], v);
        const double a_des = C_f * (ref.at(t) - F_l_hat);
        const double I = (plant.J_mn * a_des + F_dis_hat) / plant.K_tau_n;
        return Outputs{v, F_dis_hat, F_l_hat, I};
    };

    State<5> x{sim.initial_position, 0.0, 0.0, 0.0, 0.0};
    if (ref.initial > 0.0) {
        if (env.K_env <= 0.0) throw ConfigError("a preloaded start needs K_env > 0");
        // Static equilibrium: F_l_hat = F_ref, K_tau I = F_l, observers settled at zero velocity.
        const double I0 = ref.initial / obs.K_tau_hat;
        x[0] = env.q_e + plant.K_tau * I0 / env.K_env;
        x[3] = plant.K_tau_n * I0;
        x[4] = obs.K_tau_hat * I0;
    }

    const std::size_t n = sim.sample_count();
    Trajectory traj;
    traj.dt = sim.dt;
    traj.samples.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * sim.dt;
        const Outputs o = outputs(t, x);
        const auto [F_l, touching] = wall(x[0], x[1]);
        traj.samples.push_back({t, x[0], x[1], o.v, o.I, o.F_dis_hat, o.F_l_hat, F_l, touching});
        if (k + 1 == n) break;
        const double nk = noise.next();
        const auto f = [&](double ts, const State<5>& s) {
            const Outputs os = outputs(ts, s);
            const double Fw = wall(s[0], s[1]).first;
            return State<5>{s[1], (plant.K_tau * os.I - Fw - friction.force(s[1])) / plant.J_m,
                            gv * (s[1] + nk - s[2]), dob.rate(s[3], os.I, os.v), rfob.rate(s[4], os.I, os.v)};
        };
        x = rk4_step(f, t, x, sim.dt);
        if (diverged(x, t + sim.dt, sim, traj)) break;
    }
    return traj;
}

Trajectory simulate_free_motion(const PlantParams& plant, double q0, double qdot0, const SimConfig& sim) {
    plant.validate();
    if (!(sim.dt > 0.0) || !(sim.duration >= 10.0 * sim.dt)) throw ConfigError("invalid sim.dt / sim.duration");
    const std::size_t n = sim.sample_count();
    Trajectory traj;
    traj.dt = sim.dt;
    traj.samples.reserve(n);
    State<2> x{q0, qdot0};
    const auto f = [](double, const State<2>& s) { return State<2>{s[1], 0.0}; };
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * sim.dt;
        traj.samples.push_back({t, x[0], x[1], x[1], 0.0, 0.0, 0.0, 0.0, false});
        if (k + 1 == n) break;
        x = rk4_step(f, t, x, sim.dt);
        if (diverged(x, t + sim.dt, sim, traj)) break;
    }
    return traj;
}

double signal_value(const TrajectorySample& s, Signal which) {
    switch (which) {
        case Signal::q_m: return s.q_m;
        case Signal::qdot_m: return s.qdot_m;
        case Signal::v_meas: return s.v_meas;
        case Signal::I_m: return s.I_m;
        case Signal::F_dis_hat: return s.F_dis_hat;
        case Signal::F_l_hat: return s.F_l_hat;
        case Signal::F_l_true: return s.F_l_true;
    }
    return 0.0;
}

namespace {

std::pair<std::size_t, std::size_t> window_range(const Trajectory& traj, double t0, double t1) {
    if (!(t1 >= t0)) throw ConfigError("metric window: t1 must be >= t0");
    const double slack = 1e-9 * std::max(traj.dt, 1e-300);
    std::size_t lo = traj.samples.size(), hi = 0;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const double t = traj.samples[i].t;
        if (t >= t0 - slack && t <= t1 + slack) {
            lo = std::min(lo, i);
            hi = i + 1;
        }
    }
    if (lo >= hi) throw ConfigError("metric window contains no samples");
    return {lo, hi};
}

}  // namespace

ResponseMetrics compute_metrics(const Trajectory& traj, Signal which, const std::function<double(double)>& reference,
                                const MetricWindow& window) {
    if (!(window.late_fraction > 0.0 && window.late_fraction <= 1.0))
        throw ConfigError("metric window: late_fraction must be in (0, 1]");
    const auto [lo, hi] = window_range(traj, window.t0, window.t1);
    const auto& S = traj.samples;
    if (traj.diverged_at && *traj.diverged_at <= window.t1) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return {inf, inf, inf, inf, inf};
    }

    const double r_final = reference(S[hi - 1].t);
    double scale = 0.0;
    for (std::size_t i = lo; i < hi; ++i) scale = std::max(scale, std::abs(reference(S[i].t)));
    if (scale == 0.0) scale = 1.0;

    ResponseMetrics m{};
    m.overshoot = 0.0;
    if (r_final != 0.0) {
        const double sign = r_final > 0.0 ? 1.0 : -1.0;
        double peak = -std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i < hi; ++i) peak = std::max(peak, sign * signal_value(S[i], which));
        m.overshoot = std::max(0.0, (peak - std::abs(r_final)) / std::abs(r_final));
    }

    const double band = 0.02 * (r_final != 0.0 ? std::abs(r_final) : scale);
    std::optional<std::size_t> last_out;
    for (std::size_t i = lo; i < hi; ++i)
        if (std::abs(signal_value(S[i], which) - r_final) > band) last_out = i;
    if (!last_out)
        m.settling_time = 0.0;
    else if (*last_out + 1 >= hi)
        m.settling_time = std::numeric_limits<double>::infinity();
    else
        m.settling_time = S[*last_out + 1].t - S[lo].t;

    const double late_t0 = S[hi - 1].t - window.late_fraction * (S[hi - 1].t - S[lo].t);
    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        if (S[i].t < late_t0) continue;
        const double e = signal_value(S[i], which) - reference(S[i].t);
        sum += e;
        sum2 += e * e;
        ++count;
    }
    const double mean = sum / static_cast<double>(count);
    m.steady_state_error = std::abs(mean);
    m.oscillation_index = std::max(0.0, sum2 / static_cast<double>(count) - mean * mean) / (scale * scale);

    double nv = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double d = S[i].v_meas - S[i].qdot_m;
        nv += d * d;
    }
    m.velocity_noise_rms = std::sqrt(nv / static_cast<double>(hi - lo));
    return m;
}

double sinusoid_amplitude(const Trajectory& traj, Signal which, const std::function<double(double)>& reference,
                          double omega, double t0, double t1) {
    const auto [lo, hi] = window_range(traj, t0, t1);
    if (hi - lo < 3) throw ConfigError("sinusoid fit needs at least 3 samples");
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    for (std::size_t i = lo; i < hi; ++i) {
        const double t = traj.samples[i].t;
        const Eigen::Vector3d phi{std::sin(omega * t), std::cos(omega * t), 1.0};
        A += phi * phi.transpose();
        b += phi * (signal_value(traj.samples[i], which) - reference(t));
    }
    const Eigen::Vector3d c = A.ldlt().solve(b);
    return std::hypot(c[0], c[1]);
}

double difference_rms(const Trajectory& a, const Trajectory& b, Signal which, double t0, double t1) {
    if (a.samples.size() != b.samples.size() || a.dt != b.dt)
        throw ConfigError("difference_rms: trajectories must share the time grid");
    const auto [lo, hi] = window_range(a, t0, t1);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double d = signal_value(a.samples[i], which) - signal_value(b.samples[i], which);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(hi - lo));
}

std::vector<double> tf_step_response(const TransferFunction& tf, double amplitude, double dt, std::size_t samples) {
    if (!tf.is_proper()) throw ConfigError("tf_step_response: transfer function must be proper");
    if (!(dt > 0.0)) throw ConfigError("tf_step_response: dt must be > 0");
    const Polynomial& den = tf.den();
    const Polynomial& num = tf.num();
    const std::size_t n = den.degree().value_or(0);
    // Monic denominator; split off the direct feedthrough.
    const double d_lead = den.leading();
    const double D = n < num.coeffs().size() ? num.coeff(n) / d_lead : 0.0;
    std::vector<double> a(n), c(n);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = den.coeff(k) / d_lead;
        c[k] = num.coeff(k) / d_lead - D * a[k];
    }
    // Controllable canonical form: x_k' = x_{k+1}, x_{n-1}' = u - sum a_k x_k, y = sum c_k x_k + D u.
    std::vector<double> x(n, 0.0), k1(n), k2(n), k3(n), k4(n), tmp(n);
    const auto f = [&](const std::vector<double>& s, std::vector<double>& out) {
        double acc = amplitude;
        for (std::size_t k = 0; k < n; ++k) acc -= a[k] * s[k];
        for (std::size_t k = 0; k + 1 < n; ++k) out[k] = s[k + 1];
        if (n > 0) out[n - 1] = acc;
    };
    std::vector<double> y;
    y.reserve(samples);
    for (std::size_t step = 0; step < samples; ++step) {
        double out = D * amplitude;
        for (std::size_t k = 0; k < n; ++k) out += c[k] * x[k];
        y.push_back(out);
        if (step + 1 == samples || n == 0) continue;
        f(x, k1);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = x[k] + 0.5 * dt * k1[k];
        f(tmp, k2);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = x[k] + 0.5 * dt * k2[k];
        f(tmp, k3);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = x[k] + dt * k3[k];
        f(tmp, k4);
        for (std::size_t k = 0; k < n; ++k) x[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
    return y;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,q_m,qdot_m,v_meas,I_m,F_dis_hat,F_l_hat,F_l_true,contact\n";
    out.reserve(out.size() + traj.samples.size() * 160);
    for (const auto& s : traj.samples) {
        for (double v : {s.t, s.q_m, s.qdot_m, s.v_meas, s.I_m, s.F_dis_hat, s.F_l_hat, s.F_l_true}) {
            out += format_double(v);
            out += ',';
        }
        out += s.contact ? "1\n" : "0\n";
    }
    return out;
}

}  // namespace doblab
