// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doblab/config.hpp"
#include "doblab/loop_builder.hpp"
#include "doblab/observer_model.hpp"
#include "doblab/scenario.hpp"
#include "doblab/stability.hpp"
#include "doblab/time_sim.hpp"
#include "oracles.hpp"

using namespace doblab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> coeffs(const Polynomial& p) { return {p.coeffs().begin(), p.coeffs().end()}; }

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Constraint verdict against the damping threshold.
Outcome bandwidth_constraint() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> la(-2, 2), lg(0, 4), lk(-1, 2);
    std::size_t mismatches = 0, near = 0;
    for (int k = 0; k < 10000; ++k) {
        const double a = std::pow(10.0, la(rng)), g = std::pow(10.0, lg(rng)), gv = g * std::pow(10.0, lk(rng));
        const DesignVerdict v = check_bandwidth_constraint(a, g, gv);
        const double xi = 0.5 * std::sqrt((gv / g) / a);
        if (std::abs(xi - kCriticalDamping) <= 1e-9) {
            ++near;
            continue;
        }
        if (v.satisfied != (xi >= kCriticalDamping)) ++mismatches;
    }
    const double elapsed = seconds_since(t0);
    const DesignVerdict b = check_bandwidth_constraint(1.0, 500.0, 1000.0);
    o.require(mismatches == 0, std::to_string(mismatches) + " verdict mismatches");
    o.require(std::abs(b.xi - 0.70711) <= 1e-5, "boundary xi " + fmt("%.8f", b.xi));
    o.require(std::abs(b.margin) <= 1e-9, "boundary margin " + fmt("%g", b.margin));
    o.require(b.satisfied, "boundary case reported violated");
    o.require(elapsed < 1.0, "runtime " + fmt("%.3f s", elapsed));
    o.note("10000 draws, " + std::to_string(near) + " within 1e-9 of threshold, " + fmt("%.3f s", elapsed));
    return o;
}

// T_Sen (1 + L_DOB) = 1 cross-multiplied, and the second-order denominator.
Outcome sensitivity_identity() {
    Outcome o;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> la(-1, 1), lg(1, 3), lk(-0.5, 1.5);
    double worst = 0.0, worst_den = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double a = std::pow(10.0, la(rng)), g = std::pow(10.0, lg(rng)), gv = g * std::pow(10.0, lk(rng));
        const TransferFunction s = sensitivity_tf(a, g, gv);
        const TransferFunction l = dob_open_loop(a, g, gv, Velocity::filtered);
        // num_S (den_L + num_L) must equal den_S den_L.
        auto lhs = oracle::convolve(coeffs(s.num()), coeffs(l.den() + l.num()));
        auto rhs = oracle::convolve(coeffs(s.den()), coeffs(l.den()));
        const std::size_t n = std::max(lhs.size(), rhs.size());
        lhs.resize(n, 0.0);
        rhs.resize(n, 0.0);
        double scale = 0.0, err = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(rhs[i]));
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(lhs[i] - rhs[i]) / scale);
        worst = std::max(worst, err);
        const SecondOrder so = second_order_params(a, gv / g, g);
        const Polynomial& d = s.den();
        const std::vector<double> want{so.w_n * so.w_n, 2.0 * so.xi * so.w_n, 1.0};
        worst_den = std::max(worst_den, oracle::normalized_coeff_error(coeffs(d), want));
        if (*d.degree() != 2 || d.leading() != 1.0) o.require(false, "denominator not monic quadratic");
    }
    o.require(worst <= 1e-10, "identity error " + fmt("%.3g", worst));
    o.require(worst_den <= 1e-10, "denominator error " + fmt("%.3g", worst_den));
    o.note("max identity error " + fmt("%.2e", worst) + ", max denominator error " + fmt("%.2e", worst_den));
    return o;
}

// Peak |T_Sen| non-decreasing in alpha at g_v = 1000, g_dob = 100.
Outcome sensitivity_peak_monotone() {
    Outcome o;
    std::vector<double> peaks;
    for (double a : {0.5, 1.0, 2.0, 4.0, 8.0}) peaks.push_back(sensitivity_peak(sensitivity_tf(a, 100.0, 1000.0), 1.0, 1e6).magnitude);
    for (std::size_t i = 1; i < peaks.size(); ++i) o.require(peaks[i] >= peaks[i - 1] - 1e-6, "peak drops at index " + std::to_string(i));
    o.require(peaks.back() > peaks.front() + 1e-6, "alpha 8 peak does not exceed alpha 0.5 peak");
    std::string s = "peaks";
    for (double p : peaks) s += " " + fmt("%.5f", p);
    o.note(s);
    return o;
}

// Routh verdict against the root finder on random polynomials.
Outcome routh_oracle() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-5, 5);
    std::size_t compared = 0, agreed = 0, skipped = 0;
    while (compared < 10000) {
        std::vector<double> c(static_cast<std::size_t>(3 + rng() % 5));  // degree 2..6
        for (auto& x : c) x = u(rng);
        c.back() = std::abs(c.back()) + 1e-3;
        const RouthReport r = routh_hurwitz(Polynomial(c));
        if (r.degenerate) {
            ++skipped;
            continue;
        }
        const auto roots = oracle::companion_roots(c);
        const bool stable = std::all_of(roots.begin(), roots.end(), [](Complex z) { return z.real() < -1e-9; });
        agreed += stable == r.stable;
        ++compared;
    }
    const RouthOracleStats lib = routh_oracle_sweep(10000, 4);
    const double elapsed = seconds_since(t0);
    o.require(agreed == compared, std::to_string(compared - agreed) + " disagreements");
    o.require(lib.agreed == lib.compared && lib.compared == 10000, "library sweep disagreements");
    o.require(elapsed < 30.0, "runtime " + fmt("%.2f s", elapsed));
    o.note(std::to_string(agreed) + "/" + std::to_string(compared) + " agree (" + std::to_string(skipped) +
           " degenerate redrawn), library sweep " + std::to_string(lib.agreed) + "/" + std::to_string(lib.compared) + ", " +
           fmt("%.2f s", elapsed));
    return o;
}

// Alpha = 1 factorization and the critical alpha flip.
Outcome position_structure() {
    Outcome o;
    const PositionGains gains;
    const double g = 300.0;
    const auto got = oracle::companion_roots(coeffs(position_loop_ideal(1.0, g, gains).den()));
    std::vector<Complex> want{{-g, 0.0}};
    for (const auto& r : oracle::companion_roots({gains.K_p, gains.K_D, 1.0})) want.push_back(r);
    // Match each expected root to a distinct computed one.
    std::vector<bool> used(got.size(), false);
    double worst = 0.0;
    for (const auto& w : want) {
        std::size_t best = 0;
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < got.size(); ++i)
            if (!used[i] && std::abs(got[i] - w) < d) d = std::abs(got[i] - w), best = i;
        used[best] = true;
        worst = std::max(worst, d / std::max(1.0, std::abs(w)));
    }
    o.require(got.size() == 3 && worst <= 1e-6, "factorization error " + fmt("%.3g", worst));

    const double a_star = third_order_alpha_condition(g, gains);
    const double closed = g * gains.K_p / ((g + gains.K_D) * (gains.K_p + g * gains.K_D));
    o.require(std::abs(a_star - closed) <= 1e-12 * closed, "closed form mismatch");
    const bool above = routh_hurwitz(position_loop_ideal(a_star * (1 + 1e-6), g, gains).den()).stable;
    const bool below = routh_hurwitz(position_loop_ideal(a_star * (1 - 1e-6), g, gains).den()).stable;
    o.require(above && !below, "Routh verdict does not flip across alpha*");
    double lo = a_star * 0.5, hi = a_star * 2.0;
    while (hi - lo > 1e-9 * a_star) {
        const double mid = 0.5 * (lo + hi);
        (routh_hurwitz(position_loop_ideal(mid, g, gains).den()).stable ? hi : lo) = mid;
    }
    const double rel = std::abs(0.5 * (lo + hi) - a_star) / a_star;
    o.require(rel <= 1e-6, "bisected boundary off by " + fmt("%.3g", rel));
    o.note("root error " + fmt("%.2e", worst) + ", alpha* " + fmt("%.6f", a_star) + ", bisection offset " + fmt("%.1e", rel));
    return o;
}

// Block-derived characteristic polynomial against the closed form.
Outcome block_cross_check() {
    Outcome o;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> la(-1, 1), lg(1.5, 3), kp(10, 5000), kd(1, 300);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double a = std::pow(10.0, la(rng)), g = std::pow(10.0, lg(rng));
        const PositionGains gains{kp(rng), kd(rng)};
        PlantParams plant;
        plant.J_mn = a * plant.J_m * plant.K_tau_n / plant.K_tau;
        ObserverConfig obs;
        obs.g_dob = g;
        const PolynomialDiscrepancy d = compare_characteristic(compose_position_loop(plant, obs, gains, Velocity::ideal).den(),
                                                               position_loop_ideal(alpha(plant), g, gains).den());
        o.require(d.same_degree, "degree mismatch in case " + std::to_string(k));
        o.require(d.leading_ratio > 0.0, "negative scale in case " + std::to_string(k));
        worst = std::max(worst, d.max_relative_error);
    }
    o.require(worst <= 1e-8, "coefficient error " + fmt("%.3g", worst));
    // Finite velocity bandwidth: reported, not judged.
    const SystemParams p;
    const PolynomialDiscrepancy f = compare_characteristic(compose_position_loop(p.plant, p.obs, p.gains, Velocity::filtered).den(),
                                                           position_loop_finite_gv(alpha(p.plant), p.obs.g_dob, p.obs.g_v, p.gains).den());
    o.note("20 cases, max error " + fmt("%.2e", worst) + "; finite-g_v form: " + f.summary);
    return o;
}

// RHP zeros appear only for J_hat > J_m.
Outcome rhp_zeros() {
    Outcome o;
    const SystemParams p;
    const auto z = rhp_zero_scan(p.plant, p.obs, p.env, p.C_f, {0.8, 1.0, 1.5}, Velocity::ideal);
    o.require(z.size() == 3, "scan size");
    if (z.size() == 3) {
        o.require(!z[0].rhp_zero, "RHP zero at 0.8");
        o.require(!z[1].rhp_zero, "RHP zero at 1.0");
        o.require(z[2].rhp_zero, "no RHP zero at 1.5");
        o.note("max zero real parts " + fmt("%.4g", z[0].max_zero_real) + ", " + fmt("%.4g", z[1].max_zero_real) + ", " +
               fmt("%.4g", z[2].max_zero_real));
    }
    return o;
}

std::optional<double> critical_force_gain(const SystemParams& p) {
    const ForceLoopModel m = compose_force_loop(p.plant, p.obs, p.env, 1.0, Velocity::ideal);
    return root_locus(m.open_loop.num(), m.open_loop.den(), log_gain_grid(1.0, 1e6, 1200)).critical_gain;
}

double or_inf(const std::optional<double>& v) { return v ? *v : std::numeric_limits<double>::infinity(); }

// Root-locus trends over C_f.
Outcome locus_trends() {
    Outcome o;
    const SystemParams base;
    const auto crit = critical_force_gain(base);
    o.require(crit.has_value(), "no critical C_f for the default loop");
    SystemParams wide = base;
    wide.obs.g_rfob = 3.0 * base.obs.g_dob;
    const auto crit3 = critical_force_gain(wide);
    o.require(or_inf(crit3) > or_inf(crit), "g_rfob = 3 g_dob critical " + fmt("%.6g", or_inf(crit3)) + " not above " +
                                                fmt("%.6g", or_inf(crit)));
    std::vector<double> kc, err;
    for (double r : {1.0, 1.25, 1.5, 1.75, 2.0}) {
        SystemParams p = base;
        p.obs.K_tau_hat = r * base.plant.K_tau;
        kc.push_back(or_inf(critical_force_gain(p)));
        const double dc = compose_force_loop(p.plant, p.obs, p.env, p.C_f, Velocity::ideal).true_force_tf.at({0.0, 0.0}).real();
        err.push_back(std::abs(1.0 - dc));
    }
    for (std::size_t i = 1; i < kc.size(); ++i) {
        o.require(kc[i] >= kc[i - 1], "critical C_f decreases at K_tau_hat ratio index " + std::to_string(i));
        o.require(err[i] > err[i - 1], "DC force error does not grow at index " + std::to_string(i));
    }
    std::string s = "critical C_f " + fmt("%.1f", or_inf(crit)) + " (g_rfob=g_dob), " + fmt("%.1f", or_inf(crit3)) +
                    " (g_rfob=3g_dob); over K_tau_hat ratio:";
    for (double v : kc) s += " " + fmt("%.1f", v);
    o.note(s);
    return o;
}

// Simulator against the linear loop models.
Outcome simulation_vs_linear() {
    Outcome o;
    {
        PositionReference ref;
        const double w = 2.0 * std::numbers::pi;
        ref.sinusoid = PositionReference::Sinusoid{0.1, 1.0, 1.0, 10.0};
        SimConfig sim;
        sim.dt = 1e-4;
        sim.duration = 10.0;
        const SystemParams p;
        const Trajectory t = simulate_position(p.plant, p.obs, p.gains, ref, FrictionModel{}, sim);
        const auto qref = [&](double tt) { return ref.at(tt).q; };
        const double amp = sinusoid_amplitude(t, Signal::q_m, qref, w, 3.0, 10.0);
        const double lin = 0.1 * std::abs(1.0 - tf_eval(compose_position_loop(p.plant, p.obs, p.gains, Velocity::filtered), w));
        const double rel = std::abs(amp - lin) / lin;
        o.require(rel <= 0.05, "position amplitude off by " + fmt("%.3g", rel));
        o.note("position amplitude " + fmt("%.4e", amp) + " vs " + fmt("%.4e", lin) + " (" + fmt("%.2f%%", 100 * rel) + ")");
    }
    {
        const SystemParams p;
        ForceReference ref{5.0, 1.0, 0.0};
        SimConfig sim;
        sim.dt = 1e-5;
        sim.duration = 0.5;
        const Trajectory t = simulate_force(p.plant, p.obs, p.C_f, ref, p.env, FrictionModel{}, sim, ContactMode::bilateral);
        const TransferFunction cl = compose_force_loop(p.plant, p.obs, p.env, p.C_f, Velocity::filtered).closed_loop;
        const auto lin = tf_step_response(cl, 1.0, sim.dt, t.samples.size());
        double acc = 0.0, ref_sq = 0.0;
        for (std::size_t k = 0; k < lin.size(); ++k) {
            const double d = (t.samples[k].F_l_hat - ref.initial) - lin[k];
            acc += d * d;
            ref_sq += lin[k] * lin[k];
        }
        const double rel = std::sqrt(acc / ref_sq);
        o.require(rel <= 0.02, "force step RMS error " + fmt("%.3g", rel));
        o.note("force step relative RMS " + fmt("%.2e", rel));
    }
    return o;
}

KeyValues read_summary(const fs::path& dir) { return parse_key_values(read_text_file((dir / "summary.txt").string())); }

double number(const KeyValues& kv, const std::string& key) {
    const std::string* v = kv.find(key);
    if (!v) return std::numeric_limits<double>::quiet_NaN();
    if (*v == "inf") return std::numeric_limits<double>::infinity();
    return parse_double(*v).value_or(std::numeric_limits<double>::quiet_NaN());
}

// Larger nominal inertia, more current noise, no worse tracking.
Outcome fig9_contrast(const fs::path& dir) {
    Outcome o;
    const KeyValues kv = read_summary(dir / "fig9");
    const double a1 = number(kv, "jmn_x1.tracking_error_amplitude"), a3 = number(kv, "jmn_x3.tracking_error_amplitude");
    const double n1 = number(kv, "jmn_x1.current_noise_rms"), n3 = number(kv, "jmn_x3.current_noise_rms");
    o.require(n3 > n1, "current noise not larger");
    o.require(a3 <= a1, "tracking worse");
    o.note("tracking " + fmt("%.3e", a1) + " -> " + fmt("%.3e", a3) + ", current noise " + fmt("%.3e", n1) + " -> " +
           fmt("%.3e", n3));
    return o;
}

// Oscillation ordering b < a <= c, c worst or divergent.
Outcome fig10_contrast(const fs::path& dir) {
    Outcome o;
    const KeyValues kv = read_summary(dir / "fig10");
    const double a = number(kv, "a.oscillation_index"), b = number(kv, "b.oscillation_index"), c = number(kv, "c.oscillation_index");
    const bool c_div = number(kv, "c.diverged") == 1.0;
    o.require(b < a, "case b not below case a");
    o.require(c_div || a <= c, "case a above case c");
    o.note("oscillation index a " + fmt("%.3e", a) + ", b " + fmt("%.3e", b) + ", c " + fmt("%.3e", c) + (c_div ? " (diverged)" : ""));
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) files.push_back(fs::relative(e.path(), a));
    std::size_t count_b = 0;
    for (const auto& e : fs::recursive_directory_iterator(b)) count_b += e.is_regular_file();
    if (files.size() != count_b) {
        why = "file counts differ";
        return false;
    }
    for (const auto& f : files)
        if (!fs::exists(b / f) || slurp(a / f) != slurp(b / f)) {
            why = f.string() + " differs";
            return false;
        }
    return !files.empty();
}

// Every figure bundle twice, byte-compared, within the time budget.
Outcome reproduce_all(const fs::path& root) {
    Outcome o;
    const auto t0 = Clock::now();
    std::ostringstream out, err;
    for (const char* run : {"run1", "run2"})
        for (const char* fig : {"fig3", "fig7", "fig8", "fig9", "fig10"}) {
            Scenario s = parse_scenario(ScenarioKind::reproduce_figure, std::string("figure = ") + fig + "\n");
            s.output_dir = (root / run / fig).string();
            const int rc = run_scenario(s, out, err);
            o.require(rc == 0, std::string(fig) + " exited " + std::to_string(rc) + ": " + err.str());
        }
    const double elapsed = seconds_since(t0);
    std::string why;
    o.require(same_tree(root / "run1", root / "run2", why), "outputs not reproducible: " + why);
    o.require(elapsed < 300.0, "runtime " + fmt("%.1f s", elapsed));
    std::size_t n = 0;
    for (const auto& e : fs::recursive_directory_iterator(root / "run1")) n += e.is_regular_file();
    o.note(std::to_string(n) + " files identical across two runs, " + fmt("%.1f s", elapsed) + " total");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "dob_lab_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);

    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"bandwidth constraint equals damping threshold", bandwidth_constraint},
        {"sensitivity identity and second-order denominator", sensitivity_identity},
        {"sensitivity peak non-decreasing in alpha", sensitivity_peak_monotone},
        {"Routh verdict matches root oracle", routh_oracle},
        {"position loop factorization and critical alpha", position_structure},
        {"block-derived loop matches closed form", block_cross_check},
        {"RHP zero only for J_hat > J_m", rhp_zeros},
        {"force root-locus trends", locus_trends},
        {"simulation matches linear models", simulation_vs_linear},
        {"reproduce-figure byte-reproducible for all figures", [&] { return reproduce_all(root); }},
        {"larger nominal inertia trades noise for tracking", [&] { return fig9_contrast(root / "run1"); }},
        {"force oscillation ordering across observer designs", [&] { return fig10_contrast(root / "run1"); }},
    };
    // Criteria 10 and 11 read the bundles the reproducibility run writes, so it runs first.
    const std::vector<std::size_t> order{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    const std::vector<int> label{1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 10, 11};
    std::vector<std::string> lines(criteria.size());
    int failed = 0;
    for (std::size_t i : order) {
        Outcome r;
        try {
            r = criteria[i].run();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        failed += !r.pass;
        char head[160];
        std::snprintf(head, sizeof head, "%s criterion %2d: %s", r.pass ? "PASS" : "FAIL", label[i], criteria[i].name);
        lines[static_cast<std::size_t>(label[i] - 1)] = std::string(head) + " | " + r.detail;
    }
    for (const auto& l : lines) std::printf("%s\n", l.c_str());
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
