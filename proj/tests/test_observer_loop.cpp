#include <doctest.h>

#include <cmath>
#include <random>

#include "doblab/error.hpp"
#include "doblab/loop_builder.hpp"
#include "doblab/observer_model.hpp"
#include "doblab/stability.hpp"
#include "oracles.hpp"

using namespace doblab;

namespace {

std::vector<double> coeffs(const Polynomial& p) { return {p.coeffs().begin(), p.coeffs().end()}; }

PlantParams plant_with_alpha(double a) {
    PlantParams p;
    p.J_mn = a * p.J_m;
    return p;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

}  // namespace

TEST_SUITE("observer_model") {
    TEST_CASE("alpha from plant parameters") {
        CHECK(alpha(PlantParams{}) == 1.0);
        PlantParams p;
        p.J_mn = 2 * p.J_m;
        CHECK(alpha(p) == doctest::Approx(2.0));
        CHECK(alpha(PlantParams{0.004, 0.5, 0.006, 0.4}) == doctest::Approx(1.875).epsilon(1e-14));
    }

    TEST_CASE("alpha is invariant under common scaling") {
        const PlantParams p{0.003, 0.7, 0.005, 0.2};
        for (double c : {1e-3, 0.5, 7.0, 1e4}) {
            CHECK(alpha(PlantParams{c * p.J_m, p.K_tau, c * p.J_mn, p.K_tau_n}) == doctest::Approx(alpha(p)).epsilon(1e-14));
            CHECK(alpha(PlantParams{p.J_m, c * p.K_tau, p.J_mn, c * p.K_tau_n}) == doctest::Approx(alpha(p)).epsilon(1e-14));
        }
    }

    TEST_CASE("second-order parameters") {
        const SecondOrder a = second_order_params(1.0, 2.0, 100.0);
        CHECK(a.w_n == doctest::Approx(141.42).epsilon(1e-4));
        CHECK(a.xi == doctest::Approx(0.7071).epsilon(1e-4));
        for (double v : {0.1, 1.0, 3.7}) CHECK(second_order_params(v, v, 250.0).xi == 0.5);
        const SecondOrder b = second_order_params(4.0, 2.0, 100.0);
        CHECK(b.w_n == doctest::Approx(282.84).epsilon(1e-4));
        CHECK(b.xi == doctest::Approx(0.3536).epsilon(1e-4));
    }

    TEST_CASE("second-order parameters match the sensitivity denominator") {
        std::mt19937_64 rng(17);
        for (int i = 0; i < 200; ++i) {
            const double a = log_uniform(rng, 0.05, 20), g = log_uniform(rng, 1, 1e4), gv = log_uniform(rng, 1, 1e5);
            const SecondOrder so = second_order_params(a, gv / g, g);
            const Polynomial d = sensitivity_tf(a, g, gv).den();
            CHECK(d.coeff(0) / d.leading() == doctest::Approx(so.w_n * so.w_n).epsilon(1e-10));
            CHECK(d.coeff(1) / d.leading() == doctest::Approx(2 * so.xi * so.w_n).epsilon(1e-10));
        }
    }

    TEST_CASE("bandwidth constraint cases") {
        const DesignVerdict boundary = check_bandwidth_constraint(1.0, 500.0, 1000.0);
        CHECK(boundary.satisfied);
        CHECK(boundary.margin == 0.0);
        CHECK(boundary.xi == doctest::Approx(0.70711).epsilon(1e-5));

        const DesignVerdict wide = check_bandwidth_constraint(1.0, 100.0, 1e9);
        CHECK(wide.satisfied);
        CHECK(wide.xi > 100.0);

        const DesignVerdict bad = check_bandwidth_constraint(3.0, 400.0, 1000.0);
        CHECK_FALSE(bad.satisfied);
        CHECK(bad.margin == doctest::Approx(-700.0));
        // xi = 0.5 * sqrt(kappa / alpha) with kappa = 2.5.
        CHECK(bad.xi == doctest::Approx(0.5 * std::sqrt(2.5 / 3.0)).epsilon(1e-12));
        CHECK(bad.xi == doctest::Approx(0.4564).epsilon(1e-4));
        double peak_bad = 0, peak_boundary = 0;
        for (const auto& p : frequency_sweep(sensitivity_tf(3.0, 400.0, 1000.0), 1, 1e5, 50)) peak_bad = std::max(peak_bad, p.magnitude_db);
        for (const auto& p : frequency_sweep(sensitivity_tf(1.0, 500.0, 1000.0), 1, 1e5, 50)) peak_boundary = std::max(peak_boundary, p.magnitude_db);
        CHECK(peak_bad > peak_boundary);
    }

    TEST_CASE("constraint verdict agrees with the damping threshold on random draws") {
        std::mt19937_64 rng(2024);
        for (int i = 0; i < 10000; ++i) {
            const PlantParams p{log_uniform(rng, 1e-4, 1), log_uniform(rng, 1e-4, 1), log_uniform(rng, 1e-4, 1), log_uniform(rng, 1e-4, 1)};
            ObserverConfig o;
            o.g_dob = log_uniform(rng, 1e-3, 1e4);
            o.g_v = log_uniform(rng, 1e-3, 1e4);
            const DesignVerdict v = check_bandwidth_constraint(p, o);
            const double xi = 0.5 * std::sqrt((o.g_v / o.g_dob) / alpha(p));
            if (std::abs(xi - kCriticalDamping) > 1e-9) CHECK(v.satisfied == (xi >= kCriticalDamping));
        }
    }

    TEST_CASE("invalid parameters are configuration errors") {
        CHECK_THROWS_AS((PlantParams{0.0, 1, 1, 1}.validate()), ConfigError);
        ObserverConfig o;
        o.g_v = -1;
        CHECK_THROWS_AS(o.validate(), ConfigError);
    }
}

TEST_SUITE("loop_builder") {
    TEST_CASE("DOB open loop, ideal and filtered") {
        const TransferFunction ideal = dob_open_loop(1.0, 100.0, 1000.0, Velocity::ideal);
        CHECK(ideal.num() == Polynomial{100});
        CHECK(ideal.den() == Polynomial{0, 1});
        const TransferFunction fin = dob_open_loop(1.0, 100.0, 200.0, Velocity::filtered);
        CHECK(fin.num() == Polynomial{20000});
        CHECK(fin.den() == Polynomial{0, 200, 1});
        const TransferFunction cl = tf_feedback(fin, TransferFunction::gain(1.0));
        CHECK(cl.den() == Polynomial{20000, 200, 1});
    }

    TEST_CASE("filtered DOB loop approaches the ideal one for very wide velocity bandwidth") {
        const TransferFunction ideal = dob_open_loop(1.0, 100.0, 1.0, Velocity::ideal);
        const TransferFunction fin = dob_open_loop(1.0, 100.0, 1e12, Velocity::filtered);
        for (const double w : {1.0, 10.0, 100.0, 1e3, 1e4}) {
            const double d = 20 * std::log10(std::abs(tf_eval(fin, w))) - 20 * std::log10(std::abs(tf_eval(ideal, w)));
            CHECK(std::abs(d) < 0.01);
        }
    }

    TEST_CASE("sensitivity function at the design point") {
        const TransferFunction s = sensitivity_tf(1.0, 100.0, 200.0);
        CHECK(s.num() == Polynomial{0, 200, 1});
        CHECK(s.den() == Polynomial{20000, 200, 1});
    }

    TEST_CASE("sensitivity equals one over one plus the loop gain") {
        std::mt19937_64 rng(99);
        for (int i = 0; i < 100; ++i) {
            const double a = log_uniform(rng, 0.05, 20), g = log_uniform(rng, 1, 1e4), gv = log_uniform(rng, 1, 1e5);
            const TransferFunction L = dob_open_loop(a, g, gv, Velocity::filtered);
            const TransferFunction S = sensitivity_tf(a, g, gv);
            // S.num * (L.den + L.num) == S.den * L.den
            auto sum = coeffs(L.den());
            const auto ln = coeffs(L.num());
            for (std::size_t k = 0; k < ln.size(); ++k) sum[k] += ln[k];
            const auto rhs = oracle::convolve(coeffs(S.den()), coeffs(L.den()));
            const auto lhs2 = oracle::convolve(coeffs(S.num()), sum);
            REQUIRE(lhs2.size() == rhs.size());
            double scale = 0;
            for (double c : rhs) scale = std::max(scale, std::abs(c));
            for (std::size_t k = 0; k < rhs.size(); ++k) CHECK(std::abs(lhs2[k] - rhs[k]) <= 1e-10 * scale);
        }
    }

    TEST_CASE("ideal position loop factorizes at alpha one") {
        const PositionGains gains;
        const TransferFunction t = position_loop_ideal(1.0, 300.0, gains);
        const auto r = poly_roots(t.den());
        REQUIRE(r.size() == 3);
        std::vector<double> re;
        for (auto x : r) re.push_back(x.real());
        std::sort(re.begin(), re.end());
        CHECK(re[0] == doctest::Approx(-300.0).epsilon(1e-9));
        CHECK(re[1] == doctest::Approx(-20.0).epsilon(1e-5));
        CHECK(re[2] == doctest::Approx(-20.0).epsilon(1e-5));
    }

    TEST_CASE("ideal position loop at alpha two") {
        const TransferFunction t = position_loop_ideal(2.0, 300.0, PositionGains{});
        // Denominators are stored monic; compare up to scale.
        CHECK(oracle::normalized_coeff_error(coeffs(t.den()), {120000, 12400, 340, 0.5}) < 1e-12);
        for (const auto& r : oracle::companion_roots(coeffs(t.den()))) CHECK(r.real() < 0.0);
    }

    TEST_CASE("small alpha loses stability or damping") {
        const auto r = poly_roots(position_loop_ideal(0.01, 300.0, PositionGains{}).den());
        CHECK(std::any_of(r.begin(), r.end(), [](Complex x) { return x.real() > -1e-9; }));
    }

    TEST_CASE("finite velocity closed form structure") {
        const PositionGains gains;
        for (double a : {0.5, 1.0, 3.0}) {
            const TransferFunction t = position_loop_finite_gv(a, 300.0, 1000.0, gains);
            // Leading coefficient 1 + alpha and constant alpha*g_v*g*K_p, up to the monic scaling.
            REQUIRE(*t.den().degree() == 4);
            CHECK(t.den().coeff(0) / t.den().coeff(4) == doctest::Approx(a * 1000.0 * 300.0 * 400.0 / (1.0 + a)).epsilon(1e-12));
        }
    }

    TEST_CASE("block-derived position loop matches the closed-form denominator") {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> kp(10, 5000), kd(1, 300);
        int n = 0;
        for (double a : {0.5, 1.0, 2.0, 5.0})
            for (double g : {100.0, 300.0})
                for (int k = 0; k < 3 && n < 24; ++k, ++n) {
                    const PositionGains gains{kp(rng), kd(rng)};
                    ObserverConfig obs;
                    obs.g_dob = g;
                    const TransferFunction composed = compose_position_loop(plant_with_alpha(a), obs, gains, Velocity::ideal);
                    const TransferFunction printed = position_loop_ideal(a, g, gains);
                    CHECK(oracle::normalized_coeff_error(coeffs(composed.den()), coeffs(printed.den())) <= 1e-8);
                    CHECK(compare_characteristic(composed.den(), printed.den()).max_relative_error <= 1e-8);
                }
    }

    TEST_CASE("block-derived loop at alpha one is the nominal PD loop times the DOB pole") {
        const PositionGains gains;
        const TransferFunction t = compose_position_loop(PlantParams{}, ObserverConfig{}, gains, Velocity::ideal);
        const auto want = oracle::convolve({300, 1}, {gains.K_p, gains.K_D, 1});
        CHECK(oracle::normalized_coeff_error(coeffs(t.den()), want) < 1e-12);
    }

    TEST_CASE("finite-velocity comparison is computed and reports a mismatch") {
        const PositionGains gains;
        const ObserverConfig obs;
        const TransferFunction composed = compose_position_loop(plant_with_alpha(2.0), obs, gains, Velocity::filtered);
        const TransferFunction printed = position_loop_finite_gv(2.0, obs.g_dob, obs.g_v, gains);
        const PolynomialDiscrepancy d = compare_characteristic(composed.den(), printed.den());
        CHECK_FALSE(d.summary.empty());
        CHECK(std::isfinite(d.max_relative_error));
    }

    TEST_CASE("RFOB estimator limits") {
        ObserverConfig o;
        o.g_rfob = 1e12;
        const RfobEstimator e = rfob_estimator_tf(o);
        const double w = 37.0;
        CHECK(std::abs(tf_eval(e.from_current, w) - Complex(o.K_tau_hat, 0)) < 1e-6);
        CHECK(std::abs(tf_eval(e.from_velocity, w) - Complex(0, -o.J_hat * w)) < 1e-6);
        const RfobEstimator d = rfob_estimator_tf(ObserverConfig{});
        CHECK(tf_eval(d.from_current, 0.0).real() == doctest::Approx(ObserverConfig{}.K_tau_hat));
    }

    TEST_CASE("closed-loop poles match the independent state-space model") {
        for (double jr : {0.8, 1.0, 1.5})
            for (double rr : {1.0, 3.0})
                for (double cf : {100.0, 2000.0, 8000.0}) {
                    ObserverConfig obs;
                    obs.J_hat = jr * PlantParams{}.J_m;
                    obs.g_rfob = rr * obs.g_dob;
                    const ForceLoopModel m = compose_force_loop(PlantParams{}, obs, Environment{}, cf, Velocity::ideal);
                    oracle::ForcePlant fp;
                    fp.J_hat = obs.J_hat;
                    fp.g_rfob = obs.g_rfob;
                    const Eigen::Vector4cd ev = oracle::force_loop_state_matrix(fp, cf).eigenvalues();
                    const auto poles = m.closed_loop.poles();
                    for (const auto& e : ev) {
                        double best = INFINITY;
                        for (const auto& p : poles) best = std::min(best, std::abs(p - e));
                        CHECK(best <= 1e-6 * std::max(1.0, std::abs(e)));
                    }
                }
    }

    TEST_CASE("estimate tracks the true force at low frequency with perfect identification") {
        const ForceLoopModel m = compose_force_loop(PlantParams{}, ObserverConfig{}, Environment{}, 500.0, Velocity::ideal);
        for (double w : {0.1, 1.0, 5.0}) {
            const double ratio = std::abs(tf_eval(m.closed_loop, w) / tf_eval(m.true_force_tf, w));
            CHECK(std::abs(ratio - 1.0) < 0.02);
        }
    }

    TEST_CASE("DC force tracking with perfect identification") {
        for (double cf : {50.0, 500.0, 2000.0}) {
            const ForceLoopModel m = compose_force_loop(PlantParams{}, ObserverConfig{}, Environment{}, cf, Velocity::ideal);
            CHECK(m.closed_loop.at({0, 0}).real() == doctest::Approx(1.0).epsilon(1e-9));
        }
    }

    TEST_CASE("perfect identification keeps loop zeros in the closed left half-plane") {
        const ForceLoopModel m = compose_force_loop(PlantParams{}, ObserverConfig{}, Environment{}, 1.0, Velocity::ideal);
        CHECK(m.max_zero_real() <= 1e-9);
    }

    TEST_CASE("identified inertia above the true inertia gives a right half-plane zero") {
        ObserverConfig obs;
        obs.J_hat = 1.5 * PlantParams{}.J_m;
        Environment env;
        env.D_env = 100.0;
        const ForceLoopModel m = compose_force_loop(PlantParams{}, obs, env, 1.0, Velocity::ideal);
        CHECK(m.max_zero_real() > 0.0);
    }

    TEST_CASE("wider RFOB raises the critical gain when the identified inertia is low") {
        ObserverConfig obs;
        obs.J_hat = 0.8 * PlantParams{}.J_m;
        const auto crit = [&](double ratio) {
            ObserverConfig o = obs;
            o.g_rfob = ratio * o.g_dob;
            const ForceLoopModel m = compose_force_loop(PlantParams{}, o, Environment{}, 1.0, Velocity::ideal);
            return root_locus(m.open_loop.num(), m.open_loop.den(), log_gain_grid(1, 1e6, 600)).critical_gain;
        };
        const auto narrow = crit(1.0), wide = crit(3.0);
        REQUIRE(narrow);
        CHECK((!wide || *wide > *narrow));
    }

    TEST_CASE("wider RFOB adds loop phase between the two bandwidths") {
        ObserverConfig base;
        ObserverConfig wide = base;
        wide.g_rfob = 3 * base.g_dob;
        const ForceLoopModel a = compose_force_loop(PlantParams{}, base, Environment{}, 1.0, Velocity::ideal);
        const ForceLoopModel b = compose_force_loop(PlantParams{}, wide, Environment{}, 1.0, Velocity::ideal);
        for (double w : {350.0, 500.0, 800.0}) CHECK(std::arg(tf_eval(b.open_loop, w) / tf_eval(a.open_loop, w)) > 0.0);
    }

    TEST_CASE("force loop needs a contact") {
        Environment env;
        env.K_env = 0;
        env.D_env = 0;
        CHECK_THROWS_AS(compose_force_loop(PlantParams{}, ObserverConfig{}, env, 10.0, Velocity::ideal), NumericError);
    }
}
