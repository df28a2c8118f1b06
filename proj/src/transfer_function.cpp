#include "doblab/transfer_function.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "doblab/error.hpp"

namespace doblab {

TransferFunction::TransferFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
        throw NumericError(NumericFault::algebraic_degeneracy, "transfer function with zero denominator");
    const double lead = den_.leading();
    if (lead != 1.0) {
        den_ *= 1.0 / lead;
        num_ *= 1.0 / lead;
    }
}

std::vector<Complex> TransferFunction::zeros() const {
    if (num_.degree().value_or(0) == 0) return {};
    return poly_roots(num_);
}

std::vector<Complex> TransferFunction::poles() const {
    if (den_.degree().value_or(0) == 0) return {};
    return poly_roots(den_);
}

bool TransferFunction::is_proper() const {
    if (num_.is_zero()) return true;
    return *num_.degree() <= *den_.degree();
}

Complex TransferFunction::at(Complex s) const {
    const Complex d = den_(s);
    double scale = 0.0;
    double mag = 1.0;
    for (double c : den_.coeffs()) {
        scale += std::abs(c) * mag;
        mag *= std::abs(s);
    }
    if (d == Complex{} || std::abs(d) <= 1e-14 * scale)
        throw NumericError(NumericFault::pole_evaluation,
                           "evaluation at a pole: s = " + std::to_string(s.real()) + (s.imag() < 0 ? "-" : "+") +
                               std::to_string(std::abs(s.imag())) + "j");
    return num_(s) / d;
}

TransferFunction operator*(const TransferFunction& a, const TransferFunction& b) {
    return {a.num() * b.num(), a.den() * b.den()};
}

TransferFunction operator+(const TransferFunction& a, const TransferFunction& b) {
    return {a.num() * b.den() + b.num() * a.den(), a.den() * b.den()};
}

TransferFunction operator*(double k, const TransferFunction& t) { return {t.num() * k, t.den()}; }

TransferFunction tf_feedback(const TransferFunction& forward, const TransferFunction& feedback) {
    Polynomial closed_den = forward.den() * feedback.den() + forward.num() * feedback.num();
    if (closed_den.is_zero())
        throw NumericError(NumericFault::algebraic_degeneracy, "tf_feedback: closed-loop denominator is zero");
    return {forward.num() * feedback.den(), std::move(closed_den)};
}

Complex tf_eval(const TransferFunction& tf, double omega) {
    try {
        return tf.at(Complex{0.0, omega});
    } catch (const NumericError& e) {
        throw NumericError(NumericFault::pole_evaluation,
                           "tf_eval: imaginary-axis pole at omega = " + std::to_string(omega) + " rad/s");
    }
}

std::vector<double> log_grid(double omega_min, double omega_max, int points_per_decade) {
    if (!(omega_min > 0.0) || !(omega_max > omega_min) || points_per_decade < 1)
        throw ConfigError("log grid requires 0 < min < max and points_per_decade >= 1");
    const double decades = std::log10(omega_max / omega_min);
    const auto n = static_cast<std::size_t>(std::ceil(decades * points_per_decade - 1e-9));
    std::vector<double> out;
    out.reserve(n + 1);
    for (std::size_t k = 0; k < n; ++k)
        out.push_back(omega_min * std::pow(10.0, static_cast<double>(k) / points_per_decade));
    out.push_back(omega_max);
    return out;
}

std::vector<FrequencyPoint> frequency_sweep(const TransferFunction& tf, double omega_min, double omega_max,
                                            int points_per_decade) {
    const auto grid = log_grid(omega_min, omega_max, points_per_decade);
    std::vector<FrequencyPoint> out;
    out.reserve(grid.size());
    double prev_phase = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Complex v = tf_eval(tf, grid[k]);
        const double mag = std::abs(v);
        double phase = std::arg(v) * 180.0 / std::numbers::pi;
        if (k > 0) {
            while (phase - prev_phase > 180.0) phase -= 360.0;
            while (phase - prev_phase < -180.0) phase += 360.0;
        }
        prev_phase = phase;
        out.push_back({grid[k], 20.0 * std::log10(mag), phase});
    }
    return out;
}

}  // namespace doblab
