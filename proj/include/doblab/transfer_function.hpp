#pragma once

#include <vector>

#include "doblab/poly.hpp"

namespace doblab {

/// Rational function num(s)/den(s), stored with a monic denominator.
///
/// No pole/zero cancellation is ever performed; a common factor introduced by
/// composition stays visible in zeros() and poles().
class TransferFunction {
public:
    /// Throws NumericError(algebraic_degeneracy) when den is the zero polynomial.
    TransferFunction(Polynomial num, Polynomial den);
    /// Static gain k.
    static TransferFunction gain(double k) { return {Polynomial{k}, Polynomial{1.0}}; }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    std::vector<Complex> zeros() const;
    std::vector<Complex> poles() const;
    /// Leading-coefficient ratio (the denominator is monic).
    double high_frequency_gain() const { return num_.leading(); }
    bool is_proper() const;

    /// num(s)/den(s) at an arbitrary complex point; throws pole_evaluation at a pole.
    Complex at(Complex s) const;

private:
    Polynomial num_;
    Polynomial den_;
};

TransferFunction operator*(const TransferFunction& a, const TransferFunction& b);
TransferFunction operator+(const TransferFunction& a, const TransferFunction& b);
TransferFunction operator*(double k, const TransferFunction& t);

/// forward / (1 + forward*feedback), negative feedback.
TransferFunction tf_feedback(const TransferFunction& forward, const TransferFunction& feedback);

/// tf(j*omega) by complex Horner evaluation.
Complex tf_eval(const TransferFunction& tf, double omega);

struct FrequencyPoint {
    double omega;
    double magnitude_db;
    double phase_deg;
};

/// Log-spaced Bode data with continuously unwrapped phase.
std::vector<FrequencyPoint> frequency_sweep(const TransferFunction& tf, double omega_min, double omega_max,
                                            int points_per_decade);

/// Shared log grid used by the sweep: omega_min * 10^(k/ppd), last point clamped to omega_max.
std::vector<double> log_grid(double omega_min, double omega_max, int points_per_decade);

}  // namespace doblab
