#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace doblab {

using Complex = std::complex<double>;

/// Real polynomial in the Laplace variable s.
///
/// Coefficients are stored in ascending powers (coeffs()[k] multiplies s^k).
/// Trailing zeros above the degree are stripped on construction, so the zero
/// polynomial has an empty coefficient list and no degree.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> ascending);
    Polynomial(std::initializer_list<double> ascending);

    static Polynomial constant(double c) { return Polynomial{c}; }
    /// (s - r) expanded for each real root.
    static Polynomial from_real_roots(std::span<const double> roots);
    /// Real part of the expansion of prod (s - r_k); pass conjugate pairs.
    static Polynomial from_roots(std::span<const Complex> roots);

    std::optional<std::size_t> degree() const;
    bool is_zero() const { return c_.empty(); }
    std::span<const double> coeffs() const { return c_; }
    double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    double leading() const { return c_.empty() ? 0.0 : c_.back(); }
    double max_abs_coeff() const;

    Complex operator()(Complex s) const;
    double operator()(double s) const;

    Polynomial derivative() const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(double k);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double k) { return a *= k; }
    friend Polynomial operator*(double k, Polynomial a) { return a *= k; }
    friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void normalize();
    std::vector<double> c_;
};

/// Coefficient convolution.
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
inline Polynomial operator*(const Polynomial& a, const Polynomial& b) { return poly_mul(a, b); }

/// s^k
Polynomial monomial(std::size_t k, double c = 1.0);

/// All deg(p) complex roots with multiplicity, sorted by (real, imag).
/// Throws NumericError(degenerate_input) for constant or zero input.
std::vector<Complex> poly_roots(const Polynomial& p);

/// |p(r)| / (max|coeff| * max(1,|r|)^deg); the root-finder acceptance measure.
double root_residual(const Polynomial& p, Complex r);

/// "2,3,1" <-> s^2+3s+2. Parsing throws ConfigError.
std::string format_polynomial(const Polynomial& p);
Polynomial parse_polynomial(std::string_view text);

}  // namespace doblab
