#include "doblab/poly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unsupported/Eigen/Polynomials>

#include "doblab/error.hpp"

namespace doblab {

Polynomial::Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) { normalize(); }

Polynomial::Polynomial(std::initializer_list<double> ascending) : c_(ascending) { normalize(); }

void Polynomial::normalize() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Polynomial Polynomial::from_real_roots(std::span<const double> roots) {
    Polynomial p{1.0};
    for (double r : roots) p = p * Polynomial{-r, 1.0};
    return p;
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
    std::vector<Complex> c{Complex{1.0}};
    for (const Complex& r : roots) {
        std::vector<Complex> next(c.size() + 1, Complex{});
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    std::vector<double> re(c.size());
    std::transform(c.begin(), c.end(), re.begin(), [](Complex z) { return z.real(); });
    return Polynomial(std::move(re));
}

std::optional<std::size_t> Polynomial::degree() const {
    if (c_.empty()) return std::nullopt;
    return c_.size() - 1;
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

Complex Polynomial::operator()(Complex s) const {
    Complex acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

double Polynomial::operator()(double s) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    normalize();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    normalize();
    return *this;
}

Polynomial& Polynomial::operator*=(double k) {
    for (double& v : c_) v *= k;
    normalize();
    return *this;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    auto ac = a.coeffs();
    auto bc = b.coeffs();
    std::vector<double> out(ac.size() + bc.size() - 1, 0.0);
    for (std::size_t i = 0; i < ac.size(); ++i)
        for (std::size_t j = 0; j < bc.size(); ++j) out[i + j] += ac[i] * bc[j];
    return Polynomial(std::move(out));
}

Polynomial monomial(std::size_t k, double c) {
    std::vector<double> v(k + 1, 0.0);
    v[k] = c;
    return Polynomial(std::move(v));
}

double root_residual(const Polynomial& p, Complex r) {
    const double scale = p.max_abs_coeff();
    if (scale == 0.0) return 0.0;
    const auto deg = static_cast<double>(p.degree().value_or(0));
    return std::abs(p(r)) / (scale * std::pow(std::max(1.0, std::abs(r)), deg));
}

namespace {

// Newton steps accepted only while they shrink the residual.
Complex polish(const Polynomial& p, const Polynomial& dp, Complex r) {
    double res = std::abs(p(r));
    for (int it = 0; it < 8 && res > 0.0; ++it) {
        const Complex d = dp(r);
        if (d == Complex{}) break;
        const Complex cand = r - p(r) / d;
        const double cres = std::abs(p(cand));
        if (!(cres < res)) break;
        r = cand;
        res = cres;
    }
    return r;
}

// Eigenvalue-based roots scatter a multiplicity-m root by ~eps^(1/m); the
// cluster mean is accurate to O(eps). Replace a cluster only when its mean
// is at least as good a root as the worst member.
void merge_clusters(const Polynomial& p, std::vector<Complex>& roots) {
    const std::size_t n = roots.size();
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> members{i};
        const double tol = 1e-4 * std::max(1.0, std::abs(roots[i]));
        for (std::size_t j = i + 1; j < n; ++j)
            if (!used[j] && std::abs(roots[j] - roots[i]) <= tol) members.push_back(j);
        if (members.size() < 2) continue;
        Complex mean{};
        double worst = 0.0;
        for (auto m : members) {
            mean += roots[m];
            worst = std::max(worst, std::abs(p(roots[m])));
        }
        mean /= static_cast<double>(members.size());
        if (std::abs(p(mean)) <= worst) {
            for (auto m : members) {
                roots[m] = mean;
                used[m] = true;
            }
        }
    }
}

}  // namespace

std::vector<Complex> poly_roots(const Polynomial& p) {
    const auto deg = p.degree();
    if (!deg || *deg == 0)
        throw NumericError(NumericFault::degenerate_input, "poly_roots: polynomial has degree < 1");

    // Scale by max |coeff| so that e.g. g_v ~ 1e4 mixed with unit gains stays representable.
    const Polynomial scaled = p * (1.0 / p.max_abs_coeff());
    auto c = scaled.coeffs();

    // Roots at the origin are exact; strip them before the eigen solve.
    std::size_t zeros_at_origin = 0;
    while (zeros_at_origin < c.size() && c[zeros_at_origin] == 0.0) ++zeros_at_origin;
    std::vector<Complex> roots(zeros_at_origin, Complex{});
    Polynomial reduced(std::vector<double>(c.begin() + static_cast<std::ptrdiff_t>(zeros_at_origin), c.end()));

    const std::size_t rdeg = reduced.degree().value_or(0);
    if (rdeg == 1) {
        roots.emplace_back(-reduced.coeff(0) / reduced.coeff(1), 0.0);
    } else if (rdeg > 1) {
        Eigen::VectorXd coeffs(static_cast<Eigen::Index>(rdeg + 1));
        for (std::size_t k = 0; k <= rdeg; ++k) coeffs[static_cast<Eigen::Index>(k)] = reduced.coeff(k);
        Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
        const Polynomial dred = reduced.derivative();
        for (const auto& r : solver.roots()) roots.push_back(polish(reduced, dred, r));
        std::vector<Complex> nonzero(roots.begin() + static_cast<std::ptrdiff_t>(zeros_at_origin), roots.end());
        merge_clusters(reduced, nonzero);
        std::copy(nonzero.begin(), nonzero.end(), roots.begin() + static_cast<std::ptrdiff_t>(zeros_at_origin));
    }

    for (const auto& r : roots)
        if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
            throw NumericError(NumericFault::root_finder, "poly_roots: non-finite root");

    // Exact conjugate symmetry for real polynomials.
    for (auto& r : roots)
        if (std::abs(r.imag()) <= 1e-14 * std::max(1.0, std::abs(r.real()))) r = {r.real(), 0.0};

    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

std::string format_polynomial(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    char buf[64];
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        if (k) out.push_back(',');
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p.coeffs()[k]);
        out.append(buf, end);
    }
    return out;
}

Polynomial parse_polynomial(std::string_view text) {
    std::vector<double> coeffs;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view tok = text.substr(pos, comma - pos);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
        if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v))
            throw ConfigError("invalid polynomial coefficient '" + std::string(tok) + "' in \"" +
                              std::string(text) + "\"");
        coeffs.push_back(v);
        pos = comma + 1;
    }
    return Polynomial(std::move(coeffs));
}

}  // namespace doblab
