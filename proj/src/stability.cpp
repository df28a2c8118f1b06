#include "doblab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doblab/error.hpp"

namespace doblab {

// ---------------------------------------------------------------- Routh

namespace {

struct RouthTable {
    std::vector<std::vector<double>> rows;
    bool zero_pivot = false;
    bool zero_row = false;
};

int sign_changes(const std::vector<std::vector<double>>& rows) {
    int changes = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if ((rows[i - 1][0] > 0.0) != (rows[i][0] > 0.0)) ++changes;
    return changes;
}

bool near_zero(double v, double scale) { return std::abs(v) <= 1e-12 * scale; }

// descending coefficients a_n..a_0 with a_n > 0
RouthTable build_table(const std::vector<double>& desc, double eps_sign) {
    const std::size_t n = desc.size() - 1;
    const std::size_t width = n / 2 + 1;
    RouthTable t;
    t.rows.assign(n + 1, std::vector<double>(width, 0.0));
    for (std::size_t k = 0; k <= n; ++k) t.rows[k % 2][k / 2] = desc[k];

    auto row_scale = [](const std::vector<double>& r) {
        double m = 0.0;
        for (double v : r) m = std::max(m, std::abs(v));
        return m;
    };

    double coeff_scale = 0.0;
    for (double v : desc) coeff_scale = std::max(coeff_scale, std::abs(v));

    for (std::size_t i = 1; i <= n; ++i) {
        auto& row = t.rows[i];
        if (i >= 2) {
            const auto& a = t.rows[i - 2];
            const auto& b = t.rows[i - 1];
            for (std::size_t j = 0; j + 1 < width; ++j) row[j] = (b[0] * a[j + 1] - a[0] * b[j + 1]) / b[0];
            row[width - 1] = 0.0;
            const double ref = std::max(row_scale(a), row_scale(b));
            for (double& v : row)
                if (near_zero(v, ref)) v = 0.0;
        }
        const bool all_zero = std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; });
        if (all_zero) {
            // Auxiliary polynomial from the row above, powers (n-i+1), (n-i-1), ...; use its derivative.
            t.zero_row = true;
            const auto& aux = t.rows[i - 1];
            const int top = static_cast<int>(n - i + 1);
            for (std::size_t j = 0; j < width; ++j) {
                const int power = top - 2 * static_cast<int>(j);
                row[j] = power > 0 ? aux[j] * power : 0.0;
            }
        }
        if (row[0] == 0.0) {
            t.zero_pivot = true;
            const double eps = 1e-9 * std::max(row_scale(row), coeff_scale);
            row[0] = eps_sign * (eps > 0.0 ? eps : 1e-300);
        }
    }
    return t;
}

}  // namespace

RouthReport routh_hurwitz(const Polynomial& p) {
    const auto deg = p.degree();
    if (!deg || *deg == 0)
        throw NumericError(NumericFault::degenerate_input, "routh_hurwitz: polynomial has degree < 1");
    std::vector<double> desc(p.coeffs().rbegin(), p.coeffs().rend());
    if (desc.front() < 0.0)
        for (double& v : desc) v = -v;

    const RouthTable plus = build_table(desc, +1.0);
    RouthReport r;
    r.array = plus.rows;
    r.degenerate = plus.zero_pivot || plus.zero_row;
    r.rhp_count = sign_changes(plus.rows);
    if (plus.zero_pivot) {
        const RouthTable minus = build_table(desc, -1.0);
        r.rhp_count = std::max(r.rhp_count, sign_changes(minus.rows));
    }
    // A zero pivot or zero row means roots off the open left half-plane.
    r.stable = !r.degenerate && r.rhp_count == 0;
    return r;
}

RootClass classify_root(Complex r) {
    const double tol = 1e-9 * std::abs(r);
    if (std::abs(r.real()) <= tol) return RootClass::marginal;
    return r.real() < 0.0 ? RootClass::stable : RootClass::unstable;
}

bool all_roots_stable(const std::vector<Complex>& roots) {
    return std::all_of(roots.begin(), roots.end(), [](Complex r) { return classify_root(r) == RootClass::stable; });
}

double max_real_part(const std::vector<Complex>& roots) {
    double m = -std::numeric_limits<double>::infinity();
    for (auto r : roots) m = std::max(m, r.real());
    return m;
}

double third_order_alpha_condition(double g_dob, const PositionGains& gains) {
    gains.validate();
    if (!(g_dob > 0.0)) throw ConfigError("third_order_alpha_condition: g_dob must be > 0");
    return g_dob * gains.K_p / ((g_dob + gains.K_D) * (gains.K_p + g_dob * gains.K_D));
}

// ---------------------------------------------------------------- root locus

std::vector<double> log_gain_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ConfigError("log gain grid requires 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    const double step = std::log10(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) g[k] = lo * std::pow(10.0, step * static_cast<double>(k));
    g.back() = hi;
    return g;
}

namespace {

std::vector<Complex> closed_loop_roots(const Polynomial& num, const Polynomial& den, double k) {
    const Polynomial cp = den + k * num;
    if (cp.degree().value_or(0) == 0) return {};
    try {
        return poly_roots(cp);
    } catch (const NumericError& e) {
        throw NumericError(NumericFault::root_finder,
                           std::string("root locus failed at gain ") + format_double(k) + ": " + e.what());
    }
}

bool stable_at(const Polynomial& num, const Polynomial& den, double k) {
    return all_roots_stable(closed_loop_roots(num, den, k));
}

// Bisection on the stability verdict between a (verdict va) and b.
double refine_crossing(const Polynomial& num, const Polynomial& den, double a, double b, bool va) {
    for (int it = 0; it < 80; ++it) {
        const double mid = (a > 0.0 && b / a > 4.0) ? std::sqrt(a * b) : 0.5 * (a + b);
        if (stable_at(num, den, mid) == va)
            a = mid;
        else
            b = mid;
        if (b - a <= 1e-12 * b) break;
    }
    return 0.5 * (a + b);
}

// Greedy global nearest-neighbour assignment of `next` onto the order of `prev`.
std::vector<Complex> match(const std::vector<Complex>& prev, const std::vector<Complex>& next) {
    const std::size_t n = prev.size();
    struct Pair {
        double d;
        std::size_t i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(n * next.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < next.size(); ++j) pairs.push_back({std::abs(prev[i] - next[j]), i, j});
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
    std::vector<Complex> out(n, Complex{std::nan(""), std::nan("")});
    std::vector<bool> used_i(n, false), used_j(next.size(), false);
    for (const auto& p : pairs) {
        if (used_i[p.i] || used_j[p.j]) continue;
        out[p.i] = next[p.j];
        used_i[p.i] = used_j[p.j] = true;
    }
    return out;
}

}  // namespace

RootLocus root_locus(const Polynomial& loop_num, const Polynomial& loop_den, const std::vector<double>& gain_grid,
                     Exec exec) {
    if (gain_grid.empty()) throw ConfigError("root_locus: empty gain grid");
    if (loop_den.is_zero() || loop_num.is_zero()) throw ConfigError("root_locus: zero loop polynomial");
    if (loop_num.degree().value() > loop_den.degree().value())
        throw ConfigError("root_locus: improper loop (numerator degree exceeds denominator degree)");
    for (std::size_t k = 0; k < gain_grid.size(); ++k)
        if (!(gain_grid[k] > 0.0) || (k && !(gain_grid[k] > gain_grid[k - 1])))
            throw ConfigError("root_locus: gain grid must be positive and strictly ascending");

    const std::size_t n = gain_grid.size();
    std::vector<std::vector<Complex>> roots(n);
    for_each_index(n, exec, [&](std::size_t k) { roots[k] = closed_loop_roots(loop_num, loop_den, gain_grid[k]); });

    RootLocus out;
    const std::size_t branches = roots.front().size();
    out.branches.assign(branches, RootLocusBranch{});
    std::vector<Complex> prev = roots.front();
    for (std::size_t k = 0; k < n; ++k) {
        if (roots[k].size() != branches)
            throw NumericError(NumericFault::root_finder,
                               "root locus: characteristic degree changes at gain " + format_double(gain_grid[k]));
        const auto cur = k == 0 ? roots[0] : match(prev, roots[k]);
        for (std::size_t b = 0; b < branches; ++b) {
            out.branches[b].gains.push_back(gain_grid[k]);
            out.branches[b].points.push_back(cur[b]);
        }
        prev = cur;
        out.max_real.push_back(max_real_part(roots[k]));
    }

    // Verdict changes along the grid, refined by bisection.
    std::vector<char> stable(n);
    for (std::size_t k = 0; k < n; ++k) stable[k] = all_roots_stable(roots[k]);
    if (!stable[0]) {
        // Open-loop poles decide whether the branch left the stable region inside (0, g0].
        const auto open = loop_den.degree().value_or(0) > 0 ? poly_roots(loop_den) : std::vector<Complex>{};
        if (all_roots_stable(open))
            out.crossings.push_back({refine_crossing(loop_num, loop_den, 0.0, gain_grid[0], true), true});
        else
            out.crossings.push_back({0.0, true});
    }
    for (std::size_t k = 1; k < n; ++k)
        if (stable[k] != stable[k - 1])
            out.crossings.push_back(
                {refine_crossing(loop_num, loop_den, gain_grid[k - 1], gain_grid[k], stable[k - 1]), !stable[k]});
    for (const auto& c : out.crossings)
        if (c.to_unstable) {
            out.critical_gain = c.gain;
            break;
        }
    return out;
}

// ---------------------------------------------------------------- zero scan

std::vector<ZeroReport> rhp_zero_scan(const PlantParams& plant, const ObserverConfig& obs_base, const Environment& env,
                                      double C_f, const std::vector<double>& j_hat_ratios, Velocity velocity,
                                      Exec exec) {
    for (double r : j_hat_ratios)
        if (!(r > 0.0)) throw ConfigError("rhp_zero_scan: ratios must be > 0");
    std::vector<ZeroReport> out(j_hat_ratios.size());
    for_each_index(j_hat_ratios.size(), exec, [&](std::size_t i) {
        ObserverConfig obs = obs_base;
        obs.J_hat = j_hat_ratios[i] * plant.J_m;
        const auto loop = compose_force_loop(plant, obs, env, C_f, velocity);
        const double m = loop.max_zero_real();
        bool rhp = false;
        for (const auto& z : loop.zeros) rhp = rhp || classify_root(z) == RootClass::unstable;
        out[i] = {j_hat_ratios[i], m, rhp};
    });
    return out;
}

// ---------------------------------------------------------------- peaks

PeakResult sensitivity_peak(const TransferFunction& tf, double omega_min, double omega_max) {
    const auto grid = log_grid(omega_min, omega_max, 200);
    std::size_t best = 0;
    std::vector<double> mag(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        mag[k] = std::abs(tf_eval(tf, grid[k]));
        if (mag[k] > mag[best]) best = k;
    }
    if (best == 0 || best + 1 == grid.size()) return {mag[best], grid[best]};

    // Golden section on log(omega) over the neighbouring grid cells.
    auto f = [&](double lw) { return std::abs(tf_eval(tf, std::exp(lw))); };
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(grid[best - 1]), b = std::log(grid[best + 1]);
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 100 && (b - a) > 1e-12; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    const double lw = 0.5 * (a + b);
    const double m = f(lw);
    if (m >= mag[best]) return {m, std::exp(lw)};
    return {mag[best], grid[best]};
}

// ---------------------------------------------------------------- maps

MapAxis parse_map_axis(std::string_view name) {
    if (name == "alpha") return MapAxis::alpha;
    if (name == "g_dob") return MapAxis::g_dob;
    if (name == "g_v") return MapAxis::g_v;
    if (name == "C_f") return MapAxis::C_f;
    if (name == "j_hat_ratio") return MapAxis::j_hat_ratio;
    if (name == "k_tau_hat_ratio") return MapAxis::k_tau_hat_ratio;
    throw ConfigError("unknown sweep parameter '" + std::string(name) +
                      "' (expected alpha, g_dob, g_v, C_f, j_hat_ratio or k_tau_hat_ratio)");
}

std::string to_string(MapAxis axis) {
    switch (axis) {
        case MapAxis::alpha: return "alpha";
        case MapAxis::g_dob: return "g_dob";
        case MapAxis::g_v: return "g_v";
        case MapAxis::C_f: return "C_f";
        case MapAxis::j_hat_ratio: return "j_hat_ratio";
        case MapAxis::k_tau_hat_ratio: return "k_tau_hat_ratio";
    }
    return "?";
}

SystemParams with_axis_value(const SystemParams& base, MapAxis axis, double value) {
    SystemParams p = base;
    switch (axis) {
        case MapAxis::alpha:
            p.plant.J_mn = value * p.plant.J_m * p.plant.K_tau_n / p.plant.K_tau;
            break;
        case MapAxis::g_dob: p.obs.g_dob = value; break;
        case MapAxis::g_v: p.obs.g_v = value; break;
        case MapAxis::C_f: p.C_f = value; break;
        case MapAxis::j_hat_ratio: p.obs.J_hat = value * p.plant.J_m; break;
        case MapAxis::k_tau_hat_ratio: p.obs.K_tau_hat = value * p.plant.K_tau; break;
    }
    return p;
}

Polynomial map_characteristic(const SystemParams& p, MapAxis axis, Velocity velocity) {
    switch (axis) {
        case MapAxis::alpha:
        case MapAxis::g_dob:
        case MapAxis::g_v:
            if (velocity == Velocity::ideal) return position_loop_ideal(alpha(p.plant), p.obs.g_dob, p.gains).den();
            return compose_position_loop(p.plant, p.obs, p.gains, velocity).den();
        case MapAxis::C_f:
        case MapAxis::j_hat_ratio:
        case MapAxis::k_tau_hat_ratio:
            return compose_force_loop(p.plant, p.obs, p.env, p.C_f, velocity).closed_loop.den();
    }
    return {};
}

StabilityMap stability_map(MapAxis axis, const std::vector<double>& grid, const SystemParams& fixed, Velocity velocity,
                           Exec exec) {
    if (grid.empty()) throw ConfigError("stability_map: empty grid");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1])) throw ConfigError("stability_map: grid must be strictly ascending");
    fixed.validate();

    StabilityMap m{axis, grid, std::vector<char>(grid.size()), std::vector<double>(grid.size()), {}};
    for_each_index(grid.size(), exec, [&](std::size_t k) {
        const SystemParams p = with_axis_value(fixed, axis, grid[k]);
        const Polynomial cp = map_characteristic(p, axis, velocity);
        m.stable[k] = routh_hurwitz(cp).stable;
        m.max_real[k] = max_real_part(poly_roots(cp));
    });
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (m.stable[k] == m.stable[k - 1]) continue;
        const double a = m.max_real[k - 1], b = m.max_real[k];
        double t = (a == b) ? 0.5 : a / (a - b);
        t = std::clamp(t, 0.0, 1.0);
        m.boundaries.push_back(grid[k - 1] + t * (grid[k] - grid[k - 1]));
    }
    return m;
}

// ---------------------------------------------------------------- oracle sweep

RouthOracleStats routh_oracle_sweep(std::size_t count, unsigned seed, Exec exec) {
    std::vector<char> agree(count, 0);
    std::vector<std::size_t> redraws(count, 0);
    for_each_index(count, exec, [&](std::size_t i) {
        std::seed_seq seq{seed, static_cast<unsigned>(i), static_cast<unsigned>(i >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<int> deg_dist(2, 6);
        std::uniform_real_distribution<double> coef(-5.0, 5.0);
        for (;;) {
            const int deg = deg_dist(rng);
            std::vector<double> c(static_cast<std::size_t>(deg) + 1);
            for (double& v : c) v = coef(rng);
            c.back() = std::abs(c.back());
            if (c.back() == 0.0) c.back() = 1.0;
            const Polynomial p(std::move(c));
            const auto report = routh_hurwitz(p);
            if (report.degenerate) {
                ++redraws[i];
                continue;
            }
            const auto roots = poly_roots(p);
            const bool oracle = std::all_of(roots.begin(), roots.end(), [](Complex r) { return r.real() < -1e-9; });
            agree[i] = report.stable == oracle;
            break;
        }
    });
    RouthOracleStats s;
    s.compared = count;
    for (std::size_t i = 0; i < count; ++i) {
        s.agreed += agree[i] ? 1 : 0;
        s.regenerated += redraws[i];
    }
    return s;
}

}  // namespace doblab
