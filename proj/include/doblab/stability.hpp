#pragma once

#include <optional>
#include <string>
#include <vector>

#include "doblab/config.hpp"
#include "doblab/loop_builder.hpp"
#include "doblab/parallel.hpp"
#include "doblab/poly.hpp"
#include "doblab/transfer_function.hpp"

namespace doblab {

struct RouthReport {
    bool stable = false;
    int rhp_count = 0;
    std::vector<std::vector<double>> array;  ///< rows s^n .. s^0
    bool degenerate = false;                 ///< zero pivot or zero row encountered
};

/// Routh-Hurwitz table. A negative leading coefficient is normalized away.
/// Zero pivots use epsilon substitution (both signs of epsilon), all-zero rows
/// the derivative of the auxiliary polynomial; either sets degenerate.
/// Throws NumericError(degenerate_input) for constants and the zero polynomial.
RouthReport routh_hurwitz(const Polynomial& p);

enum class RootClass { stable, marginal, unstable };

/// |Re r| <= 1e-9 |r| is marginal.
RootClass classify_root(Complex r);
/// Every root strictly stable per classify_root.
bool all_roots_stable(const std::vector<Complex>& roots);
double max_real_part(const std::vector<Complex>& roots);

/// Smallest alpha for which the ideal-velocity position loop is Hurwitz:
/// g K_p / ((g + K_D)(K_p + g K_D)).
double third_order_alpha_condition(double g_dob, const PositionGains& gains);

struct RootLocusBranch {
    std::vector<double> gains;
    std::vector<Complex> points;
};

struct GainCrossing {
    double gain;
    bool to_unstable;  ///< true: stable -> unstable as the gain increases
};

struct RootLocus {
    std::vector<RootLocusBranch> branches;
    std::vector<double> max_real;           ///< per grid gain
    std::vector<GainCrossing> crossings;    ///< in ascending gain order, bisection-refined
    /// Smallest gain at which a branch enters the closed right half-plane;
    /// nullopt when the grid never leaves the stable region.
    std::optional<double> critical_gain;
};

/// Closed-loop poles of loop_den + K loop_num over an ascending positive
/// gain grid, matched into continuous branches by nearest neighbour.
RootLocus root_locus(const Polynomial& loop_num, const Polynomial& loop_den, const std::vector<double>& gain_grid,
                     Exec exec = Exec::parallel);

/// Logarithmic gain grid with n points from lo to hi.
std::vector<double> log_gain_grid(double lo, double hi, std::size_t n);

struct ZeroReport {
    double ratio;
    double max_zero_real;
    bool rhp_zero;
};

/// For each ratio r: J_hat = r J_m, compose the force loop and report its zeros.
std::vector<ZeroReport> rhp_zero_scan(const PlantParams& plant, const ObserverConfig& obs_base, const Environment& env,
                                      double C_f, const std::vector<double>& j_hat_ratios, Velocity velocity,
                                      Exec exec = Exec::parallel);

struct PeakResult {
    double magnitude;
    double omega;
};

/// max |tf(j w)| on [omega_min, omega_max]: log grid, then golden-section
/// refinement (in log w) around the grid maximum.
PeakResult sensitivity_peak(const TransferFunction& tf, double omega_min, double omega_max);

enum class MapAxis { alpha, g_dob, g_v, C_f, j_hat_ratio, k_tau_hat_ratio };

MapAxis parse_map_axis(std::string_view name);
std::string to_string(MapAxis axis);

struct StabilityMap {
    MapAxis axis;
    std::vector<double> values;
    std::vector<char> stable;              ///< 0/1 per grid value
    std::vector<double> max_real;          ///< largest closed-loop real part per grid value
    std::vector<double> boundaries;        ///< interpolated verdict changes
};

/// Applies one axis value to a parameter bundle (alpha rescales J_mn).
SystemParams with_axis_value(const SystemParams& base, MapAxis axis, double value);

/// Characteristic polynomial the map judges for an axis: alpha/g_dob/g_v use
/// the position loop (ideal: printed closed form, filtered: block-derived),
/// the rest use the force loop.
Polynomial map_characteristic(const SystemParams& p, MapAxis axis, Velocity velocity);

StabilityMap stability_map(MapAxis axis, const std::vector<double>& grid, const SystemParams& fixed, Velocity velocity,
                           Exec exec = Exec::parallel);

/// Random polynomial oracle sweep: Routh verdict vs root-finder verdict.
struct RouthOracleStats {
    std::size_t compared = 0;
    std::size_t agreed = 0;
    std::size_t regenerated = 0;  ///< degenerate tables replaced by fresh draws
};
RouthOracleStats routh_oracle_sweep(std::size_t count, unsigned seed, Exec exec = Exec::parallel);

}  // namespace doblab
