#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "doblab/config.hpp"
#include "doblab/error.hpp"

namespace doblab {

enum class ScenarioKind {
    constraint_check,
    bode,
    position_tf,
    force_tf,
    routh,
    locus,
    map,
    simulate_position,
    simulate_force,
    reproduce_figure,
};

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);
std::string to_string(ScenarioKind kind);
const std::vector<ScenarioKind>& all_scenario_kinds();

enum class Figure { fig3, fig7, fig8, fig9, fig10 };
std::optional<Figure> parse_figure(std::string_view name);
std::string to_string(Figure f);

/// One batch job. `values` holds exactly the keys the config file set, in
/// file order; defaults are applied when the scenario runs.
struct Scenario {
    ScenarioKind kind = ScenarioKind::constraint_check;
    KeyValues values;
    std::string output_dir = ".";

    bool operator==(const Scenario& o) const {
        return kind == o.kind && values.entries == o.values.entries;
    }
};

/// Parses and validates a scenario document. Every unknown key, malformed
/// value and kind mismatch is collected into one ConfigError. A `kind` key,
/// when present, must agree with `kind`.
Scenario parse_scenario(ScenarioKind kind, std::string_view text);

/// Canonical text: `kind = ...` followed by the explicit keys in order.
std::string format_scenario(const Scenario& s);

/// Parameter bundle a scenario runs with: toolkit defaults, then the figure
/// defaults (reproduce-figure only), then the explicit keys.
SystemParams scenario_params(const Scenario& s);

/// Parameter defaults a figure bundle applies under the explicit keys.
KeyValues figure_defaults(Figure f);

struct ScenarioOutput {
    std::vector<std::pair<std::string, std::string>> files;  ///< relative name -> content, in write order
    std::string report;                                      ///< text printed on stdout
    KeyValues summary;                                       ///< headline numbers, also written as summary.txt
};

/// Runs the analysis or simulation without touching the filesystem.
/// `stage` tracks the step in progress for diagnostics. Throws module errors.
ScenarioOutput execute_scenario(const Scenario& s, std::string* stage = nullptr);

/// Process exit status for an error class: config 2, numeric 3, io 4.
int exit_code(ErrorClass cls);

/// Executes and writes all artifacts under s.output_dir. Returns the exit
/// status; failures print one diagnostic naming the failing stage to `err`.
int run_scenario(const Scenario& s, std::ostream& out, std::ostream& err);

/// Reads a scenario file; IoError when unreadable.
std::string read_text_file(const std::string& path);

/// "SATISFIED margin=0.000e0 rad/s xi=0.70711" style engineering notation:
/// fixed mantissa digits, bare exponent.
std::string format_sci(double v, int digits);

}  // namespace doblab
