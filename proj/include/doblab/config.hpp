#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doblab/loop_builder.hpp"
#include "doblab/observer_model.hpp"

namespace doblab {

/// Flat `key = value` document: '#' starts a comment, blank lines ignored,
/// dotted keys express nesting. Key order is preserved.
struct KeyValues {
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(std::string_view key) const;
    bool contains(std::string_view key) const { return find(key) != nullptr; }
    void set(const std::string& key, const std::string& value);
};

/// Parses the whole document and reports every malformed line and duplicate
/// key in a single ConfigError.
KeyValues parse_key_values(std::string_view text);
std::string format_key_values(const KeyValues& kv);

/// Shortest round-trip decimal text of a double.
std::string format_double(double v);
/// Strict full-string parse; nullopt on trailing garbage or non-finite values.
std::optional<double> parse_double(std::string_view text);

/// Every physical and design parameter of the toolkit, SI units.
struct SystemParams {
    PlantParams plant;
    ObserverConfig obs;
    PositionGains gains;
    Environment env;
    double C_f = 2000.0;  ///< (m/s^2)/N

    void validate() const;
};

/// The fifteen parameter keys, in canonical order.
const std::vector<std::string>& parameter_keys();

/// Applies one parameter key. Returns false when the key is not a parameter;
/// throws ConfigError when the value is not a number.
bool apply_parameter(SystemParams& p, std::string_view key, std::string_view value);
double get_parameter(const SystemParams& p, std::string_view key);

/// Builds parameters from a key=value document containing only parameter keys.
SystemParams params_from_key_values(const KeyValues& kv);
KeyValues params_to_key_values(const SystemParams& p);

}  // namespace doblab
