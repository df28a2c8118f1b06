#include "doblab/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "doblab/error.hpp"

namespace doblab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_key(std::string_view k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
    return true;
}

template <class P>
auto slot(P& p, std::string_view key) -> decltype(&p.C_f) {
    if (key == "J_m") return &p.plant.J_m;
    if (key == "K_tau") return &p.plant.K_tau;
    if (key == "J_mn") return &p.plant.J_mn;
    if (key == "K_tau_n") return &p.plant.K_tau_n;
    if (key == "J_hat") return &p.obs.J_hat;
    if (key == "K_tau_hat") return &p.obs.K_tau_hat;
    if (key == "g_dob") return &p.obs.g_dob;
    if (key == "g_rfob") return &p.obs.g_rfob;
    if (key == "g_v") return &p.obs.g_v;
    if (key == "K_p") return &p.gains.K_p;
    if (key == "K_D") return &p.gains.K_D;
    if (key == "C_f") return &p.C_f;
    if (key == "D_env") return &p.env.D_env;
    if (key == "K_env") return &p.env.K_env;
    if (key == "q_e") return &p.env.q_e;
    return nullptr;
}

}  // namespace

const std::string* KeyValues::find(std::string_view key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return &v;
    return nullptr;
}

void KeyValues::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries)
        if (k == key) {
            v = value;
            return;
        }
    entries.emplace_back(key, value);
}

KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    std::vector<std::string> errors;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
            continue;
        }
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (!valid_key(key)) {
            errors.push_back("line " + std::to_string(line_no) + ": invalid key '" + key + "'");
            continue;
        }
        if (value.empty()) {
            errors.push_back("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
            continue;
        }
        if (kv.contains(key)) {
            errors.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
            continue;
        }
        kv.entries.emplace_back(key, value);
    }
    if (!errors.empty()) {
        std::string msg;
        for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
        throw ConfigError(msg);
    }
    return kv;
}

std::string format_key_values(const KeyValues& kv) {
    std::string out;
    for (const auto& [k, v] : kv.entries) out += k + " = " + v + "\n";
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

void SystemParams::validate() const {
    std::vector<std::string> errs;
    for (auto fn : {+[](const SystemParams& p) { p.plant.validate(); }, +[](const SystemParams& p) { p.obs.validate(); },
                    +[](const SystemParams& p) { p.gains.validate(); }, +[](const SystemParams& p) { p.env.validate(); }}) {
        try {
            fn(*this);
        } catch (const ConfigError& e) {
            errs.emplace_back(e.what());
        }
    }
    if (!(C_f > 0.0)) errs.emplace_back("C_f must be > 0");
    if (!errs.empty()) {
        std::string msg;
        for (const auto& e : errs) msg += (msg.empty() ? "" : "; ") + e;
        throw ConfigError(msg);
    }
}

const std::vector<std::string>& parameter_keys() {
    static const std::vector<std::string> keys{"J_m",   "K_tau", "J_mn", "K_tau_n", "J_hat",
                                               "K_tau_hat", "g_dob", "g_rfob", "g_v",   "K_p",
                                               "K_D",   "C_f",   "D_env", "K_env",  "q_e"};
    return keys;
}

bool apply_parameter(SystemParams& p, std::string_view key, std::string_view value) {
    double* dst = slot(p, key);
    if (!dst) return false;
    const auto v = parse_double(value);
    if (!v) throw ConfigError("parameter '" + std::string(key) + "': not a finite number: '" + std::string(value) + "'");
    *dst = *v;
    return true;
}

double get_parameter(const SystemParams& p, std::string_view key) {
    const double* src = slot(p, key);
    if (!src) throw ConfigError("unknown parameter '" + std::string(key) + "'");
    return *src;
}

SystemParams params_from_key_values(const KeyValues& kv) {
    SystemParams p;
    std::vector<std::string> errors;
    for (const auto& [k, v] : kv.entries) {
        try {
            if (!apply_parameter(p, k, v)) errors.push_back("unknown key '" + k + "'");
        } catch (const ConfigError& e) {
            errors.emplace_back(e.what());
        }
    }
    if (!errors.empty()) {
        std::string msg;
        for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
        throw ConfigError(msg);
    }
    p.validate();
    return p;
}

KeyValues params_to_key_values(const SystemParams& p) {
    KeyValues kv;
    for (const auto& k : parameter_keys()) kv.entries.emplace_back(k, format_double(get_parameter(p, k)));
    return kv;
}

}  // namespace doblab
