#include "doblab/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "doblab/loop_builder.hpp"
#include "doblab/observer_model.hpp"
#include "doblab/parallel.hpp"
#include "doblab/stability.hpp"
#include "doblab/svg.hpp"
#include "doblab/time_sim.hpp"

namespace doblab {

namespace {

constexpr std::array<std::pair<ScenarioKind, const char*>, 10> kKindNames{{
    {ScenarioKind::constraint_check, "constraint-check"},
    {ScenarioKind::bode, "bode"},
    {ScenarioKind::position_tf, "position-tf"},
    {ScenarioKind::force_tf, "force-tf"},
    {ScenarioKind::routh, "routh"},
    {ScenarioKind::locus, "locus"},
    {ScenarioKind::map, "map"},
    {ScenarioKind::simulate_position, "simulate-position"},
    {ScenarioKind::simulate_force, "simulate-force"},
    {ScenarioKind::reproduce_figure, "reproduce-figure"},
}};

constexpr std::array<std::pair<Figure, const char*>, 5> kFigureNames{{
    {Figure::fig3, "fig3"}, {Figure::fig7, "fig7"}, {Figure::fig8, "fig8"}, {Figure::fig9, "fig9"}, {Figure::fig10, "fig10"},
}};

// ---------------------------------------------------------------------------
// Scenario-specific settings: declared per kind, validated up front.

enum class SettingType { number, positive, nonnegative, integer, count, choice, polynomial, positive_list };

struct SettingSpec {
    std::string key;
    SettingType type;
    std::string fallback;  ///< empty: optional without default
    std::vector<std::string> choices = {};
};

using SpecList = std::vector<SettingSpec>;

const SettingSpec kVelocityIdeal{"velocity", SettingType::choice, "ideal", {"ideal", "filtered"}};
const SettingSpec kVelocityFiltered{"velocity", SettingType::choice, "filtered", {"ideal", "filtered"}};

SpecList sim_settings(const char* dt, const char* duration, const char* noise) {
    return {{"sim.dt", SettingType::positive, dt},
            {"sim.duration", SettingType::positive, duration},
            {"sim.seed", SettingType::integer, "1"},
            {"sim.noise_std", SettingType::nonnegative, noise},
            {"sim.initial_position", SettingType::number, "0"},
            {"output.stride", SettingType::count, "10"}};
}

SpecList friction_settings() {
    return {{"friction.coulomb", SettingType::nonnegative, "0"},
            {"friction.viscous", SettingType::nonnegative, "0"},
            {"friction.smoothing_velocity", SettingType::positive, "0.001"}};
}

SpecList position_reference_settings() {
    return {{"ref.amplitude", SettingType::number, "0.1"},
            {"ref.frequency_hz", SettingType::positive, "1"},
            {"ref.t_start", SettingType::nonnegative, "1"},
            {"ref.t_end", SettingType::nonnegative, "10"}};
}

SpecList force_reference_settings() {
    return {{"force.initial", SettingType::nonnegative, "5"},
            {"force.step", SettingType::number, "1"},
            {"force.t_step", SettingType::nonnegative, "1"}};
}

SpecList concat(std::initializer_list<SpecList> parts) {
    SpecList out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

SpecList map_axis_setting() {
    return {{"map.axis", SettingType::choice, "alpha", {"alpha", "g_dob", "g_v", "C_f", "j_hat_ratio", "k_tau_hat_ratio"}}};
}

SpecList kind_settings(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::constraint_check: return {};
        case ScenarioKind::bode:
            return {{"bode.target", SettingType::choice, "sensitivity", {"sensitivity", "dob_open_loop", "position", "force"}},
                    {"bode.omega_min", SettingType::positive, "1"},
                    {"bode.omega_max", SettingType::positive, "100000"},
                    {"bode.points_per_decade", SettingType::count, "50"},
                    kVelocityFiltered};
        case ScenarioKind::position_tf: return {kVelocityIdeal};
        case ScenarioKind::force_tf: return {kVelocityIdeal};
        case ScenarioKind::routh:
            return {{"routh.polynomial", SettingType::polynomial, ""},
                    {"routh.loop", SettingType::choice, "position", {"position", "force"}},
                    kVelocityIdeal};
        case ScenarioKind::locus:
            return {{"locus.gain_min", SettingType::positive, "1"},
                    {"locus.gain_max", SettingType::positive, "100000"},
                    {"locus.points", SettingType::count, "400"},
                    kVelocityIdeal};
        case ScenarioKind::map:
            return concat({map_axis_setting(),
                           {{"map.min", SettingType::positive, "0.001"},
                            {"map.max", SettingType::positive, "10"},
                            {"map.points", SettingType::count, "200"},
                            {"map.scale", SettingType::choice, "log", {"log", "linear"}},
                            kVelocityIdeal}});
        case ScenarioKind::simulate_position:
            return concat({sim_settings("0.0001", "12", "0"), position_reference_settings(), friction_settings()});
        case ScenarioKind::simulate_force:
            return concat({sim_settings("0.00001", "2", "0"), force_reference_settings(), friction_settings(),
                           {{"contact", SettingType::choice, "unilateral", {"unilateral", "bilateral"}}}});
        case ScenarioKind::reproduce_figure: return {};
    }
    return {};
}

SpecList figure_settings(Figure f) {
    switch (f) {
        case Figure::fig3:
            return {{"fig3.alphas", SettingType::positive_list, "1,5,20"},
                    {"bode.omega_min", SettingType::positive, "1"},
                    {"bode.omega_max", SettingType::positive, "100000"},
                    {"bode.points_per_decade", SettingType::count, "100"}};
        case Figure::fig7:
            return {{"map.min", SettingType::positive, "0.001"},
                    {"map.max", SettingType::positive, "10"},
                    {"map.points", SettingType::count, "300"}};
        case Figure::fig8:
            return {{"locus.gain_min", SettingType::positive, "1"},
                    {"locus.gain_max", SettingType::positive, "100000"},
                    {"locus.points", SettingType::count, "400"},
                    {"fig8.g_rfob_ratios", SettingType::positive_list, "1,3"},
                    {"fig8.j_hat_ratios", SettingType::positive_list, "0.8,1,1.5"},
                    {"fig8.k_tau_hat_ratios", SettingType::positive_list, "1,1.25,1.5,1.75,2"},
                    kVelocityIdeal};
        case Figure::fig9:
            return concat({sim_settings("0.0001", "12", "0.001"), position_reference_settings(),
                           {{"fig9.inertia_ratio", SettingType::positive, "3"},
                            {"friction.coulomb", SettingType::nonnegative, "0.05"},
                            {"friction.viscous", SettingType::nonnegative, "0.01"},
                            {"friction.smoothing_velocity", SettingType::positive, "0.001"}}});
        case Figure::fig10:
            return concat({sim_settings("0.00001", "2", "0"), force_reference_settings(),
                           {{"fig10.j_hat_low", SettingType::positive, "0.7"},
                            {"fig10.j_hat_high", SettingType::positive, "1.3"},
                            {"fig10.g_rfob_ratio", SettingType::positive, "3"}}});
    }
    return {};
}

std::optional<std::vector<double>> parse_list(std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const auto v = parse_double(text.substr(pos, comma - pos));
        if (!v) return std::nullopt;
        out.push_back(*v);
        pos = comma + 1;
    }
    return out;
}

std::string check_value(const SettingSpec& spec, const std::string& value) {
    const auto bad = [&](const std::string& why) { return "key '" + spec.key + "': " + why + " (got '" + value + "')"; };
    switch (spec.type) {
        case SettingType::choice:
            if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
                std::string list;
                for (const auto& c : spec.choices) list += (list.empty() ? "" : "|") + c;
                return bad("expected one of " + list);
            }
            return {};
        case SettingType::polynomial:
            try {
                parse_polynomial(value);
            } catch (const ConfigError& e) {
                return bad(e.what());
            }
            return {};
        case SettingType::positive_list: {
            const auto list = parse_list(value);
            if (!list) return bad("expected comma-separated numbers");
            for (double v : *list)
                if (!(v > 0.0)) return bad("list entries must be > 0");
            return {};
        }
        default: break;
    }
    const auto v = parse_double(value);
    if (!v) return bad("not a finite number");
    switch (spec.type) {
        case SettingType::positive:
            if (!(*v > 0.0)) return bad("must be > 0");
            break;
        case SettingType::nonnegative:
            if (!(*v >= 0.0)) return bad("must be >= 0");
            break;
        case SettingType::integer:
            if (*v < 0.0 || *v != std::floor(*v) || *v > 9.0e15) return bad("must be a non-negative integer");
            break;
        case SettingType::count:
            if (*v < 1.0 || *v != std::floor(*v) || *v > 1.0e7) return bad("must be an integer in [1, 1e7]");
            break;
        default: break;
    }
    return {};
}

// Typed reader over validated settings; falls back to the declared defaults.
class Settings {
public:
    Settings(const KeyValues& kv, SpecList spec) : kv_(kv), spec_(std::move(spec)) {}

    std::string text(const std::string& key) const {
        if (const auto* v = kv_.find(key)) return *v;
        return find(key).fallback;
    }
    bool has(const std::string& key) const { return kv_.contains(key) || !find(key).fallback.empty(); }
    double number(const std::string& key) const { return *parse_double(text(key)); }
    std::size_t count(const std::string& key) const { return static_cast<std::size_t>(number(key)); }
    std::vector<double> list(const std::string& key) const { return *parse_list(text(key)); }
    Velocity velocity() const { return text("velocity") == "ideal" ? Velocity::ideal : Velocity::filtered; }

private:
    const SettingSpec& find(const std::string& key) const {
        for (const auto& s : spec_)
            if (s.key == key) return s;
        throw ConfigError("internal: undeclared setting '" + key + "'");
    }
    const KeyValues& kv_;
    SpecList spec_;
};

SpecList settings_for(const Scenario& s) {
    if (s.kind != ScenarioKind::reproduce_figure) return kind_settings(s.kind);
    const auto* name = s.values.find("figure");
    const auto fig = name ? parse_figure(*name) : std::nullopt;
    return fig ? figure_settings(*fig) : SpecList{};
}

// ---------------------------------------------------------------------------
// Output helpers.

std::string csv_line(std::initializer_list<double> values) {
    std::string out;
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        first = false;
        out += format_double(v);
    }
    out += '\n';
    return out;
}

std::string label(double v) { return format_double(v); }

std::string optional_number(const std::optional<double>& v) { return v ? format_double(*v) : "none"; }

std::string format_roots(const std::vector<Complex>& roots) {
    std::string out;
    for (const auto& r : roots) {
        if (!out.empty()) out += "; ";
        out += format_double(r.real());
        if (r.imag() != 0.0) out += (r.imag() < 0.0 ? "-" : "+") + format_double(std::abs(r.imag())) + "j";
    }
    return out.empty() ? "(none)" : out;
}

std::string bode_csv(const std::vector<FrequencyPoint>& pts) {
    std::string out = "omega,mag_db,phase_deg\n";
    for (const auto& p : pts) out += csv_line({p.omega, p.magnitude_db, p.phase_deg});
    return out;
}

std::string locus_csv(const RootLocus& rl) {
    std::string out = "gain,branch,re,im\n";
    if (rl.branches.empty()) return out;
    const std::size_t n = rl.branches.front().gains.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t b = 0; b < rl.branches.size(); ++b) {
            const auto& br = rl.branches[b];
            out += format_double(br.gains[k]) + "," + std::to_string(b) + "," + format_double(br.points[k].real()) + "," +
                   format_double(br.points[k].imag()) + "\n";
        }
    return out;
}

std::string map_csv(const StabilityMap& m) {
    std::string out = "param,value,stable\n";
    const std::string name = to_string(m.axis);
    for (std::size_t i = 0; i < m.values.size(); ++i)
        out += name + "," + format_double(m.values[i]) + "," + (m.stable[i] ? "1" : "0") + "\n";
    return out;
}

PlotSeries locus_series(const std::string& name, const RootLocus& rl) {
    PlotSeries s{name, {}, {}, PlotSeries::Style::markers};
    for (const auto& br : rl.branches)
        for (const auto& p : br.points) {
            s.x.push_back(p.real());
            s.y.push_back(p.imag());
        }
    return s;
}

Trajectory decimated(const Trajectory& t, std::size_t stride) {
    Trajectory out;
    out.dt = t.dt * static_cast<double>(stride);
    out.diverged_at = t.diverged_at;
    for (std::size_t i = 0; i < t.samples.size(); i += stride) out.samples.push_back(t.samples[i]);
    return out;
}

PlotSeries trajectory_series(const std::string& name, const Trajectory& t, Signal which,
                             const std::function<double(double)>& minus = nullptr, double t0 = -1.0,
                             double t1 = std::numeric_limits<double>::infinity(), double clip = 1e6) {
    PlotSeries s{name, {}, {}, PlotSeries::Style::line};
    for (const auto& smp : t.samples) {
        if (smp.t < t0 || smp.t > t1) continue;
        double y = signal_value(smp, which);
        if (minus) y -= minus(smp.t);
        if (std::abs(y) > clip) break;  // a diverging record ends the visible trace
        s.x.push_back(smp.t);
        s.y.push_back(y);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Individual scenario kinds.

struct Context {
    const Scenario& scenario;
    Settings settings;
    SystemParams params;
    std::string* stage;
    ScenarioOutput out;

    void at(const std::string& name) {
        if (stage) *stage = name;
    }
};

void run_constraint_check(Context& c) {
    c.at("constraint-check");
    const DesignVerdict v = check_bandwidth_constraint(c.params.plant, c.params.obs);
    std::ostringstream os;
    os << (v.satisfied ? "SATISFIED" : "VIOLATED") << " margin=" << format_sci(v.margin, 3) << " rad/s xi=";
    char xi[32];
    std::snprintf(xi, sizeof xi, "%.5f", v.xi);
    os << xi << "\n";
    c.out.report = os.str();
    c.out.files.emplace_back("constraint.txt", c.out.report);
    auto& s = c.out.summary;
    s.set("satisfied", v.satisfied ? "1" : "0");
    s.set("alpha", format_double(v.alpha));
    s.set("kappa", format_double(v.kappa));
    s.set("w_n", format_double(v.w_n));
    s.set("xi", format_double(v.xi));
    s.set("margin", format_double(v.margin));
}

void run_bode(Context& c) {
    c.at("bode");
    const auto& p = c.params;
    const std::string target = c.settings.text("bode.target");
    const Velocity vel = c.settings.velocity();
    TransferFunction tf = TransferFunction::gain(1.0);
    if (target == "sensitivity")
        tf = sensitivity_tf(alpha(p.plant), p.obs.g_dob, p.obs.g_v);
    else if (target == "dob_open_loop")
        tf = dob_open_loop(alpha(p.plant), p.obs.g_dob, p.obs.g_v, vel);
    else if (target == "position")
        tf = compose_position_loop(p.plant, p.obs, p.gains, vel);
    else
        tf = compose_force_loop(p.plant, p.obs, p.env, p.C_f, vel).closed_loop;
    const double w0 = c.settings.number("bode.omega_min"), w1 = c.settings.number("bode.omega_max");
    if (!(w1 > w0)) throw ConfigError("bode.omega_max must exceed bode.omega_min");
    const auto pts = frequency_sweep(tf, w0, w1, static_cast<int>(c.settings.count("bode.points_per_decade")));
    c.out.files.emplace_back("bode.csv", bode_csv(pts));
    c.at("bode:plot");
    PlotSeries mag{target, {}, {}}, ph{target, {}, {}};
    for (const auto& pt : pts) {
        mag.x.push_back(pt.omega);
        mag.y.push_back(pt.magnitude_db);
        ph.x.push_back(pt.omega);
        ph.y.push_back(pt.phase_deg);
    }
    c.out.files.emplace_back("bode_magnitude.svg",
                             emit_svg_plot({mag}, {"Bode magnitude: " + target, "omega [rad/s]", "magnitude [dB]", true}));
    c.out.files.emplace_back("bode_phase.svg", emit_svg_plot({ph}, {"Bode phase: " + target, "omega [rad/s]", "phase [deg]", true}));
    const PeakResult peak = sensitivity_peak(tf, w0, w1);
    c.out.summary.set("peak_magnitude", format_double(peak.magnitude));
    c.out.summary.set("peak_omega", format_double(peak.omega));
    c.out.report = "peak |" + target + "| = " + format_double(peak.magnitude) + " at omega = " + format_double(peak.omega) + " rad/s\n";
}

std::string tf_text(const std::string& name, const TransferFunction& tf) {
    return name + ".num = " + format_polynomial(tf.num()) + "\n" + name + ".den = " + format_polynomial(tf.den()) + "\n";
}

void run_position_tf(Context& c) {
    c.at("position-tf");
    const auto& p = c.params;
    const double a = alpha(p.plant);
    const Velocity vel = c.settings.velocity();
    const TransferFunction composed = compose_position_loop(p.plant, p.obs, p.gains, vel);
    const TransferFunction printed = vel == Velocity::ideal ? position_loop_ideal(a, p.obs.g_dob, p.gains)
                                                            : position_loop_finite_gv(a, p.obs.g_dob, p.obs.g_v, p.gains);
    const PolynomialDiscrepancy d = compare_characteristic(composed.den(), printed.den());
    std::string text = "alpha = " + format_double(a) + "\nvelocity = " + c.settings.text("velocity") + "\n";
    text += tf_text("composed", composed);
    text += tf_text("closed_form", printed);
    text += "characteristic comparison: " + d.summary + "\n";
    text += "composed poles: " + format_roots(composed.poles()) + "\n";
    const RouthReport r = routh_hurwitz(composed.den());
    text += std::string(r.stable ? "STABLE" : "UNSTABLE") + " rhp=" + std::to_string(r.rhp_count) + "\n";
    c.out.files.emplace_back("position_tf.txt", text);
    c.out.report = text;
    c.out.summary.set("alpha", format_double(a));
    c.out.summary.set("max_relative_error", format_double(d.max_relative_error));
    c.out.summary.set("same_degree", d.same_degree ? "1" : "0");
    c.out.summary.set("stable", r.stable ? "1" : "0");
}

void run_force_tf(Context& c) {
    c.at("force-tf");
    const auto& p = c.params;
    const ForceLoopModel m = compose_force_loop(p.plant, p.obs, p.env, p.C_f, c.settings.velocity());
    std::string text = "C_f = " + format_double(p.C_f) + "\nvelocity = " + c.settings.text("velocity") + "\n";
    text += tf_text("open_loop", m.open_loop);
    text += tf_text("closed_loop", m.closed_loop);
    text += tf_text("true_force", m.true_force_tf);
    text += "open-loop zeros: " + format_roots(m.zeros) + "\n";
    text += "open-loop poles: " + format_roots(m.poles) + "\n";
    text += "closed-loop poles: " + format_roots(m.closed_loop.poles()) + "\n";
    const double dc_hat = m.closed_loop.at({0.0, 0.0}).real();
    const double dc_true = m.true_force_tf.at({0.0, 0.0}).real();
    text += "dc F_l_hat/F_ref = " + format_double(dc_hat) + "\ndc F_l/F_ref = " + format_double(dc_true) + "\n";
    const RouthReport r = routh_hurwitz(m.closed_loop.den());
    text += std::string(r.stable ? "STABLE" : "UNSTABLE") + " rhp=" + std::to_string(r.rhp_count) + "\n";
    c.out.files.emplace_back("force_tf.txt", text);
    c.out.report = text;
    c.out.summary.set("max_zero_real", format_double(m.max_zero_real()));
    c.out.summary.set("dc_estimate_ratio", format_double(dc_hat));
    c.out.summary.set("dc_force_ratio", format_double(dc_true));
    c.out.summary.set("stable", r.stable ? "1" : "0");
}

void run_routh(Context& c) {
    c.at("routh");
    Polynomial poly;
    if (c.scenario.values.contains("routh.polynomial"))
        poly = parse_polynomial(c.settings.text("routh.polynomial"));
    else
        poly = map_characteristic(c.params, c.settings.text("routh.loop") == "force" ? MapAxis::C_f : MapAxis::alpha,
                                  c.settings.velocity());
    const RouthReport r = routh_hurwitz(poly);
    std::string line = std::string(r.stable ? "STABLE" : "UNSTABLE") + " rhp=" + std::to_string(r.rhp_count);
    if (r.degenerate) line += " degenerate";
    line += "\n";
    std::string text = "polynomial = " + format_polynomial(poly) + "\n";
    for (std::size_t i = 0; i < r.array.size(); ++i) {
        text += "s^" + std::to_string(r.array.size() - 1 - i) + ":";
        for (double v : r.array[i]) text += " " + format_double(v);
        text += "\n";
    }
    text += line;
    c.out.files.emplace_back("routh.txt", text);
    c.out.report = line;
    c.out.summary.set("stable", r.stable ? "1" : "0");
    c.out.summary.set("rhp_count", std::to_string(r.rhp_count));
    c.out.summary.set("degenerate", r.degenerate ? "1" : "0");
}

RootLocus force_locus(const SystemParams& p, Velocity vel, const Settings& st) {
    const double g0 = st.number("locus.gain_min"), g1 = st.number("locus.gain_max");
    if (!(g1 > g0)) throw ConfigError("locus.gain_max must exceed locus.gain_min");
    const ForceLoopModel m = compose_force_loop(p.plant, p.obs, p.env, 1.0, vel);
    return root_locus(m.open_loop.num(), m.open_loop.den(), log_gain_grid(g0, g1, st.count("locus.points")));
}

void run_locus(Context& c) {
    c.at("locus");
    const RootLocus rl = force_locus(c.params, c.settings.velocity(), c.settings);
    c.out.files.emplace_back("locus.csv", locus_csv(rl));
    c.at("locus:plot");
    c.out.files.emplace_back("locus.svg", emit_svg_plot({locus_series("closed-loop poles", rl)},
                                                        {"Root locus over C_f", "Re", "Im"}));
    c.out.summary.set("critical_C_f", optional_number(rl.critical_gain));
    c.out.report = "critical_C_f=" + optional_number(rl.critical_gain) + "\n";
}

std::vector<double> sweep_grid(double lo, double hi, std::size_t n, bool log_scale) {
    if (!(hi > lo)) throw ConfigError("sweep max must exceed min");
    if (n < 2) throw ConfigError("sweep needs at least 2 points");
    if (log_scale) return log_gain_grid(lo, hi, n);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

void run_map(Context& c) {
    c.at("map");
    const MapAxis axis = parse_map_axis(c.settings.text("map.axis"));
    const bool log_scale = c.settings.text("map.scale") == "log";
    const auto grid = sweep_grid(c.settings.number("map.min"), c.settings.number("map.max"), c.settings.count("map.points"), log_scale);
    const StabilityMap m = stability_map(axis, grid, c.params, c.settings.velocity());
    c.out.files.emplace_back("map.csv", map_csv(m));
    c.at("map:plot");
    PlotSeries s{"max Re(pole)", m.values, m.max_real};
    AxesSpec ax{"Stability map over " + to_string(axis), to_string(axis), "max real part [1/s]", log_scale};
    c.out.files.emplace_back("map.svg", emit_svg_plot({s}, ax));
    std::string b;
    for (double v : m.boundaries) b += (b.empty() ? "" : ",") + format_double(v);
    c.out.summary.set("boundaries", b.empty() ? "none" : b);
    c.out.report = "boundaries=" + (b.empty() ? std::string("none") : b) + "\n";
}

SimConfig sim_config(const Settings& st) {
    SimConfig sim;
    sim.dt = st.number("sim.dt");
    sim.duration = st.number("sim.duration");
    sim.seed = static_cast<std::uint64_t>(st.number("sim.seed"));
    sim.noise_std = st.number("sim.noise_std");
    sim.initial_position = st.number("sim.initial_position");
    return sim;
}

FrictionModel friction_model(const Settings& st) {
    return {st.number("friction.coulomb"), st.number("friction.viscous"), st.number("friction.smoothing_velocity")};
}

PositionReference position_reference(const Settings& st) {
    PositionReference r;
    r.sinusoid = PositionReference::Sinusoid{st.number("ref.amplitude"), st.number("ref.frequency_hz"), st.number("ref.t_start"),
                                             st.number("ref.t_end")};
    if (!(r.sinusoid->t_end > r.sinusoid->t_start)) throw ConfigError("ref.t_end must exceed ref.t_start");
    return r;
}

ForceReference force_reference(const Settings& st) {
    return {st.number("force.initial"), st.number("force.step"), st.number("force.t_step")};
}

std::string metrics_text(const ResponseMetrics& m) {
    KeyValues kv;
    kv.set("overshoot", format_double(m.overshoot));
    kv.set("settling_time", format_double(m.settling_time));
    kv.set("steady_state_error", format_double(m.steady_state_error));
    kv.set("oscillation_index", format_double(m.oscillation_index));
    kv.set("velocity_noise_rms", format_double(m.velocity_noise_rms));
    return format_key_values(kv);
}

void add_metrics(KeyValues& kv, const std::string& prefix, const ResponseMetrics& m) {
    kv.set(prefix + "overshoot", format_double(m.overshoot));
    kv.set(prefix + "settling_time", format_double(m.settling_time));
    kv.set(prefix + "steady_state_error", format_double(m.steady_state_error));
    kv.set(prefix + "oscillation_index", format_double(m.oscillation_index));
    kv.set(prefix + "velocity_noise_rms", format_double(m.velocity_noise_rms));
}

void run_simulate_position(Context& c) {
    c.at("simulate-position");
    const auto& p = c.params;
    const PositionReference ref = position_reference(c.settings);
    const Trajectory t = simulate_position(p.plant, p.obs, p.gains, ref, friction_model(c.settings), sim_config(c.settings));
    c.at("simulate-position:metrics");
    const auto& sin = *ref.sinusoid;
    const auto qref = [&](double tt) { return ref.at(tt).q; };
    const double t1 = std::min(sin.t_end, t.samples.back().t);
    const ResponseMetrics m = compute_metrics(t, Signal::q_m, qref, {sin.t_start, t1, 0.5});
    const double amp = sinusoid_amplitude(t, Signal::q_m, qref, 2.0 * std::numbers::pi * sin.frequency_hz,
                                          std::min(sin.t_start + 1.0, t1), t1);
    c.out.files.emplace_back("trajectory.csv", trajectory_csv(decimated(t, c.settings.count("output.stride"))));
    c.out.files.emplace_back("metrics.txt", metrics_text(m));
    c.at("simulate-position:plot");
    c.out.files.emplace_back("trajectory.svg",
                             emit_svg_plot({trajectory_series("q_m", t, Signal::q_m), trajectory_series("q_m - q_ref", t, Signal::q_m, qref)},
                                           {"Position response", "t [s]", "position"}));
    add_metrics(c.out.summary, "", m);
    c.out.summary.set("tracking_error_amplitude", format_double(amp));
    c.out.report = format_key_values(c.out.summary);
}

void run_simulate_force(Context& c) {
    c.at("simulate-force");
    const auto& p = c.params;
    const ForceReference ref = force_reference(c.settings);
    const ContactMode mode = c.settings.text("contact") == "bilateral" ? ContactMode::bilateral : ContactMode::unilateral;
    const Trajectory t = simulate_force(p.plant, p.obs, p.C_f, ref, p.env, friction_model(c.settings), sim_config(c.settings), mode);
    c.at("simulate-force:metrics");
    const auto fref = [&](double tt) { return ref.at(tt); };
    const double t1 = std::min(ref.t_step + 0.5, t.samples.back().t);
    const ResponseMetrics m = compute_metrics(t, Signal::F_l_true, fref, {ref.t_step, t1, 1.0});
    c.out.files.emplace_back("trajectory.csv", trajectory_csv(decimated(t, c.settings.count("output.stride"))));
    c.out.files.emplace_back("metrics.txt", metrics_text(m));
    c.at("simulate-force:plot");
    c.out.files.emplace_back("trajectory.svg", emit_svg_plot({trajectory_series("F_l", t, Signal::F_l_true),
                                                              trajectory_series("F_l_hat", t, Signal::F_l_hat)},
                                                             {"Force response", "t [s]", "force [N]"}));
    add_metrics(c.out.summary, "", m);
    c.out.report = format_key_values(c.out.summary);
}

// ---------------------------------------------------------------------------
// Figure bundles.

void fig3(Context& c) {
    c.at("fig3:sweeps");
    const auto& p = c.params;
    const auto alphas = c.settings.list("fig3.alphas");
    const double w0 = c.settings.number("bode.omega_min"), w1 = c.settings.number("bode.omega_max");
    if (!(w1 > w0)) throw ConfigError("bode.omega_max must exceed bode.omega_min");
    const int ppd = static_cast<int>(c.settings.count("bode.points_per_decade"));
    std::vector<PlotSeries> series;
    for (double a : alphas) {
        const TransferFunction tf = sensitivity_tf(a, p.obs.g_dob, p.obs.g_v);
        const auto pts = frequency_sweep(tf, w0, w1, ppd);
        const SecondOrder so = second_order_params(a, p.obs.g_v / p.obs.g_dob, p.obs.g_dob);
        const PeakResult peak = sensitivity_peak(tf, w0, w1);
        c.out.files.emplace_back("fig3_alpha_" + label(a) + ".csv", bode_csv(pts));
        char name[96];
        std::snprintf(name, sizeof name, "alpha=%s xi=%.3f", label(a).c_str(), so.xi);
        PlotSeries s{name, {}, {}};
        for (const auto& pt : pts) {
            s.x.push_back(pt.omega);
            s.y.push_back(pt.magnitude_db);
        }
        series.push_back(std::move(s));
        const std::string key = "alpha_" + label(a);
        c.out.summary.set(key + ".xi", format_double(so.xi));
        c.out.summary.set(key + ".peak", format_double(peak.magnitude));
        c.out.summary.set(key + ".peak_omega", format_double(peak.omega));
    }
    c.at("fig3:plot");
    c.out.files.emplace_back("fig3.svg", emit_svg_plot(series, {"Sensitivity function T_Sen", "omega [rad/s]", "|T_Sen| [dB]", true}));
}

void fig7(Context& c) {
    c.at("fig7:maps");
    const auto& p = c.params;
    const auto grid = sweep_grid(c.settings.number("map.min"), c.settings.number("map.max"), c.settings.count("map.points"), true);
    const double a_star = third_order_alpha_condition(p.obs.g_dob, p.gains);
    c.out.summary.set("alpha_star", format_double(a_star));
    std::vector<PlotSeries> series;
    for (const Velocity v : {Velocity::ideal, Velocity::filtered}) {
        const std::string tag = v == Velocity::ideal ? "ideal" : "filtered";
        const StabilityMap m = stability_map(MapAxis::alpha, grid, p, v);
        c.out.files.emplace_back("fig7_" + tag + ".csv", map_csv(m));
        std::string b;
        for (double x : m.boundaries) b += (b.empty() ? "" : ",") + format_double(x);
        c.out.summary.set(tag + ".boundaries", b.empty() ? "none" : b);
        series.push_back({"max Re, " + tag + " velocity", m.values, m.max_real});
    }
    c.at("fig7:plot");
    c.out.files.emplace_back("fig7.svg", emit_svg_plot(series, {"Position loop stability over alpha", "alpha", "max real part [1/s]", true}));
}

void fig8(Context& c) {
    const auto& base = c.params;
    const Velocity vel = c.settings.velocity();
    c.at("fig8:g_rfob");
    {
        std::vector<PlotSeries> series;
        for (double r : c.settings.list("fig8.g_rfob_ratios")) {
            SystemParams p = base;
            p.obs.g_rfob = r * p.obs.g_dob;
            const RootLocus rl = force_locus(p, vel, c.settings);
            c.out.files.emplace_back("fig8a_grfob_" + label(r) + ".csv", locus_csv(rl));
            c.out.summary.set("a.grfob_" + label(r) + ".critical_C_f", optional_number(rl.critical_gain));
            series.push_back(locus_series("g_rfob=" + label(r) + " g_dob", rl));
        }
        c.at("fig8:g_rfob:plot");
        c.out.files.emplace_back("fig8a.svg", emit_svg_plot(series, {"Root loci over C_f, RFOB bandwidth", "Re", "Im"}));
    }
    c.at("fig8:j_hat");
    {
        std::vector<PlotSeries> series;
        for (double r : c.settings.list("fig8.j_hat_ratios")) {
            SystemParams p = base;
            p.obs.J_hat = r * p.plant.J_m;
            const RootLocus rl = force_locus(p, vel, c.settings);
            const ForceLoopModel m = compose_force_loop(p.plant, p.obs, p.env, p.C_f, vel);
            c.out.files.emplace_back("fig8b_jhat_" + label(r) + ".csv", locus_csv(rl));
            const std::string key = "b.jhat_" + label(r);
            c.out.summary.set(key + ".critical_C_f", optional_number(rl.critical_gain));
            c.out.summary.set(key + ".max_zero_real", format_double(m.max_zero_real()));
            c.out.summary.set(key + ".rhp_zero", m.max_zero_real() > 0.0 ? "1" : "0");
            series.push_back(locus_series("J_hat=" + label(r) + " J_m", rl));
        }
        c.at("fig8:j_hat:plot");
        c.out.files.emplace_back("fig8b.svg", emit_svg_plot(series, {"Root loci over C_f, identified inertia", "Re", "Im"}));
    }
    c.at("fig8:k_tau_hat");
    {
        std::string csv = "k_tau_hat_ratio,critical_C_f,dc_force_ratio\n";
        PlotSeries s{"dc F_l/F_ref", {}, {}};
        for (double r : c.settings.list("fig8.k_tau_hat_ratios")) {
            SystemParams p = base;
            p.obs.K_tau_hat = r * p.plant.K_tau;
            const RootLocus rl = force_locus(p, vel, c.settings);
            const double dc = compose_force_loop(p.plant, p.obs, p.env, p.C_f, vel).true_force_tf.at({0.0, 0.0}).real();
            const std::string key = "c.ktau_" + label(r);
            c.out.summary.set(key + ".critical_C_f", optional_number(rl.critical_gain));
            c.out.summary.set(key + ".dc_force_ratio", format_double(dc));
            csv += label(r) + "," + optional_number(rl.critical_gain) + "," + format_double(dc) + "\n";
            s.x.push_back(r);
            s.y.push_back(dc);
        }
        c.out.files.emplace_back("fig8c.csv", csv);
        c.at("fig8:k_tau_hat:plot");
        c.out.files.emplace_back("fig8c.svg", emit_svg_plot({s}, {"Force accuracy vs K_tau_hat/K_tau", "K_tau_hat / K_tau", "dc F_l / F_ref"}));
    }
}

void fig9(Context& c) {
    c.at("fig9:simulate");
    const auto& base = c.params;
    const PositionReference ref = position_reference(c.settings);
    const SimConfig noisy = sim_config(c.settings);
    SimConfig clean = noisy;
    clean.noise_std = 0.0;
    const std::array<double, 2> ratios{1.0, c.settings.number("fig9.inertia_ratio")};
    const FrictionModel friction = friction_model(c.settings);
    std::array<Trajectory, 4> runs;  // [case][noisy, clean]
    for_each_index(4, Exec::parallel, [&](std::size_t i) {
        PlantParams plant = base.plant;
        plant.J_mn = ratios[i / 2] * plant.J_m;
        runs[i] = simulate_position(plant, base.obs, base.gains, ref, friction, i % 2 == 0 ? noisy : clean);
    });
    c.at("fig9:metrics");
    const auto& sin = *ref.sinusoid;
    const auto qref = [&](double tt) { return ref.at(tt).q; };
    const double t1 = std::min(sin.t_end, runs[0].samples.back().t);
    const double w = 2.0 * std::numbers::pi * sin.frequency_hz;
    const std::size_t stride = c.settings.count("output.stride");
    std::vector<PlotSeries> err_series, cur_series;
    for (std::size_t k = 0; k < 2; ++k) {
        const Trajectory& t = runs[2 * k];
        const std::string tag = "jmn_x" + label(ratios[k]);
        const double amp = sinusoid_amplitude(t, Signal::q_m, qref, w, std::min(sin.t_start + 1.0, t1), t1);
        const double noise = difference_rms(t, runs[2 * k + 1], Signal::I_m, sin.t_start, t1);
        const ResponseMetrics m = compute_metrics(t, Signal::q_m, qref, {sin.t_start, t1, 0.5});
        c.out.summary.set(tag + ".tracking_error_amplitude", format_double(amp));
        c.out.summary.set(tag + ".current_noise_rms", format_double(noise));
        add_metrics(c.out.summary, tag + ".", m);
        c.out.files.emplace_back("fig9_" + tag + ".csv", trajectory_csv(decimated(t, stride)));
        const std::string name = "J_mn=" + label(ratios[k]) + " J_m";
        err_series.push_back(trajectory_series(name, t, Signal::q_m, qref));
        cur_series.push_back(trajectory_series(name, t, Signal::I_m));
    }
    c.at("fig9:plot");
    c.out.files.emplace_back("fig9_tracking.svg", emit_svg_plot(err_series, {"Position tracking error", "t [s]", "q_m - q_ref"}));
    c.out.files.emplace_back("fig9_current.svg", emit_svg_plot(cur_series, {"Motor current", "t [s]", "I_m [A]"}));
}

void fig10(Context& c) {
    c.at("fig10:simulate");
    const auto& base = c.params;
    const ForceReference ref = force_reference(c.settings);
    SimConfig sim = sim_config(c.settings);
    sim.truncate_on_divergence = true;
    struct Case {
        const char* tag;
        double j_hat_ratio;
        double g_rfob_ratio;
    };
    const std::array<Case, 3> cases{{{"a", 1.0, 1.0},
                                     {"b", c.settings.number("fig10.j_hat_low"), c.settings.number("fig10.g_rfob_ratio")},
                                     {"c", c.settings.number("fig10.j_hat_high"), c.settings.number("fig10.g_rfob_ratio")}}};
    std::array<Trajectory, 3> runs;
    for_each_index(3, Exec::parallel, [&](std::size_t i) {
        ObserverConfig obs = base.obs;
        obs.J_hat = cases[i].j_hat_ratio * base.plant.J_m;
        obs.g_rfob = cases[i].g_rfob_ratio * obs.g_dob;
        runs[i] = simulate_force(base.plant, obs, base.C_f, ref, base.env, FrictionModel{}, sim);
    });
    c.at("fig10:metrics");
    const auto fref = [&](double tt) { return ref.at(tt); };
    const double t1 = ref.t_step + 0.5;
    if (sim.duration < t1) throw ConfigError("sim.duration must cover force.t_step + 0.5 s");
    const std::size_t stride = c.settings.count("output.stride");
    std::vector<PlotSeries> series;
    const double top = 2.0 * std::max(std::abs(ref.initial), std::abs(ref.initial + ref.step));
    for (std::size_t i = 0; i < 3; ++i) {
        const Trajectory& t = runs[i];
        const ResponseMetrics m = compute_metrics(t, Signal::F_l_true, fref, {ref.t_step, t1, 1.0});
        const std::string tag = cases[i].tag;
        add_metrics(c.out.summary, tag + ".", m);
        c.out.summary.set(tag + ".j_hat_ratio", format_double(cases[i].j_hat_ratio));
        c.out.summary.set(tag + ".g_rfob_ratio", format_double(cases[i].g_rfob_ratio));
        c.out.summary.set(tag + ".diverged", t.diverged_at ? "1" : "0");
        if (t.diverged_at) c.out.summary.set(tag + ".diverged_at", format_double(*t.diverged_at));
        c.out.files.emplace_back("fig10_" + tag + ".csv", trajectory_csv(decimated(t, stride)));
        char name[96];
        std::snprintf(name, sizeof name, "(%s) J_hat=%sJ g_rfob=%sg_dob", cases[i].tag, label(cases[i].j_hat_ratio).c_str(),
                      label(cases[i].g_rfob_ratio).c_str());
        PlotSeries s = trajectory_series(name, t, Signal::F_l_true, nullptr, ref.t_step - 0.05, t1, 1e3 * std::max(top, 1.0));
        if (s.x.empty()) s = PlotSeries{name, {ref.t_step}, {0.0}};
        series.push_back(std::move(s));
    }
    c.at("fig10:plot");
    AxesSpec ax{"Contact force response", "t [s]", "F_l [N]"};
    ax.y_range = std::pair{std::min(0.0, -0.1 * top), std::max(top, 1e-9)};
    c.out.files.emplace_back("fig10.svg", emit_svg_plot(series, ax));
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames)
        if (name == n) return k;
    return std::nullopt;
}

std::string to_string(ScenarioKind kind) {
    for (const auto& [k, n] : kKindNames)
        if (k == kind) return n;
    return "?";
}

const std::vector<ScenarioKind>& all_scenario_kinds() {
    static const std::vector<ScenarioKind> kinds = [] {
        std::vector<ScenarioKind> v;
        for (const auto& kn : kKindNames) v.push_back(kn.first);
        return v;
    }();
    return kinds;
}

std::optional<Figure> parse_figure(std::string_view name) {
    for (const auto& [f, n] : kFigureNames)
        if (name == n) return f;
    return std::nullopt;
}

std::string to_string(Figure f) {
    for (const auto& [g, n] : kFigureNames)
        if (g == f) return n;
    return "?";
}

KeyValues figure_defaults(Figure f) {
    KeyValues kv;
    switch (f) {
        case Figure::fig3:
            kv.set("g_dob", "100");
            kv.set("g_v", "1000");
            break;
        case Figure::fig10:
            kv.set("g_v", "10000");
            kv.set("D_env", "10");
            kv.set("C_f", "2000");
            break;
        default: break;
    }
    return kv;
}

Scenario parse_scenario(ScenarioKind kind, std::string_view text) {
    Scenario s;
    s.kind = kind;
    KeyValues kv = parse_key_values(text);
    std::vector<std::string> errors;

    if (const auto* k = kv.find("kind")) {
        if (*k != to_string(kind)) errors.push_back("key 'kind': config says '" + *k + "' but the command is '" + to_string(kind) + "'");
        kv.entries.erase(std::find_if(kv.entries.begin(), kv.entries.end(), [](const auto& e) { return e.first == "kind"; }));
    }
    std::optional<Figure> figure;
    if (kind == ScenarioKind::reproduce_figure) {
        if (const auto* f = kv.find("figure")) {
            figure = parse_figure(*f);
            if (!figure) errors.push_back("key 'figure': expected one of fig3|fig7|fig8|fig9|fig10 (got '" + *f + "')");
        } else {
            errors.emplace_back("key 'figure' is required for reproduce-figure");
        }
    }
    const SpecList spec = kind == ScenarioKind::reproduce_figure ? (figure ? figure_settings(*figure) : SpecList{}) : kind_settings(kind);
    const auto& pkeys = parameter_keys();
    SystemParams probe;
    for (const auto& [key, value] : kv.entries) {
        if (key == "figure" && kind == ScenarioKind::reproduce_figure) continue;
        if (std::find(pkeys.begin(), pkeys.end(), key) != pkeys.end()) {
            try {
                apply_parameter(probe, key, value);
            } catch (const ConfigError& e) {
                errors.emplace_back(e.what());
            }
            continue;
        }
        const auto it = std::find_if(spec.begin(), spec.end(), [&](const SettingSpec& sp) { return sp.key == key; });
        if (it == spec.end()) {
            if (!(kind == ScenarioKind::reproduce_figure && !figure)) errors.push_back("unknown key '" + key + "' for " + to_string(kind));
            continue;
        }
        if (auto msg = check_value(*it, value); !msg.empty()) errors.push_back(std::move(msg));
    }
    s.values = std::move(kv);
    if (errors.empty()) {
        try {
            scenario_params(s).validate();
        } catch (const ConfigError& e) {
            errors.emplace_back(e.what());
        }
    }
    if (!errors.empty()) {
        std::string msg;
        for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
        throw ConfigError(msg);
    }
    return s;
}

std::string format_scenario(const Scenario& s) {
    KeyValues kv;
    kv.entries.emplace_back("kind", to_string(s.kind));
    for (const auto& e : s.values.entries) kv.entries.push_back(e);
    return format_key_values(kv);
}

SystemParams scenario_params(const Scenario& s) {
    SystemParams p;
    const auto& pkeys = parameter_keys();
    if (s.kind == ScenarioKind::reproduce_figure)
        if (const auto* f = s.values.find("figure"))
            if (const auto fig = parse_figure(*f))
                for (const auto& [k, v] : figure_defaults(*fig).entries) apply_parameter(p, k, v);
    for (const auto& [k, v] : s.values.entries)
        if (std::find(pkeys.begin(), pkeys.end(), k) != pkeys.end()) apply_parameter(p, k, v);
    return p;
}

ScenarioOutput execute_scenario(const Scenario& s, std::string* stage) {
    if (stage) *stage = "parameters";
    const SystemParams params = scenario_params(s);
    params.validate();
    Context c{s, Settings(s.values, settings_for(s)), params, stage, {}};
    switch (s.kind) {
        case ScenarioKind::constraint_check: run_constraint_check(c); break;
        case ScenarioKind::bode: run_bode(c); break;
        case ScenarioKind::position_tf: run_position_tf(c); break;
        case ScenarioKind::force_tf: run_force_tf(c); break;
        case ScenarioKind::routh: run_routh(c); break;
        case ScenarioKind::locus: run_locus(c); break;
        case ScenarioKind::map: run_map(c); break;
        case ScenarioKind::simulate_position: run_simulate_position(c); break;
        case ScenarioKind::simulate_force: run_simulate_force(c); break;
        case ScenarioKind::reproduce_figure: {
            const auto* name = s.values.find("figure");
            const auto fig = name ? parse_figure(*name) : std::nullopt;
            if (!fig) throw ConfigError("key 'figure' is required for reproduce-figure");
            switch (*fig) {
                case Figure::fig3: fig3(c); break;
                case Figure::fig7: fig7(c); break;
                case Figure::fig8: fig8(c); break;
                case Figure::fig9: fig9(c); break;
                case Figure::fig10: fig10(c); break;
            }
            c.out.report = format_key_values(c.out.summary);
            break;
        }
    }
    if (!c.out.summary.entries.empty()) c.out.files.emplace_back("summary.txt", format_key_values(c.out.summary));
    return std::move(c.out);
}

int exit_code(ErrorClass cls) {
    switch (cls) {
        case ErrorClass::config: return 2;
        case ErrorClass::numeric: return 3;
        case ErrorClass::io: return 4;
    }
    return 3;
}

int run_scenario(const Scenario& s, std::ostream& out, std::ostream& err) {
    std::string stage = "start";
    try {
        ScenarioOutput o = execute_scenario(s, &stage);
        stage = "write";
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(s.output_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + s.output_dir + "': " + ec.message());
        for (const auto& [name, content] : o.files) {
            const fs::path path = fs::path(s.output_dir) / name;
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
            f.write(content.data(), static_cast<std::streamsize>(content.size()));
            if (!f) throw IoError("write failed for '" + path.string() + "'");
        }
        out << o.report;
        return 0;
    } catch (const Error& e) {
        err << "dob-lab: " << to_string(s.kind) << " failed in stage '" << stage << "': " << e.what() << "\n";
        return exit_code(e.error_class());
    } catch (const std::exception& e) {
        err << "dob-lab: " << to_string(s.kind) << " failed in stage '" << stage << "': " << e.what() << "\n";
        return 3;
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) throw IoError("read failed for '" + path + "'");
    return text;
}

std::string format_sci(double v, int digits) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits, v);
    std::string s = buf;
    const auto e = s.find('e');
    std::string mant = s.substr(0, e);
    const int exp = std::stoi(s.substr(e + 1));
    if (mant.rfind("-", 0) == 0 && std::stod(mant) == 0.0) mant.erase(0, 1);
    return mant + "e" + std::to_string(exp);
}

}  // namespace doblab
