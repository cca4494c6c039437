// scenario.hpp — Scenario configs, runners and table output for the cavrevive CLI
//
// Config files are flat UTF-8 "key=value" lines with dotted section prefixes
// (model.nbar=50). Blank lines and lines starting with '#' are ignored. Times are in
// units of 1/lambda, i.e. every time value is lambda*t.

#pragma once

#include "cavrevive/attractor.hpp"
#include "cavrevive/engine.hpp"
#include "cavrevive/errors.hpp"
#include "cavrevive/hilbert.hpp"
#include "cavrevive/observables.hpp"
#include "cavrevive/parallel.hpp"
#include "cavrevive/phase_space.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace cavrevive::scenario {

using json = nlohmann::json;
using KeyValues = std::map<std::string, std::string>;

enum class InitialKind { ground, basin, attractor, spin_coherent, custom_dicke };
enum class OutputFormat { csv, json };

struct ObservableFlags {
    bool p_initial{true};
    bool p_ground{false};
    bool p_attractor_plus{true};
    bool p_attractor_minus{false};
    bool entropy{true};
    bool tangle{false};
    bool leakage{false};
};

struct ScenarioConfig {
    ModelParams model;
    InitialKind initial{InitialKind::ground};
    cplx basin_a{0.0};
    AttractorSign attractor_sign{AttractorSign::plus};
    cplx beta{0.0};
    std::vector<cplx> dicke_amps;
    double t_start{0.0};
    double t_stop{0.0};
    int steps{1};
    ObservableFlags observables;
    std::string output_path;  // empty: stdout
    OutputFormat format{OutputFormat::csv};
};

// ------------------------------- number formatting ----------------------------

// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// ---------------------------------- parsing -----------------------------------

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_real(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
        throw ConfigError(key + ": expected a finite real number, got '" + text + "'");
    return v;
}

inline int parse_int(const std::string& key, const std::string& text) {
    int v = 0;
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(text.data(), last, v);
    if (res.ec != std::errc() || res.ptr != last) throw ConfigError(key + ": expected an integer, got '" + text + "'");
    return v;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

inline std::vector<double> parse_real_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
    if (out.empty()) throw ConfigError(key + ": expected a comma-separated list of numbers");
    return out;
}

inline const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "model.n_qubits", "model.nbar", "model.theta", "model.lambda", "model.omega", "model.fock_cutoff",
        "initial.kind", "initial.a_re", "initial.a_im", "initial.sign", "initial.beta_re", "initial.beta_im",
        "initial.amps_re", "initial.amps_im",
        "time.start", "time.stop", "time.steps",
        "observables.p_initial", "observables.p_ground", "observables.p_attractor_plus",
        "observables.p_attractor_minus", "observables.entropy", "observables.tangle", "observables.leakage",
        "output.path", "output.format"};
    return keys;
}

} // namespace detail

inline KeyValues parse_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" + t + "'");
        const std::string key = detail::trim(std::string_view(t).substr(0, eq));
        const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (!kv.emplace(key, value).second) throw ConfigError(key + ": duplicate key");
    }
    return kv;
}

inline ScenarioConfig config_from_keys(const KeyValues& kv) {
    for (const auto& [key, value] : kv)
        if (!detail::known_keys().count(key)) throw ConfigError(key + ": unknown key");

    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end() || it->second.empty()) return std::nullopt;
        return it->second;
    };
    auto real_or = [&](const std::string& key, double fallback) {
        auto v = get(key);
        return v ? detail::parse_real(key, *v) : fallback;
    };
    auto bool_or = [&](const std::string& key, bool fallback) {
        auto v = get(key);
        return v ? detail::parse_bool(key, *v) : fallback;
    };

    ScenarioConfig c;
    const auto nq = get("model.n_qubits");
    if (!nq) throw ConfigError("model.n_qubits: required");
    c.model.n_qubits = detail::parse_int("model.n_qubits", *nq);
    if (c.model.n_qubits < 1) throw ConfigError("model.n_qubits: must be >= 1");
    const auto nbar = get("model.nbar");
    if (!nbar) throw ConfigError("model.nbar: required");
    c.model.nbar = detail::parse_real("model.nbar", *nbar);
    if (c.model.nbar < 0.0) throw ConfigError("model.nbar: must be >= 0");
    c.model.theta = real_or("model.theta", 0.0);
    c.model.coupling = real_or("model.lambda", 1.0);
    if (!(c.model.coupling > 0.0)) throw ConfigError("model.lambda: must be > 0");
    c.model.omega = real_or("model.omega", 0.0);
    if (auto v = get("model.fock_cutoff")) {
        c.model.fock_cutoff = detail::parse_int("model.fock_cutoff", *v);
        if (c.model.fock_cutoff < 0) throw ConfigError("model.fock_cutoff: must be >= 0");
    }

    const std::string kind = get("initial.kind").value_or("ground");
    const std::map<std::string, InitialKind> kinds = {{"ground", InitialKind::ground},
                                                      {"basin", InitialKind::basin},
                                                      {"attractor", InitialKind::attractor},
                                                      {"spin_coherent", InitialKind::spin_coherent},
                                                      {"custom_dicke", InitialKind::custom_dicke}};
    auto kit = kinds.find(kind);
    if (kit == kinds.end())
        throw ConfigError("initial.kind: expected ground|basin|attractor|spin_coherent|custom_dicke, got '" + kind + "'");
    c.initial = kit->second;

    // Parameters of other kinds must not be present: exactly one initial kind.
    auto forbid = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys)
            if (kv.count(k)) throw ConfigError(std::string(k) + ": not used by initial.kind=" + kind);
    };
    switch (c.initial) {
    case InitialKind::ground:
        forbid({"initial.a_re", "initial.a_im", "initial.sign", "initial.beta_re", "initial.beta_im",
                "initial.amps_re", "initial.amps_im"});
        break;
    case InitialKind::basin:
        forbid({"initial.sign", "initial.beta_re", "initial.beta_im", "initial.amps_re", "initial.amps_im"});
        c.basin_a = {real_or("initial.a_re", 0.0), real_or("initial.a_im", 0.0)};
        if (std::abs(c.basin_a) > basin_radius(c.model.n_qubits) * (1.0 + 1e-12))
            throw ConfigError("initial.a_re: |a| exceeds 1/sqrt(2^(N_q-1))");
        break;
    case InitialKind::attractor: {
        forbid({"initial.a_re", "initial.a_im", "initial.beta_re", "initial.beta_im", "initial.amps_re",
                "initial.amps_im"});
        const std::string sign = get("initial.sign").value_or("plus");
        if (sign == "plus") c.attractor_sign = AttractorSign::plus;
        else if (sign == "minus") c.attractor_sign = AttractorSign::minus;
        else throw ConfigError("initial.sign: expected plus or minus, got '" + sign + "'");
        break;
    }
    case InitialKind::spin_coherent:
        forbid({"initial.a_re", "initial.a_im", "initial.sign", "initial.amps_re", "initial.amps_im"});
        c.beta = {real_or("initial.beta_re", 0.0), real_or("initial.beta_im", 0.0)};
        break;
    case InitialKind::custom_dicke: {
        forbid({"initial.a_re", "initial.a_im", "initial.sign", "initial.beta_re", "initial.beta_im"});
        const auto re_text = get("initial.amps_re");
        if (!re_text) throw ConfigError("initial.amps_re: required for custom_dicke");
        const auto re = detail::parse_real_list("initial.amps_re", *re_text);
        std::vector<double> im(re.size(), 0.0);
        if (auto im_text = get("initial.amps_im")) im = detail::parse_real_list("initial.amps_im", *im_text);
        if (re.size() != static_cast<std::size_t>(c.model.n_qubits + 1))
            throw ConfigError("initial.amps_re: expected N_q+1 = " + std::to_string(c.model.n_qubits + 1) + " values");
        if (im.size() != re.size()) throw ConfigError("initial.amps_im: length differs from initial.amps_re");
        double norm2 = 0.0;
        for (std::size_t i = 0; i < re.size(); ++i) {
            c.dicke_amps.emplace_back(re[i], im[i]);
            norm2 += std::norm(c.dicke_amps.back());
        }
        if (std::abs(norm2 - 1.0) > 1e-9)
            throw ConfigError("initial.amps_re: amplitudes are not normalized (sum |c|^2 = " + format_double(norm2) + ")");
        break;
    }
    }

    c.t_start = real_or("time.start", 0.0);
    c.t_stop = real_or("time.stop", c.t_start);
    if (auto v = get("time.steps")) c.steps = detail::parse_int("time.steps", *v);
    if (c.steps < 1) throw ConfigError("time.steps: must be >= 1");
    if (c.t_stop < c.t_start) throw ConfigError("time.stop: must be >= time.start");

    auto& o = c.observables;
    o.p_initial = bool_or("observables.p_initial", o.p_initial);
    o.p_ground = bool_or("observables.p_ground", o.p_ground);
    o.p_attractor_plus = bool_or("observables.p_attractor_plus", o.p_attractor_plus);
    o.p_attractor_minus = bool_or("observables.p_attractor_minus", o.p_attractor_minus);
    o.entropy = bool_or("observables.entropy", o.entropy);
    o.tangle = bool_or("observables.tangle", o.tangle);
    o.leakage = bool_or("observables.leakage", o.leakage);
    if (o.tangle && c.model.n_qubits != 2) throw ConfigError("observables.tangle: only defined for model.n_qubits=2");

    c.output_path = get("output.path").value_or("");
    const std::string fmt = get("output.format").value_or("csv");
    if (fmt == "csv") c.format = OutputFormat::csv;
    else if (fmt == "json") c.format = OutputFormat::json;
    else throw ConfigError("output.format: expected csv or json, got '" + fmt + "'");
    return c;
}

// Reads a key=value file, or the "config" object of a JSON sidecar written by a
// previous run (detected by a leading '{').
inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw ConfigError("--config: invalid JSON sidecar: " + std::string(e.what()));
        }
        if (!j.contains("config") || !j["config"].is_object())
            throw ConfigError("config: sidecar has no \"config\" object");
        KeyValues kv;
        for (const auto& [k, v] : j["config"].items()) {
            if (!v.is_string()) throw ConfigError(k + ": sidecar values must be strings");
            kv[k] = v.get<std::string>();
        }
        return config_from_keys(kv);
    }
    std::istringstream is(text);
    return config_from_keys(parse_key_values(is));
}

// Fully resolved key=value form; feeding it back reproduces the run.
inline KeyValues to_key_values(const ScenarioConfig& c) {
    const ModelParams m = resolve(c.model);
    KeyValues kv;
    kv["model.n_qubits"] = std::to_string(m.n_qubits);
    kv["model.nbar"] = format_double(m.nbar);
    kv["model.theta"] = format_double(m.theta);
    kv["model.lambda"] = format_double(m.coupling);
    kv["model.omega"] = format_double(m.omega);
    kv["model.fock_cutoff"] = std::to_string(m.fock_cutoff);
    switch (c.initial) {
    case InitialKind::ground: kv["initial.kind"] = "ground"; break;
    case InitialKind::basin:
        kv["initial.kind"] = "basin";
        kv["initial.a_re"] = format_double(c.basin_a.real());
        kv["initial.a_im"] = format_double(c.basin_a.imag());
        break;
    case InitialKind::attractor:
        kv["initial.kind"] = "attractor";
        kv["initial.sign"] = c.attractor_sign == AttractorSign::plus ? "plus" : "minus";
        break;
    case InitialKind::spin_coherent:
        kv["initial.kind"] = "spin_coherent";
        kv["initial.beta_re"] = format_double(c.beta.real());
        kv["initial.beta_im"] = format_double(c.beta.imag());
        break;
    case InitialKind::custom_dicke: {
        kv["initial.kind"] = "custom_dicke";
        std::string re, im;
        for (std::size_t i = 0; i < c.dicke_amps.size(); ++i) {
            if (i) {
                re += ",";
                im += ",";
            }
            re += format_double(c.dicke_amps[i].real());
            im += format_double(c.dicke_amps[i].imag());
        }
        kv["initial.amps_re"] = re;
        kv["initial.amps_im"] = im;
        break;
    }
    }
    kv["time.start"] = format_double(c.t_start);
    kv["time.stop"] = format_double(c.t_stop);
    kv["time.steps"] = std::to_string(c.steps);
    auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
    kv["observables.p_initial"] = flag(c.observables.p_initial);
    kv["observables.p_ground"] = flag(c.observables.p_ground);
    kv["observables.p_attractor_plus"] = flag(c.observables.p_attractor_plus);
    kv["observables.p_attractor_minus"] = flag(c.observables.p_attractor_minus);
    kv["observables.entropy"] = flag(c.observables.entropy);
    kv["observables.tangle"] = flag(c.observables.tangle);
    kv["observables.leakage"] = flag(c.observables.leakage);
    kv["output.path"] = c.output_path;
    kv["output.format"] = c.format == OutputFormat::csv ? "csv" : "json";
    return kv;
}

// ------------------------------- scenario pieces ------------------------------

inline QubitPureState initial_qubit_state(const ScenarioConfig& c) {
    const int nq = c.model.n_qubits;
    switch (c.initial) {
    case InitialKind::ground: return ground_state(nq);
    case InitialKind::basin: return basin_state({c.basin_a, nq, c.model.theta});
    case InitialKind::attractor: return attractor_state(c.attractor_sign, c.model.theta, nq);
    case InitialKind::spin_coherent: return spin_coherent(c.beta, nq);
    case InitialKind::custom_dicke: {
        Vector v(nq + 1);
        for (int i = 0; i <= nq; ++i) v(i) = c.dicke_amps[static_cast<std::size_t>(i)];
        return {nq, std::move(v)};
    }
    }
    throw ConfigError("initial.kind: unsupported");
}

inline SymmetricState initial_state(const ScenarioConfig& c) {
    const ModelParams m = resolve(c.model);
    return symmetric_product(initial_qubit_state(c), coherent_field_amps(m.nbar, m.theta, m.fock_cutoff));
}

// steps samples from start to stop inclusive (lambda*t units).
inline std::vector<double> time_grid(const ScenarioConfig& c) {
    std::vector<double> t(static_cast<std::size_t>(c.steps));
    for (int k = 0; k < c.steps; ++k)
        t[static_cast<std::size_t>(k)] =
            c.steps == 1 ? c.t_start : c.t_start + (c.t_stop - c.t_start) * k / (c.steps - 1);
    return t;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const {
        auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end()) throw Error("table has no column '" + name + "'");
        return static_cast<std::size_t>(it - columns.begin());
    }
    std::vector<double> values(const std::string& name) const {
        const std::size_t k = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[k]);
        return out;
    }
};

inline std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += format_double(row[i]);
        }
        out += "\n";
    }
    return out;
}

inline json to_json(const Table& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (double v : row) r.push_back(std::isfinite(v) ? json(v) : json(nullptr));
        rows.push_back(std::move(r));
    }
    return json{{"columns", t.columns}, {"rows", std::move(rows)}};
}

inline std::string render(const Table& t, OutputFormat f) {
    return f == OutputFormat::csv ? to_csv(t) : to_json(t).dump(1) + "\n";
}

inline json times_json(const ModelParams& model) {
    const ModelParams m = resolve(model);
    json j;
    j["n_qubits"] = m.n_qubits;
    j["nbar"] = m.nbar;
    j["lambda"] = m.coupling;
    if (m.nbar > 0.0) {
        const CharacteristicTimes t = characteristic_times(m);
        j["t_collapse"] = t.t_collapse;
        j["t_revival"] = t.t_revival;
        j["t_attractor"] = t.t_attractor;
        j["t_attractor_minus"] = t.t_attractor_minus;
    } else {
        j["t_collapse"] = std::sqrt(2.0) / m.coupling;
        j["t_revival"] = nullptr;
        j["t_attractor"] = nullptr;
        j["t_attractor_minus"] = nullptr;
    }
    return j;
}

inline json run_times(const ModelParams& model) {
    const ModelParams m = resolve(model);
    (void)characteristic_times(m);  // nbar = 0 has no revival time
    return times_json(m);
}

struct EvolveResult {
    Table table;
    json metadata;
};

inline EvolveResult run_evolve(const ScenarioConfig& c) {
    const ModelParams m = resolve(c.model);
    const BlockPropagator prop(m);
    const QubitPureState q0 = initial_qubit_state(c);
    const SymmetricState psi0 = symmetric_product(q0, coherent_field_amps(m.nbar, m.theta, m.fock_cutoff));
    const std::vector<double> grid = time_grid(c);
    std::vector<double> phys(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) phys[k] = grid[k] / m.coupling;

    const auto& o = c.observables;
    Table t;
    t.columns.push_back("t");
    if (o.p_initial) t.columns.push_back("p_initial");
    if (o.p_ground) t.columns.push_back("p_ground");
    if (o.p_attractor_plus) t.columns.push_back("p_attractor_plus");
    if (o.p_attractor_minus) t.columns.push_back("p_attractor_minus");
    if (o.entropy) t.columns.push_back("entropy");
    if (o.tangle) t.columns.push_back("tangle");
    if (o.leakage) t.columns.push_back("leakage");

    const QubitPureState ground = ground_state(m.n_qubits);
    const QubitPureState att_p = attractor_state(AttractorSign::plus, m.theta, m.n_qubits);
    const QubitPureState att_m = attractor_state(AttractorSign::minus, m.theta, m.n_qubits);

    t.rows.resize(grid.size());
    std::vector<double> leak(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) {
        const SymmetricState psi = evolve(prop, psi0, phys[k]);
        const QubitDensityMatrix rho = reduce_qubits(psi);
        leak[k] = leakage(psi);
        auto& row = t.rows[k];
        row.push_back(grid[k]);
        if (o.p_initial) row.push_back(state_probability(rho, q0));
        if (o.p_ground) row.push_back(state_probability(rho, ground));
        if (o.p_attractor_plus) row.push_back(state_probability(rho, att_p));
        if (o.p_attractor_minus) row.push_back(state_probability(rho, att_m));
        if (o.entropy) row.push_back(entropy(rho));
        if (o.tangle) row.push_back(mixed_tangle(symmetric_to_two_qubit(rho)));
        if (o.leakage) row.push_back(leak[k]);
    });
    const double max_leak = *std::max_element(leak.begin(), leak.end());
    if (max_leak >= kLeakageTolerance)
        throw CutoffTooSmall("evolve: state reaches the Fock cutoff n_max = " + std::to_string(m.fock_cutoff), max_leak);

    json meta;
    json cfg = json::object();
    for (const auto& [k, v] : to_key_values(c)) cfg[k] = v;
    meta["config"] = cfg;
    json derived = times_json(m);
    derived["fock_cutoff"] = m.fock_cutoff;
    derived["max_leakage"] = max_leak;
    if (m.nbar > 0.0) {
        const double tr = characteristic_times(m).t_revival * m.coupling;
        derived["time_start_over_t_r"] = c.t_start / tr;
        derived["time_stop_over_t_r"] = c.t_stop / tr;
    }
    meta["derived"] = derived;
    meta["columns"] = t.columns;
    return {std::move(t), std::move(meta)};
}

// "<number>", "<symbol>", "<number>*<symbol>" or "<symbol>/<number>" with symbols
// t_c, t_r, t_star, t_minus; result in lambda*t units.
inline double parse_time_expression(const std::string& text, const ModelParams& model) {
    const std::string s = detail::trim(text);
    auto symbol_value = [&](const std::string& sym) -> std::optional<double> {
        if (sym != "t_c" && sym != "t_r" && sym != "t_star" && sym != "t_minus") return std::nullopt;
        const ModelParams m = resolve(model);
        const CharacteristicTimes t = characteristic_times(m);
        const double scale = m.coupling;
        if (sym == "t_c") return t.t_collapse * scale;
        if (sym == "t_r") return t.t_revival * scale;
        if (sym == "t_star") return t.t_attractor * scale;
        return t.t_attractor_minus * scale;
    };
    if (auto v = symbol_value(s)) return *v;
    if (auto star = s.find('*'); star != std::string::npos) {
        const double factor = detail::parse_real("--time", detail::trim(s.substr(0, star)));
        if (auto v = symbol_value(detail::trim(s.substr(star + 1)))) return factor * *v;
    } else if (auto slash = s.find('/'); slash != std::string::npos) {
        const double divisor = detail::parse_real("--time", detail::trim(s.substr(slash + 1)));
        if (auto v = symbol_value(detail::trim(s.substr(0, slash)))) {
            if (divisor == 0.0) throw ConfigError("--time: division by zero");
            return *v / divisor;
        }
    } else {
        return detail::parse_real("--time", s);
    }
    throw ConfigError("--time: cannot parse '" + text + "'");
}

enum class QKind { field, spin };

struct QfuncResult {
    Table table;
    json metadata;
    PhaseSpaceGrid grid;
};

inline QfuncResult run_qfunc(const ScenarioConfig& c, double lambda_t, QKind kind, int grid_points) {
    if (!std::isfinite(lambda_t)) throw ConfigError("--time: must be finite");
    if (grid_points < 2) throw ConfigError("--grid: must be >= 2");
    ModelParams m = resolve(c.model);
    // Field probes reach the grid corners, so the cutoff must cover 2 R^2.
    const double radius = default_field_radius(m.nbar);
    if (kind == QKind::field) m.fock_cutoff = std::max(m.fock_cutoff, static_cast<int>(std::ceil(2.0 * radius * radius)) + 1);
    const BlockPropagator prop(m);
    ScenarioConfig run = c;
    run.model = m;
    const SymmetricState psi = evolve(prop, initial_state(run), lambda_t / m.coupling);

    QfuncResult r;
    if (kind == QKind::field) {
        auto [re, im] = field_grid_axes(radius, grid_points);
        r.grid = field_q_function(psi, std::move(re), std::move(im), std::sqrt(m.nbar));
        r.table.columns = {"re_beta", "im_beta", "q"};
    } else {
        auto [polar, az] = spin_grid_axes(grid_points);
        r.grid = spin_q_function(reduce_qubits(psi), std::move(polar), std::move(az));
        r.table.columns = {"theta_s", "phi_s", "q_s"};
    }
    for (std::size_t i = 0; i < r.grid.axis0.size(); ++i)
        for (std::size_t j = 0; j < r.grid.axis1.size(); ++j)
            r.table.rows.push_back({r.grid.axis0[i], r.grid.axis1[j],
                                    r.grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});

    json lobes = json::array();
    for (const Lobe& l : superlevel_lobes(r.grid, 0.5))
        lobes.push_back({{"peak", l.peak}, {"centroid", {l.centroid0, l.centroid1}}, {"points", l.size}});
    json cfg = json::object();
    for (const auto& [k, v] : to_key_values(c)) cfg[k] = v;
    r.metadata = {{"config", cfg},
                  {"fock_cutoff", m.fock_cutoff},
                  {"kind", kind == QKind::field ? "field" : "spin"},
                  {"time", lambda_t},
                  {"grid", {r.grid.axis0.size(), r.grid.axis1.size()}},
                  {"integral", integrate(r.grid)},
                  {"lobes_at_half_max", lobes}};
    if (kind == QKind::field) r.metadata["radial_scale"] = std::sqrt(m.nbar);
    return r;
}

// Admissible-disc sample points: distinguished values of a first (centre, the two
// real points where the cat weight vanishes, the real and imaginary rim), then a
// sunflower spiral filling the disc.
inline std::vector<cplx> basin_samples(int n_qubits, int count) {
    const double r = basin_radius(n_qubits);
    const double product_point = std::pow(2.0, -0.5 * n_qubits);
    std::vector<cplx> anchors = {cplx(r), cplx(product_point), cplx(0.0), cplx(-product_point),
                                 cplx(-r), cplx(0.0, r)};
    std::vector<cplx> out;
    for (const cplx& a : anchors)
        if (static_cast<int>(out.size()) < count) out.push_back(a);
    const int rest = count - static_cast<int>(out.size());
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < rest; ++k) {
        const double rad = r * std::sqrt((k + 0.5) / rest);
        out.push_back(std::polar(rad, golden * k));
    }
    return out;
}

inline Table run_basin_scan(const ModelParams& model, int samples) {
    if (samples < 2) throw ConfigError("--samples: must be >= 2");
    const ModelParams m = resolve(model);
    const BlockPropagator prop(m);
    const double t_star = characteristic_times(m).t_attractor;
    const Vector field = coherent_field_amps(m.nbar, m.theta, m.fock_cutoff);
    const QubitPureState att = attractor_state(AttractorSign::plus, m.theta, m.n_qubits);
    const std::vector<cplx> as = basin_samples(m.n_qubits, samples);

    Table t;
    t.columns = {"a_re", "a_im"};
    if (m.n_qubits == 2) t.columns.push_back("tau");
    t.columns.push_back("p_attractor_plus");
    t.columns.push_back("entropy");
    t.rows.resize(as.size());
    parallel_for(as.size(), [&](std::size_t k) {
        const QubitPureState q = basin_state({as[k], m.n_qubits, m.theta});
        const SymmetricState psi = evolve(prop, symmetric_product(q, field), t_star);
        const QubitDensityMatrix rho = reduce_qubits(psi);
        auto& row = t.rows[k];
        row = {as[k].real(), as[k].imag()};
        if (m.n_qubits == 2) row.push_back(pure_tangle(q));
        row.push_back(state_probability(rho, att));
        row.push_back(entropy(rho));
    });
    return t;
}

} // namespace cavrevive::scenario
