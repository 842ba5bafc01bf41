#include "trotherm/config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace trotherm {

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in{std::string(s)};
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0') throw ConfigError({key + ": expected a number, got '" + v + "'"});
    return x;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
    Int x{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError({key + ": expected an integer, got '" + v + "'"});
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError({key + ": expected true or false, got '" + v + "'"});
}

// Applies `field = value` to a model; returns false for unknown field names.
bool set_model_field(ModelSpec& m, const std::string& key, const std::string& field, const std::string& v) {
    if (field == "kind") {
        try {
            m.kind = parse_model_kind(v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError({key + ": " + e.what()});
        }
    } else if (field == "J") {
        m.J = parse_double(key, v);
    } else if (field == "delta") {
        m.delta = parse_double(key, v);
    } else if (field == "h_stag") {
        m.h_stag = parse_double(key, v);
    } else if (field == "h_x") {
        m.h_x = parse_double(key, v);
    } else if (field == "h_z") {
        m.h_z = parse_double(key, v);
    } else {
        return false;
    }
    return true;
}

void write_model(std::ostream& out, const std::string& prefix, const ModelSpec& m) {
    out << prefix << "kind = " << to_string(m.kind) << '\n';
    out << prefix << "J = " << fmt_double(m.J) << '\n';
    out << prefix << "delta = " << fmt_double(m.delta) << '\n';
    out << prefix << "h_stag = " << fmt_double(m.h_stag) << '\n';
    out << prefix << "h_x = " << fmt_double(m.h_x) << '\n';
    out << prefix << "h_z = " << fmt_double(m.h_z) << '\n';
}

bool valid_label(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    });
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration: " + join(problems, "; ")), problems_(std::move(problems)) {}

std::string_view to_string(InitClass c) {
    switch (c) {
        case InitClass::Haar: return "Haar";
        case InitClass::RPPS: return "RPPS";
        case InitClass::TrotterRPPS: return "TrotterRPPS";
    }
    return "?";
}

InitClass parse_init_class(std::string_view name) {
    for (auto c : {InitClass::Haar, InitClass::RPPS, InitClass::TrotterRPPS})
        if (name == to_string(c)) return c;
    throw std::invalid_argument("unknown init class '" + std::string(name) + "'");
}

NRepsRule NRepsRule::parse(std::string_view text) {
    const std::string t = trim(text);
    if (t == "2L") return {};
    return {parse_int<int>("n_reps", t)};
}

bool RunConfig::operator==(const RunConfig& o) const {
    return system == o.system && samplers == o.samplers && beta_grid == o.beta_grid && M == o.M &&
           master_seed == o.master_seed && n_resamples == o.n_resamples && L_list == o.L_list &&
           output_path == o.output_path && threads == o.threads && full_scale == o.full_scale &&
           propagator.tolerance == o.propagator.tolerance && propagator.max_order == o.propagator.max_order &&
           propagator.substep_cap == o.propagator.substep_cap;
}

void RunConfig::validate() const {
    std::vector<std::string> p;
    if (system.J == 0.0) p.push_back("system.J: must be nonzero");
    if (samplers.empty()) p.push_back("sampler: at least one sampler is required");
    std::vector<std::string> seen;
    for (const auto& s : samplers) {
        const std::string k = "sampler." + s.label;
        if (!valid_label(s.label)) p.push_back(k + ": label must be [A-Za-z0-9_-]+");
        if (std::find(seen.begin(), seen.end(), s.label) != seen.end()) p.push_back(k + ": duplicate label");
        seen.push_back(s.label);
        if (s.init_class == InitClass::TrotterRPPS) {
            if (!s.trotter) p.push_back(k + ".trotter: required for init_class TrotterRPPS");
            else if (s.trotter->J == 0.0) p.push_back(k + ".trotter.J: must be nonzero");
            if (!(s.tau >= 0.0) || !std::isfinite(s.tau)) p.push_back(k + ".tau: must be >= 0");
            if (s.n_reps.explicit_n && *s.n_reps.explicit_n < 0) p.push_back(k + ".n_reps: must be >= 0");
        }
    }
    try {
        BetaGrid g(beta_grid);
    } catch (const std::invalid_argument& e) {
        p.push_back(std::string("beta_grid: ") + e.what());
    }
    if (M < 1) p.push_back("M: must be >= 1");
    if (n_resamples != 0 && n_resamples < 2) p.push_back("n_resamples: must be 0 (off) or >= 2");
    if (L_list.empty()) p.push_back("L_list: must not be empty");
    for (int L : L_list) {
        if (L < 2) p.push_back("L_list: every L must be >= 2, got " + std::to_string(L));
        else if (L > 26) p.push_back("L_list: L = " + std::to_string(L) + " exceeds the supported maximum 26");
        else if (L > kDeskScaleMaxL && !full_scale)
            p.push_back("L_list: L = " + std::to_string(L) + " needs full_scale = true");
    }
    if (threads && *threads < 1) p.push_back("threads: must be >= 1");
    try {
        propagator.validate();
    } catch (const std::invalid_argument& e) {
        p.push_back(std::string("propagator: ") + e.what());
    }
    if (!p.empty()) throw ConfigError(std::move(p));
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    cfg.samplers.clear();
    std::vector<std::string> problems;
    auto sampler_for = [&](const std::string& label) -> Sampler& {
        for (auto& s : cfg.samplers)
            if (s.label == label) return s;
        cfg.samplers.push_back(Sampler{label});
        return cfg.samplers.back();
    };

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        try {
            if (key.rfind("system.", 0) == 0) {
                if (!set_model_field(cfg.system, key, key.substr(7), value)) throw ConfigError({key + ": unknown key"});
            } else if (key.rfind("sampler.", 0) == 0) {
                const std::string rest = key.substr(8);
                const auto dot = rest.find('.');
                if (dot == std::string::npos) throw ConfigError({key + ": expected sampler.<label>.<field>"});
                Sampler& s = sampler_for(rest.substr(0, dot));
                const std::string field = rest.substr(dot + 1);
                if (field == "init_class") {
                    try {
                        s.init_class = parse_init_class(value);
                    } catch (const std::invalid_argument& e) {
                        throw ConfigError({key + ": " + e.what()});
                    }
                } else if (field == "tau") {
                    s.tau = parse_double(key, value);
                } else if (field == "n_reps") {
                    s.n_reps = value == "2L" ? NRepsRule{} : NRepsRule{parse_int<int>(key, value)};
                } else if (field.rfind("trotter.", 0) == 0) {
                    if (!s.trotter) s.trotter = ModelSpec{};
                    if (!set_model_field(*s.trotter, key, field.substr(8), value))
                        throw ConfigError({key + ": unknown key"});
                } else {
                    throw ConfigError({key + ": unknown key"});
                }
            } else if (key == "beta_grid") {
                cfg.beta_grid.clear();
                for (const auto& v : split_list(value)) cfg.beta_grid.push_back(parse_double(key, v));
            } else if (key == "M") {
                cfg.M = parse_int<std::size_t>(key, value);
            } else if (key == "master_seed") {
                cfg.master_seed = parse_int<std::uint64_t>(key, value);
            } else if (key == "n_resamples") {
                cfg.n_resamples = parse_int<int>(key, value);
            } else if (key == "L_list") {
                cfg.L_list.clear();
                for (const auto& v : split_list(value)) cfg.L_list.push_back(parse_int<int>(key, v));
            } else if (key == "output_path") {
                cfg.output_path = value;
            } else if (key == "threads") {
                if (value == "auto") cfg.threads.reset();
                else cfg.threads = parse_int<int>(key, value);
            } else if (key == "full_scale") {
                cfg.full_scale = parse_bool(key, value);
            } else if (key == "propagator.tolerance") {
                cfg.propagator.tolerance = parse_double(key, value);
            } else if (key == "propagator.max_order") {
                cfg.propagator.max_order = parse_int<int>(key, value);
            } else if (key == "propagator.substep_cap") {
                cfg.propagator.substep_cap = parse_double(key, value);
            } else {
                throw ConfigError({key + ": unknown key"});
            }
        } catch (const ConfigError& e) {
            problems.insert(problems.end(), e.problems().begin(), e.problems().end());
        }
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_config_text(const RunConfig& cfg) {
    std::ostringstream out;
    write_model(out, "system.", cfg.system);
    for (const auto& s : cfg.samplers) {
        const std::string p = "sampler." + s.label + ".";
        out << p << "init_class = " << to_string(s.init_class) << '\n';
        out << p << "tau = " << fmt_double(s.tau) << '\n';
        out << p << "n_reps = " << s.n_reps.str() << '\n';
        if (s.trotter) write_model(out, p + "trotter.", *s.trotter);
    }
    std::vector<std::string> betas, Ls;
    for (double b : cfg.beta_grid) betas.push_back(fmt_double(b));
    for (int L : cfg.L_list) Ls.push_back(std::to_string(L));
    out << "beta_grid = " << join(betas, ", ") << '\n';
    out << "M = " << cfg.M << '\n';
    out << "master_seed = " << cfg.master_seed << '\n';
    out << "n_resamples = " << cfg.n_resamples << '\n';
    out << "L_list = " << join(Ls, ", ") << '\n';
    out << "output_path = " << cfg.output_path << '\n';
    out << "threads = " << (cfg.threads ? std::to_string(*cfg.threads) : "auto") << '\n';
    out << "full_scale = " << (cfg.full_scale ? "true" : "false") << '\n';
    out << "propagator.tolerance = " << fmt_double(cfg.propagator.tolerance) << '\n';
    out << "propagator.max_order = " << cfg.propagator.max_order << '\n';
    out << "propagator.substep_cap = " << fmt_double(cfg.propagator.substep_cap) << '\n';
    return out.str();
}

namespace {

nlohmann::json model_json(const ModelSpec& m) {
    return {{"kind", std::string(to_string(m.kind))}, {"J", m.J},     {"delta", m.delta},
            {"h_stag", m.h_stag},                     {"h_x", m.h_x}, {"h_z", m.h_z}};
}

ModelSpec model_from_json(const nlohmann::json& j) {
    ModelSpec m;
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    m.J = j.at("J").get<double>();
    m.delta = j.at("delta").get<double>();
    m.h_stag = j.at("h_stag").get<double>();
    m.h_x = j.at("h_x").get<double>();
    m.h_z = j.at("h_z").get<double>();
    return m;
}

}  // namespace

std::string to_json(const RunConfig& cfg) {
    nlohmann::json samplers = nlohmann::json::array();
    for (const auto& s : cfg.samplers) {
        nlohmann::json js = {{"label", s.label},
                             {"init_class", std::string(to_string(s.init_class))},
                             {"tau", s.tau},
                             {"n_reps", s.n_reps.str()}};
        js["trotter"] = s.trotter ? model_json(*s.trotter) : nlohmann::json(nullptr);
        samplers.push_back(std::move(js));
    }
    nlohmann::json j = {
        {"system", model_json(cfg.system)},
        {"samplers", samplers},
        {"beta_grid", cfg.beta_grid},
        {"M", cfg.M},
        {"master_seed", cfg.master_seed},
        {"n_resamples", cfg.n_resamples},
        {"L_list", cfg.L_list},
        {"output_path", cfg.output_path},
        {"threads", cfg.threads ? nlohmann::json(*cfg.threads) : nlohmann::json(nullptr)},
        {"full_scale", cfg.full_scale},
        {"propagator",
         {{"tolerance", cfg.propagator.tolerance},
          {"max_order", cfg.propagator.max_order},
          {"substep_cap", cfg.propagator.substep_cap}}},
    };
    return j.dump(2) + "\n";
}

RunConfig config_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        RunConfig cfg;
        cfg.system = model_from_json(j.at("system"));
        cfg.samplers.clear();
        for (const auto& js : j.at("samplers")) {
            Sampler s;
            s.label = js.at("label").get<std::string>();
            s.init_class = parse_init_class(js.at("init_class").get<std::string>());
            s.tau = js.at("tau").get<double>();
            s.n_reps = NRepsRule::parse(js.at("n_reps").get<std::string>());
            if (!js.at("trotter").is_null()) s.trotter = model_from_json(js.at("trotter"));
            cfg.samplers.push_back(std::move(s));
        }
        cfg.beta_grid = j.at("beta_grid").get<std::vector<double>>();
        cfg.M = j.at("M").get<std::size_t>();
        cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
        cfg.n_resamples = j.at("n_resamples").get<int>();
        cfg.L_list = j.at("L_list").get<std::vector<int>>();
        cfg.output_path = j.at("output_path").get<std::string>();
        if (!j.at("threads").is_null()) cfg.threads = j.at("threads").get<int>();
        cfg.full_scale = j.at("full_scale").get<bool>();
        const auto& p = j.at("propagator");
        cfg.propagator.tolerance = p.at("tolerance").get<double>();
        cfg.propagator.max_order = p.at("max_order").get<int>();
        cfg.propagator.substep_cap = p.at("substep_cap").get<double>();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError({std::string("run.json: ") + e.what()});
    }
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4", "ising"}; }

namespace {

Sampler haar() { return {"haar", InitClass::Haar, std::nullopt, 10.0, {}}; }

Sampler trotter(std::string label, ModelSpec model) {
    return {std::move(label), InitClass::TrotterRPPS, model, 10.0, {}};
}

ModelSpec xxz(double h_stag) {
    return {.kind = ModelKind::XXZStaggered, .J = 1.0, .delta = 5.0, .h_stag = h_stag};
}

ModelSpec transverse_ising(double h_x) { return {.kind = ModelKind::TransverseIsing, .J = 1.0, .h_x = h_x}; }

ModelSpec mixed_ising(double h_x, double h_z) {
    return {.kind = ModelKind::MixedIsing, .J = 1.0, .h_x = h_x, .h_z = h_z};
}

std::vector<double> sweep_grid() {
    std::vector<double> g;
    for (int k = 1; k <= 30; ++k) g.push_back(k / 10.0);
    return g;
}

}  // namespace

RunConfig preset(std::string_view name) {
    RunConfig cfg;
    cfg.system = {.kind = ModelKind::Heisenberg, .J = 1.0};
    if (name == "fig1") {
        // Staggered-field strength is not fixed by the reference experiment; h = J.
        cfg.samplers = {haar(), trotter("trotter_xxz", xxz(0.0)), trotter("trotter_xxz_staggered", xxz(1.0))};
        cfg.beta_grid = {3.0};
    } else if (name == "fig2") {
        cfg.samplers = {haar(), trotter("trotter_transverse", transverse_ising(1.0)),
                        trotter("trotter_mixed", mixed_ising(1.0, 1.0))};
        cfg.beta_grid = {3.0};
    } else if (name == "fig3") {
        cfg.samplers = {trotter("trotter_transverse", transverse_ising(1.0)),
                        trotter("trotter_mixed", mixed_ising(1.0, 1.0))};
        cfg.beta_grid = sweep_grid();
        cfg.L_list = {12};
    } else if (name == "fig4") {
        cfg.samplers = {trotter("trotter_mixed", mixed_ising(1.0, 1.0))};
        cfg.beta_grid = sweep_grid();
        cfg.L_list = {10, 12};
    } else if (name == "ising") {
        // Mixed-field Ising system; Trotter fields chosen away from the system's (J, J).
        cfg.system = mixed_ising(1.0, 1.0);
        cfg.samplers = {haar(), trotter("trotter_transverse", transverse_ising(1.5)),
                        trotter("trotter_mixed", mixed_ising(1.5, 0.5))};
        cfg.beta_grid = {3.0};
    } else {
        throw ConfigError({"preset: unknown name '" + std::string(name) + "' (expected one of " +
                           join(preset_names(), ", ") + ")"});
    }
    cfg.output_path = "out/" + std::string(name);
    return cfg;
}

int resolve_threads(const RunConfig& cfg) {
    if (cfg.threads) return *cfg.threads;
    if (const char* env = std::getenv("TROTHERM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace trotherm
