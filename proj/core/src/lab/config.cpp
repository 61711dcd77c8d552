#include "shocklab/lab/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace shocklab::lab {

namespace {

void flatten(const YAML::Node& node, const std::string& prefix, std::map<std::string, std::string>& out) {
    if (node.IsMap()) {
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            flatten(kv.second, prefix.empty() ? key : prefix + "." + key, out);
        }
    } else if (node.IsSequence()) {
        std::string text = "[";
        for (std::size_t i = 0; i < node.size(); ++i) {
            if (!node[i].IsScalar()) throw ConfigError("nested sequences are not supported at '" + prefix + "'");
            text += (i ? ", " : "") + node[i].as<std::string>();
        }
        out[prefix] = text + "]";
    } else if (node.IsScalar()) {
        out[prefix] = node.as<std::string>();
    } else if (node.IsNull()) {
        throw ConfigError("key '" + prefix + "' has no value");
    }
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

} // namespace

const std::map<std::string, std::string>& Config::defaults() {
    static const std::map<std::string, std::string> d{
        {"domain.L", "20"},
        {"domain.n", "1024"},
        {"noise.kind", "gaussian"},
        {"noise.sigma", "0.5"},
        {"noise.radius", "1.0"},
        {"noise.seed", "0"},
        {"noise.amplitude", "0.5"},
        {"scheme.flux", "central"},
        {"scheme.diffusion", "explicit"},
        {"scheme.cfl", "0.5"},
        {"scheme.dt_max", "0.05"},
        {"time.horizon", "10"},
        {"time.output_every", "1"},
        {"tracker.method", "[ode, levelset, weakform]"},
        {"tracker.zeta", "0"},
        {"tracker.weak_radius", "1.0"},
        {"shock.a_B", "-1"},
        {"shock.a_T", "1"},
        {"shock.gamma", "0"},
        {"shock.b", "0"},
        {"shock.pair_wiggle", "0"},
        {"ensemble.M", "200"},
        {"ensemble.seeds", "10"},
        {"ensemble.burn_in", "10"},
        {"ensemble.delta_t", "5"},
        {"stationarity.z_crit", "3"},
        {"stationarity.floor", "0.003"},
        {"stationarity.pass_fraction", "0.95"},
        {"stationarity.control", "true"},
        {"stability.gamma_L", "-3"},
        {"stability.gamma_R", "3"},
        {"stability.step_centers", "[0, 1]"},
        {"stability.rise_tolerance", "1e-3"},
        {"stability.terminal_ratio", "0.2"},
        {"verify.gammas", "[-2, -0.5, 0, 1, 3]"},
        {"verify.b", "1"},
        {"verify.tol", "1e-6"},
        {"verify.order_levels", "[256, 512, 1024]"},
        {"verify.order_horizon", "2"},
        {"simulate.seeds", "1"},
        {"simulate.l1_tol", "1e-2"},
        {"simulate.refine", "false"},
        {"simulate.shrink", "1.5"},
        {"colehopf.horizon", "1"},
        {"colehopf.shrink", "1.5"},
        {"output.snapshots", "false"},
        {"run.workers", "0"},
    };
    return d;
}

Config Config::from_yaml(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("YAML parse error: ") + e.what());
    }
    Config c;
    if (root.IsNull()) return c;
    if (!root.IsMap()) throw ConfigError("config root must be a mapping");
    std::map<std::string, std::string> flat;
    flatten(root, "", flat);
    for (const auto& [k, v] : flat) c.set(k, v);
    return c;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_yaml(ss.str());
}

void Config::set(const std::string& key, const std::string& value) {
    if (!defaults().count(key)) throw ConfigError("unknown config key '" + key + "'");
    values_[key] = trim(value);
}

void Config::set_assignment(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + kv + "' is not of the form key=value");
    set(trim(kv.substr(0, eq)), kv.substr(eq + 1));
}

std::string Config::raw(const std::string& key) const {
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    if (auto it = defaults().find(key); it != defaults().end()) return it->second;
    throw ConfigError("unknown config key '" + key + "'");
}

std::string Config::str(const std::string& key) const { return raw(key); }

double Config::num(const std::string& key) const {
    const auto s = raw(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' expects a number, got '" + s + "'");
    }
}

std::int64_t Config::integer(const std::string& key) const {
    const auto s = raw(key);
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' expects an integer, got '" + s + "'");
    }
}

bool Config::flag(const std::string& key) const {
    const auto s = raw(key);
    if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
    if (s == "false" || s == "no" || s == "off" || s == "0") return false;
    throw ConfigError("key '" + key + "' expects a boolean, got '" + s + "'");
}

std::vector<std::string> Config::str_list(const std::string& key) const {
    std::string s = trim(raw(key));
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw ConfigError("key '" + key + "' has an unterminated list");
        s = s.substr(1, s.size() - 2);
    }
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty()) out.push_back(t);
    return out;
}

std::vector<double> Config::num_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : str_list(key)) {
        try {
            out.push_back(std::stod(s));
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' expects numbers, got '" + s + "'");
        }
    }
    return out;
}

std::string Config::canonical() const {
    std::string text;
    for (const auto& [k, _] : defaults()) text += k + "=" + raw(k) + "\n";
    return text;
}

std::string Config::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double kernel_width(const Config& c) {
    return c.str("noise.kind") == "bump" ? c.num("noise.radius") : c.num("noise.sigma");
}

RealizationConfig realization_config(const Config& c) {
    RealizationConfig r;
    r.L = c.num("domain.L");
    const auto n = c.integer("domain.n");
    if (n < 8) throw ConfigError("domain.n must be at least 8");
    r.n = static_cast<std::size_t>(n);
    const auto kind = c.str("noise.kind");
    if (kind == "gaussian") r.kernel = KernelKind::gaussian;
    else if (kind == "bump") r.kernel = KernelKind::bump;
    else throw ConfigError("noise.kind must be gaussian or bump");
    r.kernel_width = kernel_width(c);
    r.amplitude = c.num("noise.amplitude");
    r.scheme.flux = parse_flux(c.str("scheme.flux"));
    r.scheme.diffusion = parse_diffusion(c.str("scheme.diffusion"));
    r.scheme.cfl = c.num("scheme.cfl");
    if (!(r.scheme.cfl > 0.0 && r.scheme.cfl <= 1.0)) throw ConfigError("scheme.cfl must lie in (0, 1]");
    r.scheme.dt_max = c.num("scheme.dt_max");
    r.horizon = c.num("time.horizon");
    r.output_every = c.num("time.output_every");
    r.aB = c.num("shock.a_B");
    r.aT = c.num("shock.a_T");
    if (!(r.aB < r.aT)) throw ConfigError("shock.a_B < shock.a_T is required");
    r.pair_wiggle = c.num("shock.pair_wiggle");
    r.gamma = c.num("shock.gamma");
    r.b0 = c.num("shock.b");
    r.zeta = c.num("tracker.zeta");
    r.weak_radius = c.num("tracker.weak_radius");
    r.trackers.clear();
    for (const auto& m : c.str_list("tracker.method")) r.trackers.push_back(parse_tracker(m));
    if (r.trackers.empty()) throw ConfigError("tracker.method lists no tracker");
    return r;
}

} // namespace shocklab::lab
