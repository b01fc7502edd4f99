#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tumorcord/csv.hpp"
#include "tumorcord/errors.hpp"

namespace tumorcord::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"model", {"mu", "phi0", "gamma", "c0", "alpha", "growth_law", "gamma0", "gamma1", "c1", "epsilon"}},
        {"stationary",
         {"n", "w", "tol", "max_iters", "inner_tol", "inner_max_iters", "damping", "residual_tol",
          "enforce_admissibility"}},
        {"width", {"method", "w_seed", "w_max", "w_tol", "quad_tol", "reconstruct_n"}},
        {"evolution",
         {"nx", "nz", "Lx", "Lz", "dt", "dt_max", "dt_min", "t_end", "snapshot_times", "r0", "reinit_every",
          "heaviside_width", "initial_shape", "growth", "solver_tol", "window"}},
        {"sweep", {"mu", "phi0", "gamma", "c0", "alpha"}},
        {"output", {"dir"}},
    };
    return keys;
}

std::string trim(std::string s) {
    auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string unquote(std::string s) {
    s = trim(std::move(s));
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

double to_real(const std::string& field, const std::string& raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError(field, "expected a finite number, got '" + s + "'");
    }
    return v;
}

int to_int(const std::string& field, const std::string& raw) {
    const std::string s = trim(raw);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || v < 0 || v > 1'000'000'000) {
        throw ConfigError(field, "expected a nonnegative integer, got '" + s + "'");
    }
    return static_cast<int>(v);
}

bool to_bool(const std::string& field, const std::string& raw) {
    const std::string s = unquote(raw);
    if (s == "true") return true;
    if (s == "false") return false;
    throw ConfigError(field, "expected true or false, got '" + s + "'");
}

std::vector<double> to_list(const std::string& field, const std::string& raw) {
    std::string s = trim(raw);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw ConfigError(field, "unterminated list");
        s = s.substr(1, s.size() - 2);
    }
    std::vector<double> out;
    if (trim(s).empty()) return out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(to_real(field, item));
    return out;
}

bool is_auto(const std::string& raw) { return unquote(raw) == "auto"; }

std::string join(const std::vector<double>& values) {
    std::string s = "[";
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) s += ", ";
        s += format_real(values[k]);
    }
    return s + "]";
}

std::string shape_name(InitialShape s) {
    switch (s) {
        case InitialShape::QuarterDisk: return "quarter_disk";
        case InitialShape::Stripe: return "stripe";
        case InitialShape::Full: return "full";
    }
    return "quarter_disk";
}

std::string method_name(WidthMethod m) {
    switch (m) {
        case WidthMethod::Linear: return "linear";
        case WidthMethod::General: return "general";
        case WidthMethod::Both: return "both";
    }
    return "both";
}

template <class Fn>
void with_field(const std::string& section, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        if (e.field().find('.') != std::string::npos) throw;
        std::string msg = e.what();
        const std::string prefix = e.field() + ": ";
        if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
        throw ConfigError(section + "." + e.field(), msg);
    }
}

void apply_model(const pt::ptree& sec, ModelParams& m) {
    auto real = [&](const char* key, double& dst) {
        if (auto v = sec.get_optional<std::string>(key)) dst = to_real(std::string("model.") + key, *v);
    };
    real("mu", m.mu);
    real("phi0", m.phi0);
    real("gamma", m.gamma);
    real("c0", m.c0);
    real("alpha", m.alpha);
    TwoThresholdGrowth tt;
    auto tt_real = [&](const char* key, double& dst) {
        if (auto v = sec.get_optional<std::string>(key)) dst = to_real(std::string("model.") + key, *v);
    };
    tt_real("gamma0", tt.gamma0);
    tt_real("gamma1", tt.gamma1);
    tt_real("c1", tt.c1);
    const std::string law = unquote(sec.get<std::string>("growth_law", "linear"));
    if (law == "linear") {
        m.growth = LinearGrowth{};
    } else if (law == "two_threshold") {
        m.growth = tt;
    } else {
        throw ConfigError("model.growth_law", "expected linear or two_threshold, got '" + law + "'");
    }
    if (auto v = sec.get_optional<std::string>("epsilon")) {
        if (is_auto(*v)) {
            m.epsilon.reset();
        } else {
            m.epsilon = to_real("model.epsilon", *v);
        }
    }
}

void apply_stationary(const pt::ptree& sec, StationarySection& s) {
    auto field = [](const char* key) { return std::string("stationary.") + key; };
    if (auto v = sec.get_optional<std::string>("n")) s.n = to_int(field("n"), *v);
    if (auto v = sec.get_optional<std::string>("w")) {
        if (is_auto(*v)) {
            s.w.reset();
        } else {
            s.w = to_real(field("w"), *v);
        }
    }
    auto& o = s.options;
    if (auto v = sec.get_optional<std::string>("tol")) o.tol = to_real(field("tol"), *v);
    if (auto v = sec.get_optional<std::string>("max_iters")) o.max_iters = to_int(field("max_iters"), *v);
    if (auto v = sec.get_optional<std::string>("inner_tol")) o.inner_tol = to_real(field("inner_tol"), *v);
    if (auto v = sec.get_optional<std::string>("inner_max_iters")) {
        o.inner_max_iters = to_int(field("inner_max_iters"), *v);
    }
    if (auto v = sec.get_optional<std::string>("damping")) o.damping = to_real(field("damping"), *v);
    if (auto v = sec.get_optional<std::string>("residual_tol")) o.residual_tol = to_real(field("residual_tol"), *v);
    if (auto v = sec.get_optional<std::string>("enforce_admissibility")) {
        o.enforce_admissibility = to_bool(field("enforce_admissibility"), *v);
    }
}

void apply_width(const pt::ptree& sec, WidthSection& w) {
    auto field = [](const char* key) { return std::string("width.") + key; };
    if (auto v = sec.get_optional<std::string>("method")) {
        const std::string m = unquote(*v);
        if (m == "linear") {
            w.method = WidthMethod::Linear;
        } else if (m == "general") {
            w.method = WidthMethod::General;
        } else if (m == "both") {
            w.method = WidthMethod::Both;
        } else {
            throw ConfigError(field("method"), "expected linear, general or both, got '" + m + "'");
        }
    }
    if (auto v = sec.get_optional<std::string>("w_seed")) w.scan.w_seed = to_real(field("w_seed"), *v);
    if (auto v = sec.get_optional<std::string>("w_max")) w.scan.w_max = to_real(field("w_max"), *v);
    if (auto v = sec.get_optional<std::string>("w_tol")) w.scan.w_tol = to_real(field("w_tol"), *v);
    if (auto v = sec.get_optional<std::string>("quad_tol")) w.scan.quad_tol = to_real(field("quad_tol"), *v);
    if (auto v = sec.get_optional<std::string>("reconstruct_n")) {
        w.reconstruct_n = to_int(field("reconstruct_n"), *v);
    }
}

void apply_evolution(const pt::ptree& sec, EvolutionSection& e) {
    auto field = [](const char* key) { return std::string("evolution.") + key; };
    auto& c = e.config;
    auto real = [&](const char* key, double& dst) {
        if (auto v = sec.get_optional<std::string>(key)) dst = to_real(field(key), *v);
    };
    auto integer = [&](const char* key, int& dst) {
        if (auto v = sec.get_optional<std::string>(key)) dst = to_int(field(key), *v);
    };
    integer("nx", c.grid.nx);
    integer("nz", c.grid.nz);
    real("Lx", c.grid.Lx);
    real("Lz", c.grid.Lz);
    if (auto v = sec.get_optional<std::string>("dt")) c.dt = is_auto(*v) ? 0.0 : to_real(field("dt"), *v);
    real("dt_max", c.dt_max);
    real("dt_min", c.dt_min);
    real("t_end", c.t_end);
    if (auto v = sec.get_optional<std::string>("snapshot_times")) {
        c.snapshot_times = to_list(field("snapshot_times"), *v);
    }
    real("r0", c.r0);
    integer("reinit_every", c.reinit_every);
    real("heaviside_width", c.heaviside_width);
    if (auto v = sec.get_optional<std::string>("initial_shape")) {
        const std::string s = unquote(*v);
        if (s == "quarter_disk") {
            c.initial_shape = InitialShape::QuarterDisk;
        } else if (s == "stripe") {
            c.initial_shape = InitialShape::Stripe;
        } else if (s == "full") {
            c.initial_shape = InitialShape::Full;
        } else {
            throw ConfigError(field("initial_shape"), "expected quarter_disk, stripe or full, got '" + s + "'");
        }
    }
    if (auto v = sec.get_optional<std::string>("growth")) c.growth = to_bool(field("growth"), *v);
    real("solver_tol", c.solver_tol);
    if (auto v = sec.get_optional<std::string>("window")) {
        if (is_auto(*v)) {
            e.window.reset();
        } else {
            const auto w = to_list(field("window"), *v);
            if (w.size() != 2) throw ConfigError(field("window"), "expected auto or [z_lo, z_hi]");
            e.window = std::make_pair(w[0], w[1]);
        }
    }
}

void apply_sweep(const pt::ptree& sec, SweepSection& s) {
    auto list = [&](const char* key, std::vector<double>& dst) {
        if (auto v = sec.get_optional<std::string>(key)) dst = to_list(std::string("sweep.") + key, *v);
    };
    list("mu", s.mu);
    list("phi0", s.phi0);
    list("gamma", s.gamma);
    list("c0", s.c0);
    list("alpha", s.alpha);
}

void check_keys(const pt::ptree& tree) {
    const auto& keys = schema();
    for (const auto& [section, body] : tree) {
        const auto it = keys.find(section);
        if (it == keys.end()) {
            throw ConfigError(section, "unknown section [" + section + "]");
        }
        if (!body.data().empty()) throw ConfigError(section, "key outside of any section");
        for (const auto& [key, value] : body) {
            if (!it->second.count(key)) {
                throw ConfigError(section + "." + key, "unknown key");
            }
        }
    }
}

}  // namespace

void RunConfig::validate() const {
    with_field("model", [&] { model.validate(); });
    if (stationary.n < 3) throw ConfigError("stationary.n", "must be at least 3");
    if (stationary.w && !(*stationary.w > 0.0)) throw ConfigError("stationary.w", "must be positive");
    const auto& o = stationary.options;
    if (!(o.tol > 0.0)) throw ConfigError("stationary.tol", "must be positive");
    if (o.max_iters < 1) throw ConfigError("stationary.max_iters", "must be at least 1");
    if (!(o.inner_tol > 0.0)) throw ConfigError("stationary.inner_tol", "must be positive");
    if (o.inner_max_iters < 1) throw ConfigError("stationary.inner_max_iters", "must be at least 1");
    if (!(o.damping > 0.0 && o.damping <= 1.0)) throw ConfigError("stationary.damping", "must lie in (0, 1]");
    if (!(o.residual_tol > 0.0)) throw ConfigError("stationary.residual_tol", "must be positive");

    const auto& s = width.scan;
    if (!(s.w_seed > 0.0)) throw ConfigError("width.w_seed", "must be positive");
    if (!(s.w_max > s.w_seed)) throw ConfigError("width.w_max", "must exceed w_seed");
    if (!(s.w_tol > 0.0)) throw ConfigError("width.w_tol", "must be positive");
    if (!(s.quad_tol > 0.0)) throw ConfigError("width.quad_tol", "must be positive");
    if (width.reconstruct_n != 0 && width.reconstruct_n < 3) {
        throw ConfigError("width.reconstruct_n", "must be 0 or at least 3");
    }
    if (width.method == WidthMethod::Linear && !model.is_linear()) {
        throw ConfigError("width.method", "linear method requires growth_law = linear");
    }

    EvolutionConfig ev = evolution.config;
    ev.params = model;
    with_field("evolution", [&] { ev.validate(); });
    if (evolution.window) {
        const auto [lo, hi] = *evolution.window;
        if (!(lo >= 0.0 && hi > lo && hi <= ev.grid.Lz)) {
            throw ConfigError("evolution.window", "must satisfy 0 <= z_lo < z_hi <= Lz");
        }
    }

    for (const ModelParams& p : sweep_points(*this)) with_field("sweep", [&] { p.validate(); });
    if (out_dir.empty()) throw ConfigError("output.dir", "must not be empty");
}

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()), e.message());
    }
    check_keys(tree);

    RunConfig cfg;
    if (auto sec = tree.get_child_optional("model")) apply_model(*sec, cfg.model);
    if (auto sec = tree.get_child_optional("stationary")) apply_stationary(*sec, cfg.stationary);
    if (auto sec = tree.get_child_optional("width")) apply_width(*sec, cfg.width);
    if (auto sec = tree.get_child_optional("evolution")) apply_evolution(*sec, cfg.evolution);
    if (auto sec = tree.get_child_optional("sweep")) apply_sweep(*sec, cfg.sweep);
    if (auto sec = tree.get_child_optional("output")) {
        if (auto v = sec->get_optional<std::string>("dir")) cfg.out_dir = unquote(*v);
    }
    cfg.evolution.config.params = cfg.model;
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string render_config(const RunConfig& cfg) {
    std::ostringstream o;
    const auto& m = cfg.model;
    const TwoThresholdGrowth tt =
        m.is_linear() ? TwoThresholdGrowth{} : std::get<TwoThresholdGrowth>(m.growth);
    o << "; tumorcord run configuration\n\n";
    o << "[model]\n";
    o << "mu = " << format_real(m.mu) << "\n";
    o << "phi0 = " << format_real(m.phi0) << "\n";
    o << "gamma = " << format_real(m.gamma) << "\n";
    o << "c0 = " << format_real(m.c0) << "\n";
    o << "alpha = " << format_real(m.alpha) << "\n";
    o << "; linear | two_threshold\n";
    o << "growth_law = " << (m.is_linear() ? "linear" : "two_threshold") << "\n";
    o << "gamma0 = " << format_real(tt.gamma0) << "\n";
    o << "gamma1 = " << format_real(tt.gamma1) << "\n";
    o << "c1 = " << format_real(tt.c1) << "\n";
    o << "; auto picks the min-max optimum\n";
    o << "epsilon = " << (m.epsilon ? format_real(*m.epsilon) : "auto") << "\n\n";

    const auto& s = cfg.stationary;
    o << "[stationary]\n";
    o << "n = " << s.n << "\n";
    o << "; auto uses the root of the width condition\n";
    o << "w = " << (s.w ? format_real(*s.w) : "auto") << "\n";
    o << "tol = " << format_real(s.options.tol) << "\n";
    o << "max_iters = " << s.options.max_iters << "\n";
    o << "inner_tol = " << format_real(s.options.inner_tol) << "\n";
    o << "inner_max_iters = " << s.options.inner_max_iters << "\n";
    o << "damping = " << format_real(s.options.damping) << "\n";
    o << "residual_tol = " << format_real(s.options.residual_tol) << "\n";
    o << "enforce_admissibility = " << (s.options.enforce_admissibility ? "true" : "false") << "\n\n";

    const auto& w = cfg.width;
    o << "[width]\n";
    o << "; linear | general | both\n";
    o << "method = " << method_name(w.method) << "\n";
    o << "w_seed = " << format_real(w.scan.w_seed) << "\n";
    o << "w_max = " << format_real(w.scan.w_max) << "\n";
    o << "w_tol = " << format_real(w.scan.w_tol) << "\n";
    o << "quad_tol = " << format_real(w.scan.quad_tol) << "\n";
    o << "; 0 skips the perturbative reconstruction\n";
    o << "reconstruct_n = " << w.reconstruct_n << "\n\n";

    const auto& e = cfg.evolution.config;
    o << "[evolution]\n";
    o << "nx = " << e.grid.nx << "\n";
    o << "nz = " << e.grid.nz << "\n";
    o << "Lx = " << format_real(e.grid.Lx) << "\n";
    o << "Lz = " << format_real(e.grid.Lz) << "\n";
    o << "; auto = min(dt_max, bound / 4)\n";
    o << "dt = " << (e.dt > 0.0 ? format_real(e.dt) : "auto") << "\n";
    o << "dt_max = " << format_real(e.dt_max) << "\n";
    o << "dt_min = " << format_real(e.dt_min) << "\n";
    o << "t_end = " << format_real(e.t_end) << "\n";
    o << "snapshot_times = " << join(e.snapshot_times) << "\n";
    o << "r0 = " << format_real(e.r0) << "\n";
    o << "reinit_every = " << e.reinit_every << "\n";
    o << "heaviside_width = " << format_real(e.heaviside_width) << "\n";
    o << "; quarter_disk | stripe | full\n";
    o << "initial_shape = " << shape_name(e.initial_shape) << "\n";
    o << "growth = " << (e.growth ? "true" : "false") << "\n";
    o << "solver_tol = " << format_real(e.solver_tol) << "\n";
    o << "; auto = [0.1, 0.4] * head position\n";
    o << "window = "
      << (cfg.evolution.window ? join({cfg.evolution.window->first, cfg.evolution.window->second}) : "auto")
      << "\n\n";

    const auto& sw = cfg.sweep;
    o << "[sweep]\n";
    o << "; empty lists fall back to [model]\n";
    o << "mu = " << join(sw.mu) << "\n";
    o << "phi0 = " << join(sw.phi0) << "\n";
    o << "gamma = " << join(sw.gamma) << "\n";
    o << "c0 = " << join(sw.c0) << "\n";
    o << "alpha = " << join(sw.alpha) << "\n\n";

    o << "[output]\n";
    o << "dir = " << cfg.out_dir << "\n";
    return o.str();
}

std::string reference_config() {
    RunConfig cfg;
    cfg.sweep.c0 = {0.7, 0.8, 0.9};
    return render_config(cfg);
}

std::vector<ModelParams> sweep_points(const RunConfig& cfg) {
    const auto& s = cfg.sweep;
    const auto& m = cfg.model;
    auto axis = [](const std::vector<double>& v, double fallback) {
        return v.empty() ? std::vector<double>{fallback} : v;
    };
    const auto mus = axis(s.mu, m.mu);
    const auto phis = axis(s.phi0, m.phi0);
    const auto gammas = axis(s.gamma, m.gamma);
    const auto c0s = axis(s.c0, m.c0);
    const auto alphas = axis(s.alpha, m.alpha);
    std::vector<ModelParams> out;
    for (double mu : mus)
        for (double phi0 : phis)
            for (double gamma : gammas)
                for (double c0 : c0s)
                    for (double alpha : alphas) {
                        ModelParams p = m;
                        p.mu = mu;
                        p.phi0 = phi0;
                        p.gamma = gamma;
                        p.c0 = c0;
                        p.alpha = alpha;
                        if (auto* tt = std::get_if<TwoThresholdGrowth>(&p.growth)) {
                            if (!s.gamma.empty()) tt->gamma0 = tt->gamma1 = gamma;
                        }
                        out.push_back(p);
                    }
    return out;
}

}  // namespace tumorcord::cli
