#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "tumorcord/csv.hpp"
#include "tumorcord/diagnostics.hpp"
#include "tumorcord/errors.hpp"

#ifndef TUMORCORD_VERSION
#define TUMORCORD_VERSION "unknown"
#endif

namespace tumorcord::cli {

namespace fs = std::filesystem;

namespace {

/// Collects run metadata and writes manifest.txt plus a reusable config.ini.
class Manifest {
public:
    Manifest(std::string command, const RunConfig& cfg, fs::path dir)
        : command_(std::move(command)), cfg_(cfg), dir_(std::move(dir)) {
        cfg_.out_dir = dir_.string();
    }

    fs::path file(const std::string& name) {
        files_.push_back(name);
        return dir_ / name;
    }
    void note(std::string line) { notes_.push_back(std::move(line)); }
    void value(const std::string& key, const std::string& v) { values_.emplace_back(key, v); }

    void write(bool ok, const std::string& error = {}) const {
        std::ofstream out(dir_ / "manifest.txt");
        if (!out) throw IoError("cannot write " + (dir_ / "manifest.txt").string());
        out << "tool = tumorcord " << TUMORCORD_VERSION << "\n";
        out << "command = " << command_ << "\n";
        out << "status = " << (ok ? "OK" : "FAILED") << "\n";
        if (!ok) out << "error = " << error << "\n";
        for (const auto& [k, v] : values_) out << k << " = " << v << "\n";
        for (const auto& n : notes_) out << "warning = " << n << "\n";
        out << "files =";
        for (const auto& f : files_) out << " " << f;
        out << "\nconfig = config.ini\n\n";
        out << render_config(cfg_);

        std::ofstream ini(dir_ / "config.ini");
        if (!ini) throw IoError("cannot write " + (dir_ / "config.ini").string());
        ini << render_config(cfg_);
    }

private:
    std::string command_;
    RunConfig cfg_;
    fs::path dir_;
    std::vector<std::string> files_;
    std::vector<std::string> notes_;
    std::vector<std::pair<std::string, std::string>> values_;
};

fs::path output_dir(const RunConfig& cfg, const CommandOptions& opt) {
    fs::path dir = opt.out_dir.empty() ? fs::path(cfg.out_dir) : fs::path(opt.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kConfigError;
    if (dynamic_cast<const IoError*>(&e)) return kIoError;
    return kSolverError;
}

/// Runs body with the manifest; failures are recorded and mapped to exit codes.
template <class Body>
int guarded(const std::string& command, const RunConfig& cfg, const CommandOptions& opt, std::ostream& err,
            Body&& body) {
    fs::path dir;
    try {
        dir = output_dir(cfg, opt);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    }
    Manifest manifest(command, cfg, dir);
    try {
        body(manifest, dir);
        manifest.write(true);
        return kOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        try {
            manifest.write(false, e.what());
        } catch (const std::exception& io) {
            err << "error: " << io.what() << "\n";
            return kIoError;
        }
        return exit_code_for(e);
    }
}

std::string flag(bool b) { return b ? "1" : "0"; }
std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

void table_line(std::ostream& out, const std::string& name, const std::string& value) {
    out << "  " << std::left << std::setw(18) << name << value << "\n";
}

bool use_linear(const RunConfig& cfg) {
    return cfg.model.is_linear() && cfg.width.method != WidthMethod::General;
}

WidthSolution primary_width(const ModelParams& p, const RunConfig& cfg) {
    if (p.is_linear() && cfg.width.method != WidthMethod::General) return solve_width_linear(p);
    return solve_width_general(p, cfg.width.scan);
}

const std::vector<std::string> kWidthHeader{"method", "w0", "bracket_lo", "bracket_hi", "beta_w0",
                                            "admissible",    "nu", "xbar",  "iterations"};

std::vector<std::string> width_row(const std::string& method, const WidthSolution& s) {
    return {method,
            format_real(s.w0),
            format_real(s.bracket.first),
            format_real(s.bracket.second),
            format_real(s.beta_w0),
            flag(s.admissible),
            format_real(s.nu),
            opt_real(s.xbar),
            std::to_string(s.iterations)};
}

}  // namespace

int cmd_constants(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded("constants", cfg, opt, err, [&](Manifest& m, const fs::path&) {
        const ModelParams& p = cfg.model;
        const EpsilonOptimum best = optimize_epsilon(p);
        const DerivedConstants d = derived_constants(p);
        CsvWriter csv(m.file("constants.csv").string(),
                      {"eps_star", "beta_star", "epsilon", "beta1", "beta2", "beta", "GammaM", "LGamma",
                       "Lf_eps", "CP", "gM", "Lg", "bisection"});
        csv.row({best.eps_star, best.beta_star, d.epsilon, d.beta1, d.beta2, d.beta, d.GammaM, d.LGamma,
                 d.Lf_eps, d.CP, d.gM, d.Lg, best.bisection ? 1.0 : 0.0});
        out << "admissibility constants\n";
        table_line(out, "eps_star", format_short(best.eps_star));
        table_line(out, "epsilon", format_short(d.epsilon) + (p.epsilon ? " (configured)" : " (optimum)"));
        table_line(out, "beta1", format_short(d.beta1));
        table_line(out, "beta2", format_short(d.beta2));
        table_line(out, "beta", format_short(d.beta));
        table_line(out, "Gamma_M", format_short(d.GammaM));
        table_line(out, "Lf_eps", format_short(d.Lf_eps));
        table_line(out, "C_P", format_short(d.CP));
        if (!best.bisection) m.note("epsilon optimum from grid scan (beta1 and beta2 do not cross)");
    });
}

int cmd_stationary(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded("stationary", cfg, opt, err, [&](Manifest& m, const fs::path&) {
        const ModelParams& p = cfg.model;
        const double w = cfg.stationary.w ? *cfg.stationary.w : primary_width(p, cfg).w0;
        m.value("w", format_real(w));
        const Grid1D grid(cfg.stationary.n);
        const StationarySolution sol = fixed_point(w, p, grid, cfg.stationary.options);
        write_stationary_csv(m.file("stationary.csv").string(), sol);

        const DiagnosticsRecord rec = verify_stationary(sol, p);
        CsvWriter checks(m.file("checks.csv").string(), {"check", "pass", "observed", "bound", "margin"});
        for (const Check& c : rec.checks) {
            checks.text_row({c.name, flag(c.pass), format_real(c.observed), format_real(c.bound),
                             format_real(c.margin())});
        }
        CsvWriter summary(m.file("summary.csv").string(),
                          {"w", "beta_w", "admissible", "iterations", "last_update", "residual_phi",
                           "residual_c", "phi_max", "c_min"});
        const double phi_max = *std::max_element(sol.phi.begin(), sol.phi.end());
        const double c_min = *std::min_element(sol.c.begin(), sol.c.end());
        summary.row({sol.w, sol.beta_w, sol.admissible ? 1.0 : 0.0, static_cast<double>(sol.iterations),
                     sol.last_update, sol.residual_phi, sol.residual_c, phi_max, c_min});

        out << "stationary solution\n";
        table_line(out, "w", format_short(w));
        table_line(out, "beta w", format_short(sol.beta_w));
        table_line(out, "iterations", std::to_string(sol.iterations));
        table_line(out, "residual phi", format_short(sol.residual_phi));
        table_line(out, "residual c", format_short(sol.residual_c));
        table_line(out, "max phi", format_short(phi_max));
        table_line(out, "min c", format_short(c_min));
        for (const Check& c : rec.checks) {
            table_line(out, c.name, std::string(c.pass ? "pass" : "FAIL") + "  margin " + format_short(c.margin()));
            if (!c.pass) m.note("check " + c.name + " failed");
        }
        if (!rec.all_pass()) throw NumericalError("stationary solution failed verification");
    });
}

int cmd_width(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded("width", cfg, opt, err, [&](Manifest& m, const fs::path&) {
        const ModelParams& p = cfg.model;
        CsvWriter csv(m.file("width.csv").string(), kWidthHeader);
        std::optional<WidthSolution> primary;
        out << "steady width\n";
        auto report = [&](const std::string& method, const WidthSolution& s) {
            csv.text_row(width_row(method, s));
            table_line(out, method + " w0", format_short(s.w0));
            table_line(out, method + " beta w0",
                       format_short(s.beta_w0) + (s.admissible ? " (admissible)" : " (rejected)"));
        };
        if (use_linear(cfg)) {
            const WidthSolution lin = solve_width_linear(p);
            report("linear", lin);
            primary = lin;
        }
        if (cfg.width.method != WidthMethod::Linear) {
            const WidthSolution gen = solve_width_general(p, cfg.width.scan);
            report("general", gen);
            if (!primary) primary = gen;
        }
        const auto [lo, hi] = primary->bracket;
        table_line(out, "bracket", "[" + format_short(lo) + ", " + format_short(hi) + "]");
        table_line(out, "nu", format_short(primary->nu));
        table_line(out, "xbar", primary->xbar ? format_short(*primary->xbar) : "none");

        if (cfg.width.reconstruct_n > 0) {
            if (!primary->admissible) {
                m.note("w0 rejected (beta w0 >= 1); reconstruction skipped");
                return;
            }
            const Grid1D grid(cfg.width.reconstruct_n);
            const Reconstruction rec = reconstruct_and_errors(primary->w0, p, grid, cfg.stationary.options);
            write_reconstruction_csv(m.file("reconstruction.csv").string(), rec);
            table_line(out, "max |E_phi|", format_short(rec.max_abs_E_phi));
            table_line(out, "max |E_c|", format_short(rec.max_abs_E_c));
        }
    });
}

int cmd_evolve(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    EvolutionConfig ev = cfg.evolution.config;
    ev.params = cfg.model;
    if (opt.dry_run) {
        out << "config valid\n";
        table_line(out, "dt", format_real(stable_dt(ev)));
        table_line(out, "dt bound", format_real(growth_step_bound(ev.params)));
        table_line(out, "steps (approx)", std::to_string(static_cast<long>(std::ceil(ev.t_end / stable_dt(ev)))));
        return kOk;
    }
    return guarded("evolve", cfg, opt, err, [&](Manifest& m, const fs::path&) {
        m.value("dt", format_real(stable_dt(ev)));
        CsvWriter index(m.file("snapshots.csv").string(),
                        {"snapshot", "t", "phi_min", "phi_max", "c_min", "c_max", "components"});
        int k = 0;
        auto sink = [&](const Snapshot& s) {
            char tag[32];
            std::snprintf(tag, sizeof tag, "snap%03d", k);
            const std::string base(tag);
            write_field_csv(m.file(base + "_phi.csv").string(), s.phi, ev.grid, s.t);
            write_field_csv(m.file(base + "_c.csv").string(), s.c, ev.grid, s.t);
            write_field_csv(m.file(base + "_psi.csv").string(), s.psi, ev.grid, s.t);
            write_interface_csv(m.file(base + "_interface.csv").string(), s.interface);
            index.row({static_cast<double>(k), s.t, s.phi.min(), s.phi.max(), s.c.min(), s.c.max(),
                       static_cast<double>(count_inside_components(s.psi, ev.grid))});
            out << "snapshot t = " << format_short(s.t) << "  phi [" << format_short(s.phi.min()) << ", "
                << format_short(s.phi.max()) << "]  c [" << format_short(s.c.min()) << ", "
                << format_short(s.c.max()) << "]\n";
            ++k;
        };
        const RunResult res = run(ev, sink);
        for (const auto& w : res.warnings) m.note(w);
        m.value("steps", std::to_string(res.steps));
        m.value("rejections", std::to_string(res.rejections));
        CsvWriter summary(m.file("run.csv").string(),
                          {"t_end", "steps", "rejections", "phi_min", "phi_max", "c_min", "c_max"});
        summary.row({res.final_state.t, static_cast<double>(res.steps), static_cast<double>(res.rejections),
                     res.phi_min, res.phi_max, res.c_min, res.c_max});

        const CordMetrics metrics =
            measure(res.final_state, ev.grid, ev.params, cfg.evolution.window, ev.heaviside_width);
        const TheoryReport report = compare_to_theory(metrics, ev.params);
        report.write_csv(m.file("theory.csv").string());
        out << report.to_text();
    });
}

int cmd_sweep(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded("sweep", cfg, opt, err, [&](Manifest& m, const fs::path& dir) {
        const std::vector<ModelParams> points = sweep_points(cfg);
        struct Entry {
            std::optional<WidthSolution> sol;
            std::string error;
        };
        std::vector<Entry> entries(points.size());
        std::atomic<std::size_t> next{0};
        std::mutex io_error_mutex;
        std::string io_error;

        auto worker = [&] {
            for (std::size_t k = next++; k < points.size(); k = next++) {
                char tag[32];
                std::snprintf(tag, sizeof tag, "entry_%04zu", k);
                RunConfig sub = cfg;
                sub.model = points[k];
                sub.sweep = {};
                Manifest em("sweep-entry", sub, dir / tag);
                try {
                    std::error_code ec;
                    fs::create_directories(dir / tag, ec);
                    if (ec) throw IoError("cannot create " + (dir / tag).string());
                    entries[k].sol = primary_width(points[k], cfg);
                    write_width_summary_csv(em.file("width.csv").string(), *entries[k].sol);
                    em.write(true);
                } catch (const IoError& e) {
                    std::lock_guard lock(io_error_mutex);
                    if (io_error.empty()) io_error = e.what();
                    entries[k].error = e.what();
                } catch (const std::exception& e) {
                    entries[k].error = e.what();
                    entries[k].sol.reset();
                    try {
                        em.write(false, e.what());
                    } catch (const std::exception&) {
                    }
                }
            }
        };
        const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(points.size())));
        std::vector<std::thread> pool;
        for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        CsvWriter csv(m.file("sweep.csv").string(),
                      {"entry", "mu", "phi0", "gamma", "c0", "alpha", "w0", "beta_w0", "admissible", "nu", "xbar",
                       "status"});
        int failures = 0;
        out << "width sweep, " << points.size() << " entries\n";
        for (std::size_t k = 0; k < points.size(); ++k) {
            const ModelParams& p = points[k];
            std::vector<std::string> row{std::to_string(k),  format_real(p.mu), format_real(p.phi0),
                                         format_real(p.gamma), format_real(p.c0), format_real(p.alpha)};
            if (const auto& s = entries[k].sol) {
                for (auto v : {format_real(s->w0), format_real(s->beta_w0), flag(s->admissible), format_real(s->nu),
                               opt_real(s->xbar)}) {
                    row.push_back(v);
                }
                row.push_back("OK");
                out << "  " << std::setw(4) << k << "  w0 " << format_short(s->w0) << "  beta w0 "
                    << format_short(s->beta_w0) << "\n";
            } else {
                row.insert(row.end(), {"", "", "", "", "", "FAILED"});
                ++failures;
                out << "  " << std::setw(4) << k << "  FAILED: " << entries[k].error << "\n";
                m.note("entry " + std::to_string(k) + ": " + entries[k].error);
            }
            csv.text_row(row);
        }
        if (!io_error.empty()) throw IoError(io_error);
        if (failures) throw NumericalError(std::to_string(failures) + " sweep entries failed");
    });
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady widths, stationary profiles and 2D growth of tumor cords", "tumorcord"};
    app.set_version_flag("--version", std::string("tumorcord ") + TUMORCORD_VERSION);
    app.fallthrough();
    CommandOptions opt;
    bool print_config = false;
    app.add_option("--config", opt.config_path, "Run configuration file");
    app.add_option("--out", opt.out_dir, "Output directory (overrides [output] dir)");
    app.add_option("--jobs", opt.jobs, "Concurrent sweep entries")->check(CLI::Range(1, 1024));
    app.add_flag("--print-config", print_config, "Print the reference configuration and exit");

    auto* constants = app.add_subcommand("constants", "Admissibility constants and the epsilon optimum");
    auto* stationary = app.add_subcommand("stationary", "1D stationary fixed-point solution");
    auto* width = app.add_subcommand("width", "Steady cord width and perturbative reconstruction");
    auto* evolve = app.add_subcommand("evolve", "2D time-dependent growth");
    evolve->add_flag("--dry-run", opt.dry_run, "Validate and print the derived time step");
    auto* sweep = app.add_subcommand("sweep", "Width solves over a parameter grid");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    if (!argv.empty()) argv.pop_back();
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? kOk : kConfigError;
    }

    if (print_config) {
        out << reference_config();
        return kOk;
    }
    if (app.get_subcommands().empty()) {
        err << "error: a subcommand is required (constants | stationary | width | evolve | sweep)\n";
        return kConfigError;
    }
    if (opt.config_path.empty()) {
        err << "error: --config is required\n";
        return kConfigError;
    }

    RunConfig cfg;
    try {
        cfg = load_config(opt.config_path);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    if (constants->parsed()) return cmd_constants(cfg, opt, out, err);
    if (stationary->parsed()) return cmd_stationary(cfg, opt, out, err);
    if (width->parsed()) return cmd_width(cfg, opt, out, err);
    if (evolve->parsed()) return cmd_evolve(cfg, opt, out, err);
    if (sweep->parsed()) return cmd_sweep(cfg, opt, out, err);
    return kConfigError;
}

int run_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    return run_main(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace tumorcord::cli
