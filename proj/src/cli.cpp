#include "stira/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>

#include "stira/analysis.hpp"
#include "stira/correlations.hpp"
#include "stira/errors.hpp"
#include "stira/static2b.hpp"

namespace stira::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    if (!cfg.contains("schema_version") || cfg["schema_version"] != 1)
        throw ConfigError("config: schema_version 1 required");
    return cfg;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ConfigError("config: unknown key '" + key + "' in " + where);
}

double finite_number(const json& v, const std::string& name) {
    if (!v.is_number()) throw ConfigError("config: " + name + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("config: " + name + " must be finite");
    return x;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

struct OutputDir {
    fs::path dir;
    json manifest;
    std::vector<std::string> outputs;

    OutputDir(const std::string& out, const std::string& command, const json& config) {
        dir = out;
        fs::create_directories(dir);
        manifest["schema_version"] = 1;
        manifest["tool"] = kToolVersion;
        manifest["command"] = command;
        manifest["config"] = config;
        manifest["warnings"] = json::object();
        manifest["stamps"] = json::object();
    }

    // identical command+config already finished here?
    bool already_done(bool force) const {
        if (force) return false;
        std::ifstream in(dir / "manifest.json");
        if (!in) return false;
        json old;
        try {
            in >> old;
        } catch (...) {
            return false;
        }
        if (old.value("command", "") != manifest["command"] || old["config"] != manifest["config"])
            return false;
        for (const auto& f : old.value("outputs", std::vector<std::string>{}))
            if (!fs::exists(dir / f)) return false;
        return true;
    }

    void add_output(const std::string& name, const std::string& text) {
        write_text(dir / name, text);
        outputs.push_back(name);
    }

    void finalize() {
        manifest["outputs"] = outputs;
        write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    }
};

Ramp::Kind parse_kind(const std::string& s) {
    if (s == "reference") return Ramp::Kind::reference;
    if (s == "linear") return Ramp::Kind::linear;
    if (s == "sta") return Ramp::Kind::sta;
    if (s == "sta-tg") return Ramp::Kind::sta_tg;
    throw ConfigError("config: unknown ramp kind '" + s + "'");
}

tdse::PropagatorConfig parse_propagator(const json& cfg) {
    tdse::PropagatorConfig pc;
    if (!cfg.contains("propagator")) return pc;
    const json& p = cfg["propagator"];
    reject_unknown(p, {"n_max", "dt", "scheme"}, "propagator");
    if (p.contains("n_max")) pc.n_max = p["n_max"].get<int>();
    if (p.contains("dt")) pc.dt = finite_number(p["dt"], "propagator.dt");
    if (p.contains("scheme")) {
        const std::string s = p["scheme"].get<std::string>();
        if (s == "implicit-midpoint")
            pc.scheme = tdse::PropagatorConfig::Scheme::implicit_midpoint;
        else if (s == "rk4")
            pc.scheme = tdse::PropagatorConfig::Scheme::explicit_rk4;
        else
            throw ConfigError("config: unknown scheme '" + s + "'");
    }
    if (pc.n_max < 32) throw ConfigError("config: propagator.n_max >= 32");
    if (!(pc.dt > 0.0)) throw ConfigError("config: propagator.dt > 0");
    return pc;
}

analysis::CorrelationGridSpec parse_grid(const json& cfg) {
    analysis::CorrelationGridSpec gs;
    if (!cfg.contains("grid")) return gs;
    const json& g = cfg["grid"];
    reject_unknown(g, {"extent", "points", "rel_points"}, "grid");
    if (g.contains("extent")) gs.extent = finite_number(g["extent"], "grid.extent");
    if (g.contains("points")) gs.points = g["points"].get<int>();
    if (g.contains("rel_points")) gs.rel_points = g["rel_points"].get<int>();
    return gs;
}

// ---- subcommands ----

int cmd_static_curve(const std::string& config_path, const std::string& out, bool force) {
    const json cfg = read_config(config_path);
    reject_unknown(cfg, {"schema_version", "g_samples"}, "static-curve config");
    if (!cfg.contains("g_samples") || !cfg["g_samples"].is_array() || cfg["g_samples"].empty())
        throw ConfigError("config: g_samples (non-empty array) required");
    std::vector<double> gs;
    for (const auto& v : cfg["g_samples"]) gs.push_back(finite_number(v, "g_samples[]"));

    OutputDir od(out, "static-curve", cfg);
    if (od.already_done(force)) {
        std::cout << "static-curve: up to date, skipping (use --force to rerun)\n";
        return kExitOk;
    }
    const auto curve = static2b::ground_energy_curve(gs);
    std::string csv = "g,E0\n";
    for (const auto& [g, e] : curve.samples) csv += fmt(g) + "," + fmt(e) + "\n";
    od.add_output("curve.csv", csv);
    od.finalize();
    return kExitOk;
}

int cmd_ramp(const std::string& config_path, const std::string& out, bool force) {
    const json cfg = read_config(config_path);
    reject_unknown(cfg,
                   {"schema_version", "kind", "g_i", "g_f", "t_f", "samples",
                    "emit_adiabatic_energy", "include_com", "tg_sign"},
                   "ramp config");
    const Ramp::Kind kind = parse_kind(cfg.value("kind", std::string("sta")));
    const double t_f = finite_number(cfg.at("t_f"), "t_f");
    if (!(t_f > 0.0)) throw ConfigError("config: t_f > 0 required");
    const double g_i = cfg.contains("g_i") ? finite_number(cfg["g_i"], "g_i") : 0.0;
    const double g_f = cfg.contains("g_f") ? finite_number(cfg["g_f"], "g_f") : 0.0;
    const int samples = cfg.value("samples", 2048);
    if (samples < 8) throw ConfigError("config: samples >= 8");
    sta::TargetSign sign = sta::TargetSign::positive;
    if (cfg.contains("tg_sign")) {
        const std::string s = cfg["tg_sign"].get<std::string>();
        if (s == "positive") sign = sta::TargetSign::positive;
        else if (s == "flipped") sign = sta::TargetSign::flipped;
        else throw ConfigError("config: tg_sign must be 'positive' or 'flipped'");
    }

    OutputDir od(out, "ramp", cfg);
    if (od.already_done(force)) {
        std::cout << "ramp: up to date, skipping (use --force to rerun)\n";
        return kExitOk;
    }

    Ramp ramp;
    bool open_end = false;
    switch (kind) {
        case Ramp::Kind::reference: ramp = make_reference_ramp(g_f, t_f); break;
        case Ramp::Kind::linear: ramp = make_linear_ramp(g_i, g_f, t_f); break;
        case Ramp::Kind::sta: ramp = sta::make_sta_ramp(g_i, g_f, t_f, samples); break;
        case Ramp::Kind::sta_tg:
            ramp = sta::make_sta_tg_ramp(t_f, sign, samples);
            open_end = true;  // pulse diverges at t_f; final node dropped
            break;
        default: throw ConfigError("config: unsupported ramp kind");
    }

    std::string csv = "t,g\n";
    const int last = open_end ? samples - 1 : samples;
    for (int i = 0; i <= last; ++i) {
        const double t = t_f * i / samples;
        csv += fmt(t) + "," + fmt(ramp.g(t)) + "\n";
    }
    od.add_output("ramp.csv", csv);
    if (ramp.negative_g()) od.manifest["warnings"]["negative_g"] = true;
    if (open_end) od.manifest["warnings"]["endpoint_divergent"] = true;
    od.manifest["stamps"]["min_g"] = ramp.min_g.value_or(0.0);

    if (cfg.value("emit_adiabatic_energy", false)) {
        const bool com = cfg.value("include_com", false);
        std::string ecsv = "t,E_AD\n";
        for (int i = 0; i <= last; ++i) {
            const double t = t_f * i / samples;
            ecsv += fmt(t) + "," + fmt(static2b::adiabatic_energy(ramp, t, com)) + "\n";
        }
        od.add_output("adiabatic_energy.csv", ecsv);
    }
    od.finalize();
    return kExitOk;
}

analysis::RunConfig parse_run_config(const json& cfg) {
    analysis::RunConfig rc;
    rc.kind = parse_kind(cfg.value("kind", std::string("sta")));
    rc.g_i = cfg.contains("g_i") ? finite_number(cfg["g_i"], "g_i") : 0.0;
    rc.g_f = finite_number(cfg.at("g_f"), "g_f");
    rc.t_f = finite_number(cfg.at("t_f"), "t_f");
    if (!(rc.t_f > 0.0)) throw ConfigError("config: t_f > 0 required");
    rc.propagator = parse_propagator(cfg);
    rc.grid = parse_grid(cfg);
    rc.with_correlations = cfg.value("with_correlations", true);
    rc.with_convergence_stamp = cfg.value("convergence_stamp", true);
    return rc;
}

void stamp_result(json& stamps, const analysis::RunResult& r) {
    if (!r.stamp) return;
    stamps["E_tf_raw"] = r.stamp->e_tf_raw;
    stamps["S_T_exact_evaluator"] = r.stamp->s_target_exact;
    if (r.stamp->n_max_check > 0) {
        stamps["n_max_check"] = r.stamp->n_max_check;
        stamps["W_irr_check"] = r.stamp->w_irr_check;
        stamps["S_tf_check"] = r.stamp->s_tf_check;
    }
}

int cmd_evolve(const std::string& config_path, const std::string& out, bool force) {
    const json cfg = read_config(config_path);
    reject_unknown(cfg,
                   {"schema_version", "kind", "g_i", "g_f", "t_f", "propagator", "grid",
                    "with_correlations", "convergence_stamp", "dump_rspdm"},
                   "evolve config");
    analysis::RunConfig rc = parse_run_config(cfg);

    OutputDir od(out, "evolve", cfg);
    if (od.already_done(force)) {
        std::cout << "evolve: up to date, skipping (use --force to rerun)\n";
        return kExitOk;
    }
    const analysis::RunResult r = analysis::run_single(rc);
    od.add_output("results.csv",
                  std::string(analysis::kResultsHeader) + "\n" + analysis::format_result_row(r) + "\n");
    if (r.negative_g) od.manifest["warnings"]["negative_g"] = true;
    stamp_result(od.manifest["stamps"], r);

    if (cfg.value("dump_rspdm", false)) {
        // rebuild the final-state reduced matrix for the dump
        tdse::PropagatorConfig pc = rc.propagator;
        pc.dt = std::min(pc.dt, rc.t_f / 16.0);
        const auto basis = tdse::SpectralBasis::build(pc.n_max);
        const auto traj = tdse::propagate(rc.build_ramp(), pc);
        const auto grid = correlations::Grid1d::uniform(rc.grid.extent, rc.grid.points);
        const double rel_extent = std::sqrt(2.0) * rc.grid.extent + 0.5;
        std::vector<double> rx(rc.grid.rel_points);
        for (int i = 0; i < rc.grid.rel_points; ++i)
            rx[i] = -rel_extent + 2.0 * rel_extent * i / (rc.grid.rel_points - 1);
        const Eigen::VectorXcd vals = tdse::to_position(traj.final_state, basis, rx);
        std::vector<std::complex<double>> rel(vals.data(), vals.data() + vals.size());
        const auto rho = correlations::rspdm(correlations::assemble_two_body(rx, rel, grid));
        std::string mcsv;
        for (int i = 0; i < rho.rho.rows(); ++i) {
            for (int j = 0; j < rho.rho.cols(); ++j) {
                if (j) mcsv += ',';
                mcsv += fmt(rho.rho(i, j).real());
            }
            mcsv += '\n';
        }
        od.add_output("rspdm.csv", mcsv);
        const Eigen::VectorXd lam = correlations::schmidt_spectrum(rho);
        std::string lcsv = "n,lambda\n";
        for (int i = 0; i < lam.size(); ++i) lcsv += std::to_string(i) + "," + fmt(lam(i)) + "\n";
        od.add_output("lambda.csv", lcsv);
    }
    od.finalize();
    std::cout << analysis::kResultsHeader << "\n" << analysis::format_result_row(r) << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out, bool force, int jobs) {
    const json cfg = read_config(config_path);
    reject_unknown(cfg,
                   {"schema_version", "axis", "values", "kinds", "g_i", "g_f", "t_f", "propagator",
                    "grid", "with_correlations", "convergence_stamp"},
                   "sweep config");
    const std::string axis = cfg.value("axis", std::string("t_f"));
    if (axis != "t_f" && axis != "g_f") throw ConfigError("config: axis must be 't_f' or 'g_f'");
    if (!cfg.contains("values") || !cfg["values"].is_array() || cfg["values"].empty())
        throw ConfigError("config: values (non-empty array) required");
    if (!cfg.contains("kinds") || !cfg["kinds"].is_array() || cfg["kinds"].empty())
        throw ConfigError("config: kinds (non-empty array) required");

    std::vector<analysis::RunConfig> rcs;
    for (const auto& kind_json : cfg["kinds"]) {
        const Ramp::Kind kind = parse_kind(kind_json.get<std::string>());
        for (const auto& v : cfg["values"]) {
            analysis::RunConfig rc;
            rc.kind = kind;
            rc.g_i = cfg.contains("g_i") ? finite_number(cfg["g_i"], "g_i") : 0.0;
            rc.g_f = cfg.contains("g_f") ? finite_number(cfg["g_f"], "g_f") : 20.0;
            rc.t_f = cfg.contains("t_f") ? finite_number(cfg["t_f"], "t_f") : 10.0;
            const double value = finite_number(v, "values[]");
            (axis == "t_f" ? rc.t_f : rc.g_f) = value;
            if (!(rc.t_f > 0.0)) throw ConfigError("config: t_f > 0 required");
            rc.propagator = parse_propagator(cfg);
            rc.grid = parse_grid(cfg);
            rc.with_correlations = cfg.value("with_correlations", true);
            rc.with_convergence_stamp = cfg.value("convergence_stamp", false);
            rcs.push_back(rc);
        }
    }

    OutputDir od(out, "sweep", cfg);
    if (od.already_done(force)) {
        std::cout << "sweep: up to date, skipping (use --force to rerun)\n";
        return kExitOk;
    }

    // resume: reuse rows from a previous partial results file for this config
    std::vector<analysis::RunResult> cached;
    const fs::path results_path = od.dir / "results.csv";
    if (!force && fs::exists(results_path) && fs::exists(od.dir / "manifest.json")) {
        std::ifstream min(od.dir / "manifest.json");
        json old;
        try {
            min >> old;
            if (old["config"] == cfg) {
                std::ifstream rin(results_path);
                std::stringstream ss;
                ss << rin.rdbuf();
                cached = analysis::parse_results_csv(ss.str());
            }
        } catch (...) {
        }
    }
    const auto find_cached = [&](const analysis::RunConfig& rc) -> const analysis::RunResult* {
        for (const auto& c : cached)
            if (c.kind == to_string(rc.kind) && c.g_i == rc.g_i && c.g_f == rc.g_f && c.t_f == rc.t_f)
                return &c;
        return nullptr;
    };

    std::vector<analysis::RunConfig> todo;
    std::vector<int> todo_index;
    std::vector<analysis::RunResult> rows(rcs.size());
    for (size_t i = 0; i < rcs.size(); ++i) {
        if (const auto* c = find_cached(rcs[i])) {
            rows[i] = *c;
        } else {
            todo.push_back(rcs[i]);
            todo_index.push_back(static_cast<int>(i));
        }
    }
    const auto fresh = analysis::sweep(todo, jobs);
    for (size_t k = 0; k < fresh.size(); ++k) rows[static_cast<size_t>(todo_index[k])] = fresh[k];

    std::string csv = std::string(analysis::kResultsHeader) + "\n";
    json row_errors = json::object();
    bool any_negative = false;
    for (const auto& r : rows) {
        if (r.error) {
            row_errors[r.kind + ",t_f=" + fmt(r.t_f) + ",g_f=" + fmt(r.g_f)] = *r.error;
            continue;
        }
        any_negative = any_negative || r.negative_g;
        csv += analysis::format_result_row(r) + "\n";
    }
    od.add_output("results.csv", csv);
    if (any_negative) od.manifest["warnings"]["negative_g"] = true;
    if (!row_errors.empty()) od.manifest["warnings"]["row_errors"] = row_errors;
    od.finalize();
    std::cout << "sweep: " << rows.size() - row_errors.size() << "/" << rows.size() << " rows\n";
    return row_errors.empty() ? kExitOk : kExitPropagation;
}

int cmd_fit_alpha(const std::string& results_path, const std::string& out, const std::string& kind,
                  double window_lo, double window_hi, bool force) {
    std::ifstream in(results_path);
    if (!in) throw ConfigError("cannot open results file: " + results_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto rows = analysis::parse_results_csv(ss.str());
    std::vector<std::pair<double, double>> points;
    for (const auto& r : rows)
        if (kind.empty() || r.kind == kind) points.emplace_back(r.t_f, r.w_irr);

    json cfg;
    cfg["schema_version"] = 1;
    cfg["results"] = results_path;
    cfg["kind"] = kind;
    cfg["window"] = {window_lo, window_hi};
    OutputDir od(out, "fit-alpha", cfg);
    if (od.already_done(force)) {
        std::cout << "fit-alpha: up to date, skipping (use --force to rerun)\n";
        return kExitOk;
    }
    const auto fit = analysis::fit_decay_rate(points, window_lo, window_hi);
    json j;
    j["alpha"] = fit.alpha;
    j["intercept"] = fit.intercept;
    j["r2"] = fit.r2;
    j["window"] = {fit.window_lo, fit.window_hi};
    j["points_used"] = fit.points_used;
    j["points_excluded"] = fit.points_excluded;
    od.add_output("fit.json", j.dump(2) + "\n");
    od.finalize();
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"two-boson interaction-ramp toolkit"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", results_path, kind_filter;
    bool force = false;
    int jobs = 1;
    double window_lo = 1.5, window_hi = 8.0;

    const auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--force", force, "rerun even if the manifest matches");
    };

    auto* sc = app.add_subcommand("static-curve", "ground-energy curve E0(g)");
    add_common(sc, true);
    auto* rp = app.add_subcommand("ramp", "emit an interaction schedule");
    add_common(rp, true);
    auto* ev = app.add_subcommand("evolve", "propagate one ramp and report figures of merit");
    add_common(ev, true);
    auto* sw = app.add_subcommand("sweep", "run a family of ramps");
    add_common(sw, true);
    sw->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    auto* fa = app.add_subcommand("fit-alpha", "exponential decay-rate fit of W_irr(t_f)");
    fa->add_option("--results", results_path, "results CSV from sweep")->required();
    fa->add_option("--kind", kind_filter, "restrict to one ramp kind");
    fa->add_option("--window-lo", window_lo, "fit window lower edge");
    fa->add_option("--window-hi", window_hi, "fit window upper edge");
    add_common(fa, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sc->parsed()) return cmd_static_curve(config_path, out_dir, force);
        if (rp->parsed()) return cmd_ramp(config_path, out_dir, force);
        if (ev->parsed()) return cmd_evolve(config_path, out_dir, force);
        if (sw->parsed()) return cmd_sweep(config_path, out_dir, force, jobs);
        if (fa->parsed())
            return cmd_fit_alpha(results_path, out_dir, kind_filter, window_lo, window_hi, force);
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SingularDenominatorError& e) {
        std::cerr << "pulse singularity: " << e.what() << "\n";
        return kExitSingular;
    } catch (const SolverError& e) {
        std::cerr << "static solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const PropagationError& e) {
        std::cerr << "propagation error: " << e.what() << "\n";
        return kExitPropagation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace stira::cli
