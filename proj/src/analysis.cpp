#include "stira/analysis.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>

#include "stira/correlations.hpp"
#include "stira/errors.hpp"
#include "stira/static2b.hpp"

namespace stira::analysis {

double irreversible_work(double e_tf, double e_target) {
    return e_tf - e_target;
}

Ramp RunConfig::build_ramp() const {
    switch (kind) {
        case Ramp::Kind::reference: return make_reference_ramp(g_f, t_f);
        case Ramp::Kind::linear: return make_linear_ramp(g_i, g_f, t_f);
        case Ramp::Kind::sta: return sta::make_sta_ramp(g_i, g_f, t_f);
        case Ramp::Kind::sta_tg: return sta::make_sta_tg_ramp(t_f, tg_sign);
        case Ramp::Kind::tabulated:
            throw ConfigError("run: tabulated ramps must be supplied explicitly");
    }
    throw ConfigError("run: unknown ramp kind");
}

namespace {

struct CorrelationOutputs {
    double s_tf, s_target_basis, s_target_exact, t_d;
};

// Relative-coordinate samples -> two-body -> reduced matrix -> S, T_D.
// The dynamical state and the target are pushed through the identical
// pipeline; the target additionally in its truncation-free exact form for
// the convergence stamp.
CorrelationOutputs correlation_pipeline(const tdse::WaveState& final_state,
                                        const tdse::SpectralBasis& basis, double g_f,
                                        const CorrelationGridSpec& spec) {
    const auto grid = correlations::Grid1d::uniform(spec.extent, spec.points);
    const double rel_extent = std::sqrt(2.0) * spec.extent + 0.5;
    std::vector<double> rx(spec.rel_points);
    for (int i = 0; i < spec.rel_points; ++i)
        rx[i] = -rel_extent + 2.0 * rel_extent * i / (spec.rel_points - 1);

    const Eigen::VectorXcd dyn = tdse::to_position(final_state, basis, rx);
    std::vector<std::complex<double>> dyn_vals(dyn.data(), dyn.data() + dyn.size());
    const auto rho_dyn = correlations::rspdm(correlations::assemble_two_body(rx, dyn_vals, grid));

    // same-basis target: ground of the truncated Hamiltonian
    tdse::WaveState target_state;
    target_state.c = tdse::static_diagonalize(g_f, basis).vectors.col(0).cast<std::complex<double>>();
    const Eigen::VectorXcd tgt = tdse::to_position(target_state, basis, rx);
    std::vector<std::complex<double>> tgt_vals(tgt.data(), tgt.data() + tgt.size());
    const auto rho_tgt = correlations::rspdm(correlations::assemble_two_body(rx, tgt_vals, grid));

    // exact-evaluator target (stamp only)
    const auto exact = std::isinf(g_f) ? static2b::RelativeEigenstate::strong_coupling_limit()
                                       : static2b::RelativeEigenstate::solve(g_f);
    std::vector<std::complex<double>> exact_vals(rx.size());
    for (size_t i = 0; i < rx.size(); ++i) exact_vals[i] = exact(rx[i]);
    const auto rho_exact = correlations::rspdm(correlations::assemble_two_body(rx, exact_vals, grid));

    CorrelationOutputs out;
    out.s_tf = correlations::entropy(rho_dyn);
    out.s_target_basis = correlations::entropy(rho_tgt);
    out.s_target_exact = correlations::entropy(rho_exact);
    out.t_d = correlations::trace_distance(rho_dyn, rho_tgt);
    return out;
}

RunResult run_at_basis(const RunConfig& config, const Ramp& ramp, int n_max) {
    tdse::PropagatorConfig pc = config.propagator;
    pc.n_max = n_max;
    pc.dt = std::min(pc.dt, config.t_f / 16.0);

    const tdse::SpectralBasis basis = tdse::SpectralBasis::build(n_max);
    const tdse::Trajectory traj = tdse::propagate(ramp, pc);

    const double g_f_eff = std::isinf(config.g_f) ? 1e3 : config.g_f;  // finite stand-in for stamps
    const tdse::EnergyProjector projector(g_f_eff, basis);

    RunResult r;
    r.kind = to_string(config.kind);
    r.g_i = config.g_i;
    r.g_f = config.g_f;
    r.t_f = config.t_f;
    r.n_max = n_max;
    r.dt = pc.dt;
    r.negative_g = ramp.negative_g();
    r.e_tf = projector.projected_energy(traj.final_state);
    r.e_target = static2b::even_energy(g_f_eff);
    r.w_irr = irreversible_work(r.e_tf, r.e_target);
    if (config.with_correlations) {
        const auto corr = correlation_pipeline(traj.final_state, basis, g_f_eff, config.grid);
        r.s_tf = corr.s_tf;
        r.s_target = corr.s_target_basis;
        r.delta_s = correlations::delta_entropy(corr.s_tf, corr.s_target_basis);
        r.t_d = corr.t_d;
        ConvergenceStamp st;
        st.s_target_exact = corr.s_target_exact;
        st.e_tf_raw = tdse::energy(traj.final_state, g_f_eff, basis);
        r.stamp = st;
    }
    return r;
}

}  // namespace

RunResult run_single(const RunConfig& config) {
    if (!(config.t_f > 0.0)) throw ConfigError("run: t_f must be positive");
    const Ramp ramp = config.build_ramp();
    RunResult r = run_at_basis(config, ramp, config.propagator.n_max);
    if (config.with_convergence_stamp) {
        RunResult doubled = run_at_basis(config, ramp, 2 * config.propagator.n_max);
        ConvergenceStamp st = r.stamp.value_or(ConvergenceStamp{});
        st.n_max_check = doubled.n_max;
        st.w_irr_check = doubled.w_irr;
        st.s_tf_check = doubled.s_tf;
        r.stamp = st;
    }
    return r;
}

std::vector<RunResult> sweep(const std::vector<RunConfig>& configs, int jobs) {
    std::vector<RunResult> results(configs.size());
    std::atomic<size_t> next{0};
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= configs.size()) return;
            try {
                results[i] = run_single(configs[i]);
            } catch (const std::exception& e) {
                RunResult r;
                r.kind = to_string(configs[i].kind);
                r.g_i = configs[i].g_i;
                r.g_f = configs[i].g_f;
                r.t_f = configs[i].t_f;
                r.error = e.what();
                results[i] = r;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int k = 0; k < workers; ++k) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return results;
}

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& points, double window_lo,
                        double window_hi) {
    std::vector<std::pair<double, double>> sel;
    int excluded = 0;
    for (const auto& [tf, w] : points) {
        if (tf < window_lo || tf > window_hi) continue;
        if (!(w > 1e-10)) {
            ++excluded;  // at or below the numerical floor: no log
            continue;
        }
        sel.emplace_back(tf, std::log(w));
    }
    if (sel.size() < 4) throw ConfigError("fit_decay_rate: fewer than 4 usable points in window");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : sel) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double n = static_cast<double>(sel.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0.0;
    for (const auto& [x, y] : sel) {
        const double e = y - (intercept + slope * x);
        ss_res += e * e;
    }
    const double ss_tot = syy - sy * sy / n;
    DecayFit fit;
    fit.alpha = -slope;
    fit.intercept = intercept;
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.points_used = static_cast<int>(sel.size());
    fit.points_excluded = excluded;
    return fit;
}

const char* kResultsHeader = "kind,g_i,g_f,t_f,E_tf,E_T,W_irr,S_tf,S_T,dS,T_D,n_max,dt";

namespace {

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string format_result_row(const RunResult& r) {
    std::ostringstream os;
    os << r.kind << ',' << fmt(r.g_i) << ',' << fmt(r.g_f) << ',' << fmt(r.t_f) << ',' << fmt(r.e_tf)
       << ',' << fmt(r.e_target) << ',' << fmt(r.w_irr) << ',' << fmt(r.s_tf) << ',' << fmt(r.s_target)
       << ',' << fmt(r.delta_s) << ',' << fmt(r.t_d) << ',' << r.n_max << ',' << fmt(r.dt);
    return os.str();
}

std::vector<RunResult> parse_results_csv(const std::string& text) {
    std::vector<RunResult> out;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("kind,", 0) == 0) continue;
        }
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 13) throw ConfigError("results csv: malformed row: " + line);
        RunResult r;
        r.kind = fields[0];
        const auto num = [&](int i) { return std::stod(fields[static_cast<size_t>(i)]); };
        r.g_i = num(1);
        r.g_f = num(2);
        r.t_f = num(3);
        r.e_tf = num(4);
        r.e_target = num(5);
        r.w_irr = num(6);
        r.s_tf = num(7);
        r.s_target = num(8);
        r.delta_s = num(9);
        r.t_d = num(10);
        r.n_max = static_cast<int>(num(11));
        r.dt = num(12);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace stira::analysis
