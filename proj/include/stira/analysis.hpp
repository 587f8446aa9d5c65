#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stira/ramps.hpp"
#include "stira/sta.hpp"
#include "stira/tdse.hpp"

namespace stira::analysis {

double irreversible_work(double e_tf, double e_target);

struct CorrelationGridSpec {
    double extent = 6.0;
    int points = 241;
    // sampling of the relative factor before interpolation
    int rel_points = 1601;
};

struct RunConfig {
    Ramp::Kind kind = Ramp::Kind::sta;
    double g_i = 0.0;
    double g_f = 20.0;
    double t_f = 10.0;
    sta::TargetSign tg_sign = sta::TargetSign::positive;
    tdse::PropagatorConfig propagator;
    CorrelationGridSpec grid;
    bool with_correlations = true;
    bool with_convergence_stamp = true;

    Ramp build_ramp() const;
};

struct ConvergenceStamp {
    int n_max_check = 0;          // doubled basis used for the stamp
    double w_irr_check = 0.0;     // W_irr recomputed at the doubled basis
    double s_tf_check = 0.0;
    double e_tf_raw = 0.0;        // plain contact-term expectation value
    double s_target_exact = 0.0;  // target entropy from the exact evaluator
};

struct RunResult {
    std::string kind;
    double g_i = 0.0, g_f = 0.0, t_f = 0.0;
    double e_tf = 0.0;   // projected energy stamp
    double e_target = 0.0;
    double w_irr = 0.0;
    double s_tf = 0.0;
    double s_target = 0.0;  // same-basis target entropy (bias cancels in dS)
    double delta_s = 0.0;
    double t_d = 0.0;
    int n_max = 0;
    double dt = 0.0;
    bool negative_g = false;
    std::optional<ConvergenceStamp> stamp;
    std::optional<std::string> error;  // set when a sweep row failed
};

RunResult run_single(const RunConfig& config);

// Ordered, per-row fault-isolated execution; `jobs` worker threads.
std::vector<RunResult> sweep(const std::vector<RunConfig>& configs, int jobs = 1);

struct DecayFit {
    double alpha = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    int points_used = 0;
    int points_excluded = 0;  // non-positive rows inside the window
};

// Least squares on (t_f, ln W) inside the window; alpha = -slope.
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& points,
                        double window_lo = 1.5, double window_hi = 8.0);

// results CSV (stable header and row format)
extern const char* kResultsHeader;
std::string format_result_row(const RunResult& r);
std::vector<RunResult> parse_results_csv(const std::string& text);

}  // namespace stira::analysis
