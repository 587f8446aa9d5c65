#include "stira/static2b.hpp"

#include <cmath>
#include <sstream>

#include "stira/errors.hpp"
#include "stira/quadrature.hpp"
#include "stira/ramps.hpp"
#include "stira/specfun.hpp"

namespace stira::static2b {

namespace {

double bisect(double lo, double hi, double flo, double g) {
    // plain bisection to ~1e-13 interval width; the residual is monotone
    // between consecutive poles of the Gamma ratio
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = implicit_residual(mid, g);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double solve_repulsive(double g, int branch) {
    const double e_lo = 2.0 * branch + 0.5, e_hi = 2.0 * branch + 1.5;
    // scan subdivisions to step over the Gamma poles pinned at both edges
    const int kScan = 64;
    const double pad = 1e-9 * (1.0 + std::abs(e_lo));
    double prev_e = e_lo + pad;
    double prev_f = implicit_residual(prev_e, g);
    for (int i = 1; i <= kScan; ++i) {
        const double e = e_lo + pad + (e_hi - e_lo - 2.0 * pad) * i / kScan;
        const double f = implicit_residual(e, g);
        if ((f > 0.0) != (prev_f > 0.0)) return bisect(prev_e, e, prev_f, g);
        prev_e = e;
        prev_f = f;
    }
    std::ostringstream msg;
    msg << "even_energy: no sign change in (" << e_lo << ", " << e_hi << ") for g = " << g;
    throw SolverError(msg.str());
}

double solve_attractive(double g) {
    double hi = 0.5 - 1e-9;
    double f_hi = implicit_residual(hi, g);  // -> g < 0 near the pole edge
    double lo = -0.5, width = 1.0;
    double f_lo = implicit_residual(lo, g);
    // push the lower edge down geometrically until the ratio outgrows |g|
    while ((f_lo > 0.0) == (f_hi > 0.0)) {
        width *= 2.0;
        lo = 0.5 - width;
        if (width > 1e8) {
            std::ostringstream msg;
            msg << "even_energy: no bracket below E=1/2 down to " << lo << " for g = " << g;
            throw SolverError(msg.str());
        }
        f_lo = implicit_residual(lo, g);
    }
    return bisect(lo, hi, f_lo, g);
}

}  // namespace

double implicit_residual(double energy, double g) {
    return 2.0 * specfun::gamma_ratio(-0.5 * energy + 0.75, -0.5 * energy + 0.25) + g;
}

double even_energy(double g, int branch) {
    if (branch < 0) throw SolverError("even_energy: branch must be non-negative");
    if (!std::isfinite(g)) throw SolverError("even_energy: g must be finite");
    if (g == 0.0) return 2.0 * branch + 0.5;
    if (g < 0.0) {
        if (branch != 0) throw SolverError("even_energy: attractive g supported for branch 0 only");
        return solve_attractive(g);
    }
    return solve_repulsive(g, branch);
}

RelativeEigenstate RelativeEigenstate::solve(double g, int branch) {
    RelativeEigenstate st;
    st.g_ = g;
    st.branch_ = branch;
    st.energy_ = even_energy(g, branch);
    st.kummer_a_ = 0.25 - 0.5 * st.energy_;
    const auto raw = [&](double x) {
        return std::exp(-0.5 * x * x) * specfun::kummer_u(st.kummer_a_, x * x);
    };
    const double n2 = 2.0 * adaptive_simpson([&](double x) { const double r = raw(x); return r * r; },
                                             0.0, 15.0, 1e-13);
    st.norm_ = 1.0 / std::sqrt(n2);
    // positive-lobe convention: the Kummer form is already positive at 0+ for
    // the ground branch; excited branches get the sign fixed at the origin
    if (raw(0.0) < 0.0) st.norm_ = -st.norm_;
    return st;
}

RelativeEigenstate RelativeEigenstate::strong_coupling_limit() {
    RelativeEigenstate st;
    st.g_ = std::numeric_limits<double>::infinity();
    st.energy_ = 1.5;
    st.tg_ = true;
    st.norm_ = std::pow(M_PI / 4.0, -0.25);
    return st;
}

double RelativeEigenstate::operator()(double x) const {
    if (tg_) return norm_ * std::abs(x) * std::exp(-0.5 * x * x);
    return norm_ * std::exp(-0.5 * x * x) * specfun::kummer_u(kummer_a_, x * x);
}

EnergyCurve ground_energy_curve(std::span<const double> g_samples) {
    EnergyCurve curve;
    curve.samples.reserve(g_samples.size());
    for (double g : g_samples) curve.samples.emplace_back(g, even_energy(g, 0));
    return curve;
}

double adiabatic_energy(const Ramp& ramp, double t, bool include_com) {
    const double e = even_energy(ramp.g(t), 0);
    return include_com ? e + 0.5 : e;
}

}  // namespace stira::static2b
