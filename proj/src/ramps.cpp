#include "stira/ramps.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "stira/errors.hpp"

namespace stira {

SwitchingFunction::SwitchingFunction(double t_f) : t_f_(t_f) {
    if (!(t_f > 0.0)) throw ConfigError("SwitchingFunction: t_f must be positive");
    // boundary system in s = t/t_f: value/slope/curvature at s=0 and s=1
    Eigen::Matrix<double, 6, 6> A = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> b = Eigen::Matrix<double, 6, 1>::Zero();
    A(0, 0) = 1.0;                                        // eta(0) = 0
    A(1, 1) = 1.0;                                        // eta'(0) = 0
    A(2, 2) = 2.0;                                        // eta''(0) = 0
    for (int j = 0; j < 6; ++j) {
        A(3, j) = 1.0;                                    // eta(1) = 1
        A(4, j) = j;                                      // eta'(1) = 0
        A(5, j) = j * (j - 1);                            // eta''(1) = 0
    }
    b(3) = 1.0;
    const Eigen::Matrix<double, 6, 1> c = A.fullPivLu().solve(b);
    for (int j = 0; j < 6; ++j) coeff_[j] = c(j);
}

void SwitchingFunction::check_range(double t) const {
    if (t < -1e-12 * t_f_ || t > t_f_ * (1.0 + 1e-12))
        throw std::domain_error("SwitchingFunction: t outside [0, t_f]");
}

double SwitchingFunction::eta(double t) const {
    check_range(t);
    const double s = t / t_f_;
    double v = 0.0;
    for (int j = 5; j >= 0; --j) v = v * s + coeff_[j];
    return v;
}

double SwitchingFunction::eta_dot(double t) const {
    check_range(t);
    const double s = t / t_f_;
    double v = 0.0;
    for (int j = 5; j >= 1; --j) v = v * s + j * coeff_[j];
    return v / t_f_;
}

double SwitchingFunction::eta_ddot(double t) const {
    check_range(t);
    const double s = t / t_f_;
    double v = 0.0;
    for (int j = 5; j >= 2; --j) v = v * s + j * (j - 1) * coeff_[j];
    return v / (t_f_ * t_f_);
}

double SwitchingFunction::boundary_residual() const {
    double r = 0.0;
    r = std::max(r, std::abs(eta(0.0)));
    r = std::max(r, std::abs(eta(t_f_) - 1.0));
    r = std::max(r, std::abs(eta_dot(0.0) * t_f_));
    r = std::max(r, std::abs(eta_dot(t_f_) * t_f_));
    r = std::max(r, std::abs(eta_ddot(0.0) * t_f_ * t_f_));
    r = std::max(r, std::abs(eta_ddot(t_f_) * t_f_ * t_f_));
    return r;
}

const char* to_string(Ramp::Kind kind) {
    switch (kind) {
        case Ramp::Kind::reference: return "reference";
        case Ramp::Kind::linear: return "linear";
        case Ramp::Kind::sta: return "sta";
        case Ramp::Kind::sta_tg: return "sta-tg";
        case Ramp::Kind::tabulated: return "tabulated";
    }
    return "?";
}

Ramp make_reference_ramp(double g_f, double t_f) {
    if (!(t_f > 0.0)) throw ConfigError("reference ramp: t_f must be positive");
    Ramp r;
    r.kind = Ramp::Kind::reference;
    r.g_i = 0.0;
    r.g_f = g_f;
    r.t_f = t_f;
    const double w = 0.5 * M_PI / t_f;
    r.g = [=](double t) {
        return g_f / 32.0 * (30.0 * std::sin(w * t) - 5.0 * std::sin(3.0 * w * t) - 3.0 * std::sin(5.0 * w * t));
    };
    r.g_dot = [=](double t) {
        return g_f / 32.0 * w * (30.0 * std::cos(w * t) - 15.0 * std::cos(3.0 * w * t) - 15.0 * std::cos(5.0 * w * t));
    };
    r.g_ddot = [=](double t) {
        return -g_f / 32.0 * w * w *
               (30.0 * std::sin(w * t) - 45.0 * std::sin(3.0 * w * t) - 75.0 * std::sin(5.0 * w * t));
    };
    r.min_g = std::min(0.0, g_f);
    return r;
}

Ramp make_linear_ramp(double g_i, double g_f, double t_f) {
    if (!(t_f > 0.0)) throw ConfigError("linear ramp: t_f must be positive");
    Ramp r;
    r.kind = Ramp::Kind::linear;
    r.g_i = g_i;
    r.g_f = g_f;
    r.t_f = t_f;
    const double slope = (g_f - g_i) / t_f;
    r.g = [=](double t) { return g_i + slope * t; };
    r.g_dot = [=](double) { return slope; };
    r.g_ddot = [](double) { return 0.0; };
    r.min_g = std::min(g_i, g_f);
    return r;
}

Ramp make_constant_ramp(double g, double t_f) {
    return make_linear_ramp(g, g, t_f);
}

namespace {

// Fritsch-Carlson slopes: no overshoot between nodes.
struct Pchip {
    std::vector<double> t, y, d;

    explicit Pchip(std::vector<double> ts, std::vector<double> ys) : t(std::move(ts)), y(std::move(ys)) {
        const size_t n = t.size();
        if (n < 2 || n != y.size()) throw ConfigError("tabulated ramp: need >= 2 nodes");
        for (size_t i = 0; i + 1 < n; ++i)
            if (!(t[i + 1] > t[i])) throw ConfigError("tabulated ramp: times must be strictly increasing");
        std::vector<double> h(n - 1), delta(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
            h[i] = t[i + 1] - t[i];
            delta[i] = (y[i + 1] - y[i]) / h[i];
        }
        d.assign(n, 0.0);
        for (size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] > 0.0) {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        d[0] = edge_slope(h[0], h.size() > 1 ? h[1] : h[0], delta[0], delta.size() > 1 ? delta[1] : delta[0]);
        d[n - 1] = edge_slope(h[n - 2], n > 2 ? h[n - 3] : h[n - 2], delta[n - 2],
                              n > 2 ? delta[n - 3] : delta[n - 2]);
    }

    static double edge_slope(double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) return 0.0;
        if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return s;
    }

    size_t segment(double x) const {
        if (x < t.front() - 1e-12 || x > t.back() + 1e-12)
            throw std::domain_error("tabulated ramp: t outside the table");
        const auto it = std::upper_bound(t.begin(), t.end(), x);
        size_t i = static_cast<size_t>(std::distance(t.begin(), it));
        if (i > 0) --i;
        return std::min(i, t.size() - 2);
    }

    void eval(double x, double* v, double* dv, double* ddv) const {
        const size_t i = segment(x);
        const double h = t[i + 1] - t[i];
        const double s = (x - t[i]) / h;
        const double y0 = y[i], y1 = y[i + 1], d0 = d[i] * h, d1 = d[i + 1] * h;
        // cubic Hermite basis
        const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        const double h10 = s * (1.0 - s) * (1.0 - s);
        const double h01 = s * s * (3.0 - 2.0 * s);
        const double h11 = s * s * (s - 1.0);
        if (v) *v = h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1;
        if (dv) {
            const double g00 = 6.0 * s * (s - 1.0);
            const double g10 = (1.0 - s) * (1.0 - 3.0 * s);
            const double g01 = -g00;
            const double g11 = s * (3.0 * s - 2.0);
            *dv = (g00 * y0 + g10 * d0 + g01 * y1 + g11 * d1) / h;
        }
        if (ddv) {
            const double q00 = 12.0 * s - 6.0;
            const double q10 = 6.0 * s - 4.0;
            const double q01 = -q00;
            const double q11 = 6.0 * s - 2.0;
            *ddv = (q00 * y0 + q10 * d0 + q01 * y1 + q11 * d1) / (h * h);
        }
    }
};

}  // namespace

Ramp make_tabulated_ramp(std::vector<double> t, std::vector<double> g) {
    auto interp = std::make_shared<Pchip>(std::move(t), std::move(g));
    Ramp r;
    r.kind = Ramp::Kind::tabulated;
    r.t_f = interp->t.back() - interp->t.front();
    r.g_i = interp->y.front();
    r.g_f = interp->y.back();
    r.min_g = *std::min_element(interp->y.begin(), interp->y.end());
    r.g = [interp](double x) { double v; interp->eval(x, &v, nullptr, nullptr); return v; };
    r.g_dot = [interp](double x) { double v; interp->eval(x, nullptr, &v, nullptr); return v; };
    r.g_ddot = [interp](double x) { double v; interp->eval(x, nullptr, nullptr, &v); return v; };
    return r;
}

}  // namespace stira
