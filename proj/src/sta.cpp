#include "stira/sta.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "stira/errors.hpp"
#include "stira/quadrature.hpp"
#include "stira/static2b.hpp"

namespace stira::sta {

namespace {

// value and first two derivatives of P(eta)/Q(eta) for quadratic P, Q
struct Quadratic {
    double c0, c1, c2;
    double at(double e) const { return c0 + e * (c1 + e * c2); }
    double d1(double e) const { return c1 + 2.0 * e * c2; }
    double d2() const { return 2.0 * c2; }
};

struct Rational {
    Quadratic p, q;
    void eval(double e, double& v, double& dv, double& ddv) const {
        const double P = p.at(e), dP = p.d1(e), ddP = p.d2();
        const double Q = q.at(e), dQ = q.d1(e), ddQ = q.d2();
        v = P / Q;
        const double num1 = dP * Q - P * dQ;
        dv = num1 / (Q * Q);
        ddv = ((ddP * Q - P * ddQ) * Q - 2.0 * dQ * num1) / (Q * Q * Q);
    }
};

struct Moments {
    Rational xi2, beta, rho0;
    Quadratic q;          // normalization denominator
    double rho0_scale;    // central-density magnitude for the singularity guard
};

Moments build_moments(const AnsatzKernels& k) {
    Moments m;
    m.q = {1.0, 2.0 * k.s - 2.0, 2.0 - 2.0 * k.s};
    m.xi2 = {{k.m_ii, 2.0 * (k.m_if - k.m_ii), k.m_ii - 2.0 * k.m_if + k.m_ff}, m.q};
    m.beta = {{k.k_ii, 2.0 * (k.k_if - k.k_ii), k.k_ii - 2.0 * k.k_if + k.k_ff}, m.q};
    const double dp = k.p_f - k.p_i;
    m.rho0 = {{k.p_i * k.p_i, 2.0 * k.p_i * dp, dp * dp}, m.q};
    m.rho0_scale = k.p_i * k.p_i + k.p_f * k.p_f;
    return m;
}

double pulse_value(double eta, double eta_dot, double eta_ddot, const Moments& m) {
    double xi2, d_xi2, dd_xi2, beta, d_beta, dd_beta, rho0, d_rho0, dd_rho0;
    m.xi2.eval(eta, xi2, d_xi2, dd_xi2);
    m.beta.eval(eta, beta, d_beta, dd_beta);
    m.rho0.eval(eta, rho0, d_rho0, dd_rho0);
    if (std::abs(d_rho0) < 1e-10 * std::max(std::abs(rho0), m.rho0_scale)) {
        std::ostringstream msg;
        msg << "g_sta: d(rho0)/d(eta) vanishes at eta = " << eta;
        throw SingularDenominatorError(msg.str(), eta);
    }
    const double b = eta_dot * d_xi2 / (4.0 * xi2);
    const double f_prime = (dd_xi2 * xi2 - d_xi2 * d_xi2) / (4.0 * xi2 * xi2);
    const double b_dot = eta_ddot * d_xi2 / (4.0 * xi2) + eta_dot * eta_dot * f_prime;
    return -(d_xi2 * (b_dot + 2.0 * b * b + 0.5) + 0.5 * d_beta) / d_rho0;
}

}  // namespace

AnsatzKernels compute_kernels(double g_i, double g_f) {
    if (g_i == g_f)
        throw ConfigError("compute_kernels: g_i == g_f leaves the superposition degenerate");
    const auto phi_i = static2b::RelativeEigenstate::solve(g_i);
    const auto phi_f = std::isinf(g_f) ? static2b::RelativeEigenstate::strong_coupling_limit()
                                       : static2b::RelativeEigenstate::solve(g_f);
    const auto overlap = [](auto&& f) { return 2.0 * adaptive_simpson(f, 0.0, 15.0, 1e-13); };

    AnsatzKernels k;
    k.g_i = g_i;
    k.g_f = g_f;
    k.E_i = phi_i.energy();
    k.E_f = phi_f.energy();
    k.s = overlap([&](double x) { return phi_i(x) * phi_f(x); });
    k.m_ii = overlap([&](double x) { return x * x * phi_i(x) * phi_i(x); });
    k.m_if = overlap([&](double x) { return x * x * phi_i(x) * phi_f(x); });
    k.m_ff = overlap([&](double x) { return x * x * phi_f(x) * phi_f(x); });
    k.p_i = phi_i.central_value();
    k.p_f = phi_f.central_value();
    k.k_ii = 2.0 * k.E_i - k.m_ii - 2.0 * g_i * k.p_i * k.p_i;
    k.k_if = 2.0 * k.E_i * k.s - k.m_if - 2.0 * g_i * k.p_i * k.p_f;
    // g -> inf with p_f -> 0: the contact term of the target state drops out
    const double gp2 = std::isinf(g_f) ? 0.0 : 2.0 * g_f * k.p_f * k.p_f;
    k.k_ff = 2.0 * k.E_f - k.m_ff - gp2;
    return k;
}

AnsatzKernels strong_coupling_kernels(TargetSign sign) {
    const double s2pi = std::sqrt(2.0 / M_PI);
    const double sgn = (sign == TargetSign::positive) ? 1.0 : -1.0;
    AnsatzKernels k;
    k.g_i = 0.0;
    k.g_f = std::numeric_limits<double>::infinity();
    k.E_i = 0.5;
    k.E_f = 1.5;
    k.s = sgn * s2pi;
    k.m_ii = 0.5;
    k.m_if = sgn * s2pi;
    k.m_ff = 1.5;
    k.k_ii = 0.5;
    k.k_if = 0.0;  // = E_i s - m_if for either sign
    k.k_ff = 1.5;
    k.p_i = std::pow(M_PI, -0.25);
    k.p_f = 0.0;
    return k;
}

AnsatzState ansatz_moments(double eta, const AnsatzKernels& kernels) {
    if (eta < 0.0 || eta > 1.0) throw std::domain_error("ansatz_moments: eta outside [0, 1]");
    const Moments m = build_moments(kernels);
    AnsatzState st;
    st.eta = eta;
    st.norm = 1.0 / std::sqrt(m.q.at(eta));
    double dd;
    m.xi2.eval(eta, st.xi2, st.d_xi2, st.dd_xi2);
    m.beta.eval(eta, st.beta, st.d_beta, dd);
    m.rho0.eval(eta, st.rho0, st.d_rho0, dd);
    return st;
}

Chirp chirp(double t, const SwitchingFunction& sf, const AnsatzKernels& kernels) {
    const Moments m = build_moments(kernels);
    const double eta = sf.eta(t), eta_dot = sf.eta_dot(t), eta_ddot = sf.eta_ddot(t);
    double xi2, d_xi2, dd_xi2;
    m.xi2.eval(eta, xi2, d_xi2, dd_xi2);
    Chirp c;
    c.b = eta_dot * d_xi2 / (4.0 * xi2);
    const double f_prime = (dd_xi2 * xi2 - d_xi2 * d_xi2) / (4.0 * xi2 * xi2);
    c.b_dot = eta_ddot * d_xi2 / (4.0 * xi2) + eta_dot * eta_dot * f_prime;
    return c;
}

double g_sta(double t, const SwitchingFunction& sf, const AnsatzKernels& kernels) {
    const Moments m = build_moments(kernels);
    return pulse_value(sf.eta(t), sf.eta_dot(t), sf.eta_ddot(t), m);
}

double g_sta_tg(double t, const SwitchingFunction& sf, TargetSign sign) {
    const Moments m = build_moments(strong_coupling_kernels(sign));
    return pulse_value(sf.eta(t), sf.eta_dot(t), sf.eta_ddot(t), m);
}

namespace {

Ramp make_pulse_ramp(Ramp::Kind kind, double g_i, double g_f, double t_f,
                     std::shared_ptr<const SwitchingFunction> sf,
                     std::shared_ptr<const Moments> moments, int samples, bool open_end) {
    Ramp r;
    r.kind = kind;
    r.g_i = g_i;
    r.g_f = g_f;
    r.t_f = t_f;
    r.g = [sf, moments](double t) {
        return pulse_value(sf->eta(t), sf->eta_dot(t), sf->eta_ddot(t), *moments);
    };
    // derivatives by central differences on the analytic pulse; the pulse
    // itself is smooth and only g(t) enters the propagators
    const double h = 1e-6 * t_f;
    auto g = r.g;
    r.g_dot = [g, h, t_f](double t) {
        const double lo = std::max(0.0, t - h), hi = std::min(t_f, t + h);
        return (g(hi) - g(lo)) / (hi - lo);
    };
    auto gd = r.g_dot;
    r.g_ddot = [gd, h, t_f](double t) {
        const double lo = std::max(0.0, t - h), hi = std::min(t_f, t + h);
        return (gd(hi) - gd(lo)) / (hi - lo);
    };
    double mn = std::numeric_limits<double>::infinity();
    const int last = open_end ? samples - 1 : samples;
    for (int i = 0; i <= last; ++i) mn = std::min(mn, r.g(t_f * i / samples));
    r.min_g = mn;
    return r;
}

}  // namespace

Ramp make_sta_ramp(double g_i, double g_f, double t_f, int samples) {
    auto sf = std::make_shared<SwitchingFunction>(t_f);
    auto m = std::make_shared<Moments>(build_moments(compute_kernels(g_i, g_f)));
    return make_pulse_ramp(Ramp::Kind::sta, g_i, g_f, t_f, sf, m, samples, false);
}

Ramp make_sta_tg_ramp(double t_f, TargetSign sign, int samples) {
    auto sf = std::make_shared<SwitchingFunction>(t_f);
    auto m = std::make_shared<Moments>(build_moments(strong_coupling_kernels(sign)));
    return make_pulse_ramp(Ramp::Kind::sta_tg, 0.0, std::numeric_limits<double>::infinity(), t_f,
                           sf, m, samples, true);
}

}  // namespace stira::sta
