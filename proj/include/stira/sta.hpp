#pragma once

#include "stira/ramps.hpp"

namespace stira::sta {

// Pairwise integrals between the initial and target eigenstates entering the
// two-state superposition ansatz.  Kinetic kernels come from the
// eigen-equation identity k_ab = 2 E_a s_ab - m_ab - 2 g_a p_a p_b.
struct AnsatzKernels {
    double g_i, g_f;        // g_f may be +inf (strong-coupling target)
    double E_i, E_f;
    double s;               // <phi_i | phi_f>
    double m_ii, m_if, m_ff;  // <phi_a | x^2 | phi_b>
    double k_ii, k_if, k_ff;  // int phi_a' phi_b'
    double p_i, p_f;        // phi_a(0)
};

// Sign convention of the strong-coupling target lobe in the superposition.
// `flipped` negates the target state, which turns the cross terms
// (1 - sqrt(2/pi)) inside the normalization and width into (1 + sqrt(2/pi)).
enum class TargetSign { positive, flipped };

AnsatzKernels compute_kernels(double g_i, double g_f);

// Closed-form kernels for g_i = 0, g_f -> inf (no quadrature).
AnsatzKernels strong_coupling_kernels(TargetSign sign = TargetSign::positive);

// Variational moments of the superposition at mixing parameter eta, as exact
// rational functions of eta with analytic derivatives.
struct AnsatzState {
    double eta;
    double norm;     // N with N^2 [(1-eta)^2 + eta^2 + 2 eta (1-eta) s] = 1
    double xi2;      // width^2
    double d_xi2;    // d(xi^2)/d eta
    double dd_xi2;   // d^2(xi^2)/d eta^2
    double beta;     // kinetic integral of the (real) envelope
    double d_beta;
    double rho0;     // central density |phi(0)|^2
    double d_rho0;
};

AnsatzState ansatz_moments(double eta, const AnsatzKernels& kernels);

// Chirp b(t) = eta_dot d(xi^2)/d eta / (4 xi^2) and its time derivative.
struct Chirp {
    double b;
    double b_dot;
};

Chirp chirp(double t, const SwitchingFunction& sf, const AnsatzKernels& kernels);

// Interaction pulse from the Euler-Lagrange equations of the chirped ansatz.
// Throws SingularDenominatorError when d(rho0)/d eta vanishes.
double g_sta(double t, const SwitchingFunction& sf, const AnsatzKernels& kernels);

// Strong-coupling closed-form branch (diverges at t -> t_f).
double g_sta_tg(double t, const SwitchingFunction& sf, TargetSign sign = TargetSign::positive);

// Ramp with exact pulse evaluators; min_g scanned on `samples` points.
Ramp make_sta_ramp(double g_i, double g_f, double t_f, int samples = 2048);
Ramp make_sta_tg_ramp(double t_f, TargetSign sign = TargetSign::positive, int samples = 2048);

}  // namespace stira::sta
