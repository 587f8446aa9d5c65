#pragma once

#include <vector>

namespace stira::specfun {

// True when x sits on a pole of Gamma (non-positive integer, to fp equality).
bool gamma_pole(double x);

// Gamma(x). Throws SolverError at poles. Relative accuracy ~1e-14 on |x|<=50.
double gamma(double x);

// log|Gamma(x)| and sign(Gamma(x)); sign is 0 at a pole.
struct LogGamma {
    double log_abs;
    double sign;
};
LogGamma log_gamma(double x);

// Gamma(p)/Gamma(q), evaluated in log space so either argument may be large
// or negative.  q at a pole gives 0; p at a pole (with q regular) throws.
double gamma_ratio(double p, double q);

// Tricomi confluent hypergeometric U(a, 1/2, z) for z >= 0.
// Route dispatch: exact polynomial recurrence for a in -N_0; Kummer-M
// connection formula (z <= 18) / asymptotic series (z > 18) for a in (-1, 0];
// Laplace integral representation for a > 0; downward a-recurrence seeded by
// two integral evaluations for a <= -1.
double kummer_u(double a, double z);

// Normalized harmonic-oscillator eigenfunction u_n(x), stable to n ~ 2000.
double oscillator_eigenfunction(int n, double x);

// u_{2n}(x) for n = 0..count-1 (single recurrence sweep).
std::vector<double> even_oscillator_values(double x, int count);

// u_{2n}(0): alternating, decaying; closed recurrence at the origin.
std::vector<double> even_oscillator_center_values(int count);

}  // namespace stira::specfun
