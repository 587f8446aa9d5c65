#pragma once

#include <span>
#include <utility>
#include <vector>

namespace stira {
struct Ramp;
}

namespace stira::static2b {

// Residual of the implicit even-state energy condition,
//   2 Gamma(-E/2 + 3/4) / Gamma(-E/2 + 1/4) + g.
double implicit_residual(double energy, double g);

// Even-state energy on the given branch.  Branch b of a repulsive system sits
// in (2b + 1/2, 2b + 3/2); g = 0 gives exactly 2b + 1/2; attractive g is
// supported for the ground branch only (energy below 1/2, possibly negative).
double even_energy(double g, int branch = 0);

// Exact even eigenstate of the relative Hamiltonian at interaction g:
// N e^{-x^2/2} U(1/4 - E/2, 1/2, x^2), unit L2 norm, positive at the origin.
class RelativeEigenstate {
  public:
    static RelativeEigenstate solve(double g, int branch = 0);
    static RelativeEigenstate strong_coupling_limit();  // g -> inf: (pi/4)^{-1/4} |x| e^{-x^2/2}

    double operator()(double x) const;
    double central_value() const { return (*this)(0.0); }

    double g() const { return g_; }
    double energy() const { return energy_; }
    int branch() const { return branch_; }
    double norm_constant() const { return norm_; }
    bool is_strong_coupling_limit() const { return tg_; }

  private:
    RelativeEigenstate() = default;
    double g_ = 0.0;
    double energy_ = 0.5;
    int branch_ = 0;
    double norm_ = 1.0;
    double kummer_a_ = 0.0;
    bool tg_ = false;
};

struct EnergyCurve {
    std::vector<std::pair<double, double>> samples;  // (g, E0), input order
};

EnergyCurve ground_energy_curve(std::span<const double> g_samples);

// E0(g(t)) along a ramp; include_com adds the constant center-of-mass 1/2.
double adiabatic_energy(const Ramp& ramp, double t, bool include_com = false);

}  // namespace stira::static2b
