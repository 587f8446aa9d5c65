#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace stira {

// Quintic switching function on [0, t_f]: eta(0)=0, eta(t_f)=1 and vanishing
// first and second derivatives at both ends.  Coefficients are obtained from
// the 6x6 boundary system in s = t/t_f.
class SwitchingFunction {
  public:
    explicit SwitchingFunction(double t_f);

    double eta(double t) const;
    double eta_dot(double t) const;
    double eta_ddot(double t) const;

    double t_f() const { return t_f_; }
    const std::array<double, 6>& coefficients() const { return coeff_; }

    // residual of the six boundary equations under the solved coefficients
    double boundary_residual() const;

  private:
    void check_range(double t) const;
    double t_f_;
    std::array<double, 6> coeff_;  // eta(s) = sum_j coeff[j] s^j
};

// Time-dependent interaction schedule with first and second derivatives.
struct Ramp {
    enum class Kind { reference, linear, sta, sta_tg, tabulated };

    Kind kind;
    double g_i = 0.0;
    double g_f = 0.0;
    double t_f = 0.0;
    std::function<double(double)> g;
    std::function<double(double)> g_dot;
    std::function<double(double)> g_ddot;
    // minimum of g over a dense sample; filled by the pulse builders
    std::optional<double> min_g;

    bool negative_g() const { return min_g && *min_g < 0.0; }
};

const char* to_string(Ramp::Kind kind);

// Sinusoidal reference pulse: endpoints 0 and g_f with vanishing first and
// second derivatives at both ends.
Ramp make_reference_ramp(double g_f, double t_f);

Ramp make_linear_ramp(double g_i, double g_f, double t_f);

// Constant schedule, expressed as a degenerate linear ramp.
Ramp make_constant_ramp(double g, double t_f);

// Monotonicity-preserving cubic (Fritsch-Carlson) through the given nodes.
Ramp make_tabulated_ramp(std::vector<double> t, std::vector<double> g);

}  // namespace stira
