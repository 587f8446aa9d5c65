#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace stira::correlations {

struct Grid1d {
    std::vector<double> x;
    std::vector<double> w;  // trapezoid weights

    static Grid1d uniform(double extent, int points);
    bool same_as(const Grid1d& other) const;
};

// Symmetric two-particle amplitude on the grid, Psi(x1, x2), unit norm under
// the weighted double sum.
struct TwoBodyState {
    Grid1d grid;
    Eigen::MatrixXcd amp;
};

// Build Psi(x1,x2) = com_ground((x1+x2)/sqrt2) * phi_rel((x1-x2)/sqrt2) from
// sampled relative amplitudes; the relative factor is interpolated by a
// natural cubic spline onto the rotated coordinates.
TwoBodyState assemble_two_body(std::span<const double> rel_x,
                               std::span<const std::complex<double>> rel_values,
                               const Grid1d& grid);

// Reduced one-particle density matrix, trace normalized to 1.
struct RSPDM {
    Grid1d grid;
    Eigen::MatrixXcd rho;  // Hermitian kernel values rho(x_i, x_j)
    double raw_trace = 1.0;
};

RSPDM rspdm(const TwoBodyState& psi);

// Eigenvalues of the weight-symmetrized kernel, descending; they sum to 1.
Eigen::VectorXd schmidt_spectrum(const RSPDM& rho);

// von Neumann entropy in bits; eigenvalues above -1e-9 are clamped to 0.
double entropy(const RSPDM& rho);

double trace_distance(const RSPDM& a, const RSPDM& b);

inline double delta_entropy(double s_dynamic, double s_target) { return s_dynamic - s_target; }

struct EntanglementReport {
    double S = 0.0;
    int schmidt_rank = 0;  // eigenvalues above 1e-8
    double delta_S = 0.0;
    double T_D = 0.0;
};

EntanglementReport make_report(const RSPDM& state, const RSPDM& target, double s_target);

}  // namespace stira::correlations
