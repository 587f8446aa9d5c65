#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "stira/ramps.hpp"

namespace stira::tdse {

// Even harmonic-oscillator modes; the contact coupling is rank-one here:
// H_mn = (2n + 1/2) delta_mn + g v_m v_n with v_n = u_{2n}(0).
struct SpectralBasis {
    int n_max;
    Eigen::VectorXd energy;  // 2n + 1/2
    Eigen::VectorXd center;  // u_{2n}(0)

    static SpectralBasis build(int n_max);
};

Eigen::MatrixXd hamiltonian_matrix(double g, const SpectralBasis& basis);

struct EigenSolution {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;  // columns
};

EigenSolution static_diagonalize(double g, const SpectralBasis& basis);

// Exact eigenstate coefficients from the rank-one structure,
// c_n ~ v_n / (E - E_n) with E the implicit-equation energy; truncated to the
// basis and renormalized.
Eigen::VectorXd exact_even_coefficients(double g, int branch, const SpectralBasis& basis);

struct WaveState {
    double t = 0.0;
    Eigen::VectorXcd c;

    double norm() const { return std::sqrt(c.squaredNorm()); }
};

struct PropagatorConfig {
    enum class Scheme { implicit_midpoint, explicit_rk4 };
    int n_max = 256;
    double dt = 1e-3;
    Scheme scheme = Scheme::implicit_midpoint;
    double norm_drift_budget = 1e-8;  // per unit time
    int snapshot_stride = 0;          // 0: endpoints only
};

struct Snapshot {
    double t;
    double norm;
    double energy;
};

struct Trajectory {
    WaveState final_state;
    std::vector<Snapshot> snapshots;
    double max_norm_drift = 0.0;
};

// Propagate from `initial` (defaults to the ground state of H(g(0)) obtained
// by dense diagonalization) under the given schedule.  The implicit-midpoint
// scheme evaluates g at t + dt/2 and solves the rank-one-updated step system
// in O(n_max) via the Sherman-Morrison identity.
Trajectory propagate(const Ramp& ramp, const PropagatorConfig& config,
                     const WaveState* initial = nullptr);

double energy(const WaveState& state, double g, const SpectralBasis& basis);

// Energy stamp that removes the contact-term truncation bias: decompose onto
// the eigenbasis of the truncated H(g) and attach implicit-equation energies
// to the low branches (truncated eigenvalues above n_exact).
class EnergyProjector {
  public:
    EnergyProjector(double g, const SpectralBasis& basis, int n_exact = 64);

    double projected_energy(const WaveState& state) const;
    double ground_energy() const { return energies_[0]; }
    // occupation of eigen-branch k
    Eigen::VectorXd occupations(const WaveState& state) const;

  private:
    Eigen::MatrixXd vectors_;
    Eigen::VectorXd energies_;
};

Eigen::VectorXcd to_position(const WaveState& state, const SpectralBasis& basis,
                             std::span<const double> x);

// ---- real-space finite-difference cross-check ----

struct GridConfig {
    double extent = 10.0;  // domain [-extent, extent]
    int points = 1001;     // odd, so the contact node is on the grid
    double dt = 2.5e-4;
};

struct GridState {
    std::vector<double> x;
    Eigen::VectorXcd psi;  // continuum-normalized: sum |psi|^2 dx = 1
    double dx;
};

// Ground state of the discretized Hamiltonian (single-node contact term of
// height g/dx) by shifted inverse iteration.
struct GridGround {
    double energy;
    GridState state;
};

GridGround grid_ground(double g, const GridConfig& config);

struct GridRun {
    GridState final_state;
    double max_norm_drift;
    double odd_mass;  // parity leakage diagnostic
};

GridRun grid_propagate(const Ramp& ramp, const GridConfig& config);

double grid_energy(const GridState& state, double g);

}  // namespace stira::tdse
