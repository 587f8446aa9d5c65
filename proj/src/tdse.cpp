#include "stira/tdse.hpp"

#include <cmath>
#include <sstream>

#include "stira/errors.hpp"
#include "stira/specfun.hpp"
#include "stira/static2b.hpp"

namespace stira::tdse {

namespace {
using Cplx = std::complex<double>;
}

SpectralBasis SpectralBasis::build(int n_max) {
    if (n_max < 32) throw ConfigError("SpectralBasis: n_max >= 32 required");
    SpectralBasis b;
    b.n_max = n_max;
    b.energy.resize(n_max);
    for (int n = 0; n < n_max; ++n) b.energy(n) = 2.0 * n + 0.5;
    const auto v = specfun::even_oscillator_center_values(n_max);
    b.center = Eigen::Map<const Eigen::VectorXd>(v.data(), n_max);
    return b;
}

Eigen::MatrixXd hamiltonian_matrix(double g, const SpectralBasis& basis) {
    Eigen::MatrixXd h(basis.n_max, basis.n_max);
    for (int i = 0; i < basis.n_max; ++i)
        for (int j = 0; j <= i; ++j)
            h(i, j) = h(j, i) = g * basis.center(i) * basis.center(j);
    h.diagonal() += basis.energy;
    return h;
}

EigenSolution static_diagonalize(double g, const SpectralBasis& basis) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian_matrix(g, basis));
    if (es.info() != Eigen::Success) throw SolverError("static_diagonalize: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXd exact_even_coefficients(double g, int branch, const SpectralBasis& basis) {
    const double E = static2b::even_energy(g, branch);
    Eigen::VectorXd c(basis.n_max);
    for (int n = 0; n < basis.n_max; ++n) c(n) = basis.center(n) / (E - basis.energy(n));
    c.normalize();
    if (c(branch) < 0.0) c = -c;  // dominant-mode-positive convention
    return c;
}

namespace {

WaveState default_initial(const Ramp& ramp, const SpectralBasis& basis) {
    WaveState st;
    st.t = 0.0;
    const double g0 = ramp.g(0.0);
    if (g0 == 0.0) {
        st.c = Eigen::VectorXcd::Zero(basis.n_max);
        st.c(0) = 1.0;
    } else {
        st.c = static_diagonalize(g0, basis).vectors.col(0).cast<Cplx>();
    }
    return st;
}

// one Crank-Nicolson step; diagonal-plus-rank-one solve via Sherman-Morrison
void cn_step(Eigen::VectorXcd& c, double g_mid, double dt, const SpectralBasis& basis,
             Eigen::VectorXcd& scratch) {
    const int n = basis.n_max;
    const Cplx half_dt(0.0, 0.5 * dt);
    const Cplx sigma = half_dt * g_mid;
    const auto& E = basis.energy;
    const auto& v = basis.center;

    const Cplx vc = v.cast<Cplx>().dot(c);  // v real: plain inner product
    Eigen::VectorXcd& y = scratch;
    y.resize(n);
    Cplx v_ay = 0.0, v_av = 0.0;
    for (int i = 0; i < n; ++i) {
        const Cplx d(1.0, 0.5 * dt * E(i));
        const Cplx rhs = std::conj(d) * c(i) - sigma * v(i) * vc;
        y(i) = rhs / d;
        v_ay += v(i) * y(i);
        v_av += v(i) * v(i) / d;
    }
    const Cplx corr = sigma * v_ay / (1.0 + sigma * v_av);
    for (int i = 0; i < n; ++i) {
        const Cplx d(1.0, 0.5 * dt * E(i));
        c(i) = y(i) - corr * v(i) / d;
    }
}

Eigen::VectorXcd apply_h(const Eigen::VectorXcd& c, double g, const SpectralBasis& basis) {
    const Cplx vc = basis.center.cast<Cplx>().dot(c);
    return basis.energy.asDiagonal() * c + (g * vc) * basis.center.cast<Cplx>();
}

void rk4_step(Eigen::VectorXcd& c, const Ramp& ramp, double t, double dt,
              const SpectralBasis& basis) {
    const Cplx mi(0.0, -1.0);
    const Eigen::VectorXcd k1 = mi * apply_h(c, ramp.g(t), basis);
    const double g_mid = ramp.g(t + 0.5 * dt);
    const Eigen::VectorXcd k2 = mi * apply_h(c + 0.5 * dt * k1, g_mid, basis);
    const Eigen::VectorXcd k3 = mi * apply_h(c + 0.5 * dt * k2, g_mid, basis);
    const Eigen::VectorXcd k4 = mi * apply_h(c + dt * k3, ramp.g(t + dt), basis);
    c += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Trajectory propagate(const Ramp& ramp, const PropagatorConfig& config, const WaveState* initial) {
    if (!(ramp.t_f > 0.0)) throw PropagationError("propagate: ramp duration must be positive");
    if (!(config.dt > 0.0)) throw PropagationError("propagate: dt must be positive");
    const SpectralBasis basis = SpectralBasis::build(config.n_max);

    WaveState st = initial ? *initial : default_initial(ramp, basis);
    if (st.c.size() != basis.n_max) throw PropagationError("propagate: initial state size mismatch");

    const long n_steps = std::max<long>(1, std::lround(ramp.t_f / config.dt));
    const double dt = ramp.t_f / static_cast<double>(n_steps);

    if (config.scheme == PropagatorConfig::Scheme::explicit_rk4 &&
        basis.energy(basis.n_max - 1) * dt > 2.5)
        throw PropagationError("propagate: explicit scheme unstable at this dt and n_max");

    Trajectory out;
    out.snapshots.push_back({0.0, st.norm(), energy(st, ramp.g(0.0), basis)});

    Eigen::VectorXcd scratch;
    double max_drift = 0.0;
    for (long k = 0; k < n_steps; ++k) {
        const double t = k * dt;
        if (config.scheme == PropagatorConfig::Scheme::implicit_midpoint) {
            cn_step(st.c, ramp.g(t + 0.5 * dt), dt, basis, scratch);
        } else {
            rk4_step(st.c, ramp, t, dt, basis);
        }
        st.t = t + dt;
        const double drift = std::abs(st.norm() - 1.0);
        max_drift = std::max(max_drift, drift);
        if (drift > config.norm_drift_budget * std::max(st.t, 1.0)) {
            std::ostringstream msg;
            msg << "propagate: norm drift " << drift << " at t = " << st.t
                << " exceeds budget " << config.norm_drift_budget << " per unit time";
            throw PropagationError(msg.str());
        }
        if (config.snapshot_stride > 0 && (k + 1) % config.snapshot_stride == 0)
            out.snapshots.push_back({st.t, st.norm(), energy(st, ramp.g(st.t), basis)});
    }
    if (out.snapshots.back().t != st.t)
        out.snapshots.push_back({st.t, st.norm(), energy(st, ramp.g(st.t), basis)});
    out.final_state = std::move(st);
    out.max_norm_drift = max_drift;
    return out;
}

double energy(const WaveState& state, double g, const SpectralBasis& basis) {
    const Cplx vc = basis.center.cast<Cplx>().dot(state.c);
    double e = g * std::norm(vc);
    for (int n = 0; n < basis.n_max; ++n) e += basis.energy(n) * std::norm(state.c(n));
    return e;
}

EnergyProjector::EnergyProjector(double g, const SpectralBasis& basis, int n_exact) {
    const EigenSolution sol = static_diagonalize(g, basis);
    vectors_ = sol.vectors;
    energies_ = sol.values;
    const int k_max = std::min(n_exact, basis.n_max);
    for (int k = 0; k < k_max; ++k) energies_(k) = static2b::even_energy(g, k);
}

double EnergyProjector::projected_energy(const WaveState& state) const {
    const Eigen::VectorXcd p = vectors_.transpose().cast<Cplx>() * state.c;
    double e = 0.0;
    for (int k = 0; k < p.size(); ++k) e += energies_(k) * std::norm(p(k));
    return e / state.c.squaredNorm();
}

Eigen::VectorXd EnergyProjector::occupations(const WaveState& state) const {
    const Eigen::VectorXcd p = vectors_.transpose().cast<Cplx>() * state.c;
    Eigen::VectorXd out(p.size());
    for (int k = 0; k < p.size(); ++k) out(k) = std::norm(p(k));
    return out;
}

Eigen::VectorXcd to_position(const WaveState& state, const SpectralBasis& basis,
                             std::span<const double> x) {
    Eigen::VectorXcd out(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const auto u = specfun::even_oscillator_values(x[i], basis.n_max);
        Cplx acc = 0.0;
        for (int n = 0; n < basis.n_max; ++n) acc += state.c(n) * u[n];
        out(static_cast<Eigen::Index>(i)) = acc;
    }
    return out;
}

// ---- grid cross-check ----

namespace {

struct Tridiag {
    Eigen::VectorXd diag;
    double off;  // constant off-diagonal
};

Tridiag grid_hamiltonian(double g, const std::vector<double>& x, double dx) {
    const int n = static_cast<int>(x.size());
    Tridiag h;
    h.diag.resize(n);
    for (int i = 0; i < n; ++i) h.diag(i) = 1.0 / (dx * dx) + 0.5 * x[i] * x[i];
    h.diag(n / 2) += g / dx;  // contact node
    h.off = -0.5 / (dx * dx);
    return h;
}

std::vector<double> make_grid(const GridConfig& cfg, double& dx) {
    if (cfg.points % 2 == 0) throw ConfigError("grid: odd point count required (contact node)");
    if (!(cfg.extent >= 10.0)) throw ConfigError("grid: extent >= 10 required");
    std::vector<double> x(cfg.points);
    dx = 2.0 * cfg.extent / (cfg.points - 1);
    for (int i = 0; i < cfg.points; ++i) x[i] = -cfg.extent + i * dx;
    return x;
}

// complex tridiagonal Thomas solve with constant off-diagonals
void thomas_solve(const Eigen::VectorXcd& diag, Cplx off, Eigen::VectorXcd& rhs,
                  Eigen::VectorXcd& cp) {
    const int n = static_cast<int>(diag.size());
    cp.resize(n);
    cp(0) = off / diag(0);
    rhs(0) /= diag(0);
    for (int i = 1; i < n; ++i) {
        const Cplx m = diag(i) - off * cp(i - 1);
        cp(i) = off / m;
        rhs(i) = (rhs(i) - off * rhs(i - 1)) / m;
    }
    for (int i = n - 2; i >= 0; --i) rhs(i) -= cp(i) * rhs(i + 1);
}

}  // namespace

GridGround grid_ground(double g, const GridConfig& config) {
    double dx;
    auto x = make_grid(config, dx);
    const int n = config.points;
    const Tridiag h = grid_hamiltonian(g, x, dx);

    // shifted inverse iteration; the implicit-equation energy gives a shift
    // well inside the spectral gap
    double shift;
    try {
        shift = static2b::even_energy(g, 0) - 0.05;
    } catch (const SolverError&) {
        shift = 0.25;
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(n, 1.0);
    for (int i = 0; i < n; ++i) psi(i) = std::exp(-0.25 * x[i] * x[i]);
    Eigen::VectorXcd cp;
    const Eigen::VectorXcd shifted = (h.diag.array() - shift).matrix().cast<Cplx>();
    double e_prev = 0.0, e = 0.0;
    for (int it = 0; it < 80; ++it) {
        thomas_solve(shifted, h.off, psi, cp);
        psi /= std::sqrt(psi.squaredNorm());
        // Rayleigh quotient
        Cplx acc = 0.0;
        for (int i = 0; i < n; ++i) {
            Cplx hp = h.diag(i) * psi(i);
            if (i > 0) hp += h.off * psi(i - 1);
            if (i + 1 < n) hp += h.off * psi(i + 1);
            acc += std::conj(psi(i)) * hp;
        }
        e = acc.real();
        if (it > 2 && std::abs(e - e_prev) < 1e-14 * std::max(1.0, std::abs(e))) break;
        e_prev = e;
    }
    GridGround out;
    out.energy = e;
    out.state.x = std::move(x);
    out.state.dx = dx;
    out.state.psi = psi / std::sqrt(psi.squaredNorm() * dx);
    if (out.state.psi(n / 2).real() < 0.0) out.state.psi = -out.state.psi;
    return out;
}

GridRun grid_propagate(const Ramp& ramp, const GridConfig& config) {
    double dx;
    auto x = make_grid(config, dx);
    const int n = config.points;

    GridGround start = grid_ground(ramp.g(0.0), config);
    Eigen::VectorXcd psi = start.state.psi * std::sqrt(dx);  // unit discrete norm

    const long n_steps = std::max<long>(1, std::lround(ramp.t_f / config.dt));
    const double dt = ramp.t_f / static_cast<double>(n_steps);
    const Cplx half_dt(0.0, 0.5 * dt);

    Eigen::VectorXcd rhs(n), cp(n), diag(n);
    double max_drift = 0.0;
    for (long k = 0; k < n_steps; ++k) {
        const double g_mid = ramp.g((k + 0.5) * dt);
        const Tridiag h = grid_hamiltonian(g_mid, x, dx);
        const Cplx off = half_dt * h.off;
        for (int i = 0; i < n; ++i) {
            diag(i) = 1.0 + half_dt * h.diag(i);
            Cplx r = (1.0 - half_dt * h.diag(i)) * psi(i);
            if (i > 0) r -= half_dt * h.off * psi(i - 1);
            if (i + 1 < n) r -= half_dt * h.off * psi(i + 1);
            rhs(i) = r;
        }
        thomas_solve(diag, off, rhs, cp);
        psi.swap(rhs);
        max_drift = std::max(max_drift, std::abs(std::sqrt(psi.squaredNorm()) - 1.0));
    }

    double odd = 0.0;
    for (int i = 0; i < n; ++i) odd += 0.25 * std::norm(psi(i) - psi(n - 1 - i));

    GridRun out;
    out.final_state.x = std::move(x);
    out.final_state.dx = dx;
    out.final_state.psi = psi / std::sqrt(dx);
    out.max_norm_drift = max_drift;
    out.odd_mass = odd;
    return out;
}

double grid_energy(const GridState& state, double g) {
    const int n = static_cast<int>(state.x.size());
    const Tridiag h = grid_hamiltonian(g, state.x, state.dx);
    Cplx acc = 0.0;
    for (int i = 0; i < n; ++i) {
        Cplx hp = h.diag(i) * state.psi(i);
        if (i > 0) hp += h.off * state.psi(i - 1);
        if (i + 1 < n) hp += h.off * state.psi(i + 1);
        acc += std::conj(state.psi(i)) * hp;
    }
    return acc.real() * state.dx;
}

}  // namespace stira::tdse
