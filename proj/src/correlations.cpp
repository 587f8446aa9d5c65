#include "stira/correlations.hpp"

#include <algorithm>
#include <cmath>

#include "stira/errors.hpp"

namespace stira::correlations {

namespace {
using Cplx = std::complex<double>;

// natural cubic spline with complex values (tridiagonal moment solve)
class ComplexSpline {
  public:
    ComplexSpline(std::span<const double> x, std::span<const Cplx> y)
        : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
        const size_t n = x_.size();
        if (n < 3) throw ConfigError("spline: need at least 3 samples");
        for (size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i + 1] > x_[i])) throw ConfigError("spline: abscissae must increase");
        m_.assign(n, Cplx(0.0));
        std::vector<double> diag(n, 0.0), sub(n, 0.0);
        std::vector<Cplx> rhs(n, Cplx(0.0));
        diag[0] = diag[n - 1] = 1.0;
        for (size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            sub[i] = h0;
            diag[i] = 2.0 * (h0 + h1);
            rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        }
        // forward elimination on the tridiagonal (upper diagonal = h1 values)
        std::vector<double> up(n, 0.0);
        for (size_t i = 1; i + 1 < n; ++i) up[i] = x_[i + 1] - x_[i];
        for (size_t i = 1; i < n; ++i) {
            const double m = sub[i] / diag[i - 1];
            diag[i] -= m * up[i - 1];
            rhs[i] -= m * rhs[i - 1];
        }
        m_[n - 1] = rhs[n - 1] / diag[n - 1];
        for (size_t i = n - 1; i-- > 0;) m_[i] = (rhs[i] - up[i] * m_[i + 1]) / diag[i];
    }

    Cplx operator()(double x) const {
        if (x < x_.front() - 1e-9 || x > x_.back() + 1e-9)
            throw std::domain_error("spline: abscissa outside the sampled range");
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        size_t i = static_cast<size_t>(std::distance(x_.begin(), it));
        i = std::min(std::max<size_t>(i, 1), x_.size() - 1) - 1;
        const double h = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * (h * h) / 6.0;
    }

  private:
    std::vector<double> x_;
    std::vector<Cplx> y_;
    std::vector<Cplx> m_;  // second derivatives
};

Eigen::MatrixXd weight_sqrt(const Grid1d& g) {
    Eigen::VectorXd sw(g.w.size());
    for (size_t i = 0; i < g.w.size(); ++i) sw(static_cast<Eigen::Index>(i)) = std::sqrt(g.w[i]);
    return sw.asDiagonal();
}

Eigen::VectorXd symmetrized_spectrum(const Grid1d& grid, const Eigen::MatrixXcd& kernel) {
    const Eigen::Index n = kernel.rows();
    Eigen::VectorXd sw(n);
    for (Eigen::Index i = 0; i < n; ++i) sw(i) = std::sqrt(grid.w[static_cast<size_t>(i)]);
    Eigen::MatrixXcd m = sw.asDiagonal() * kernel * sw.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw SolverError("correlations: eigensolver failed");
    return es.eigenvalues();
}

}  // namespace

Grid1d Grid1d::uniform(double extent, int points) {
    if (points < 8) throw ConfigError("Grid1d: too few points");
    Grid1d g;
    g.x.resize(points);
    g.w.resize(points);
    const double dx = 2.0 * extent / (points - 1);
    for (int i = 0; i < points; ++i) {
        g.x[i] = -extent + i * dx;
        g.w[i] = dx;
    }
    g.w.front() *= 0.5;
    g.w.back() *= 0.5;
    return g;
}

bool Grid1d::same_as(const Grid1d& other) const {
    return x.size() == other.x.size() && x.front() == other.x.front() && x.back() == other.x.back();
}

TwoBodyState assemble_two_body(std::span<const double> rel_x,
                               std::span<const Cplx> rel_values, const Grid1d& grid) {
    const double needed = std::sqrt(2.0) * std::max(std::abs(grid.x.front()), std::abs(grid.x.back()));
    if (rel_x.front() > -needed || rel_x.back() < needed)
        throw ConfigError("assemble_two_body: relative samples do not cover the rotated range");
    const ComplexSpline phi(rel_x, rel_values);

    const int n = static_cast<int>(grid.x.size());
    TwoBodyState psi;
    psi.grid = grid;
    psi.amp.resize(n, n);
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const double com_norm = std::pow(M_PI, -0.25);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double X = (grid.x[i] + grid.x[j]) * inv_sqrt2;
            const double xr = (grid.x[i] - grid.x[j]) * inv_sqrt2;
            const Cplx value = com_norm * std::exp(-0.5 * X * X) * phi(xr);
            psi.amp(i, j) = value;
            psi.amp(j, i) = value;  // even relative factor: bosonic symmetry
        }
    }
    // renormalize under the weighted double sum
    double nrm2 = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            nrm2 += grid.w[i] * grid.w[j] * std::norm(psi.amp(i, j));
    psi.amp /= std::sqrt(nrm2);
    return psi;
}

RSPDM rspdm(const TwoBodyState& psi) {
    const int n = static_cast<int>(psi.grid.x.size());
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = psi.grid.w[i];
    RSPDM out;
    out.grid = psi.grid;
    out.rho = psi.amp * w.asDiagonal() * psi.amp.adjoint();
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += w(i) * out.rho(i, i).real();
    out.raw_trace = tr;
    out.rho /= tr;
    return out;
}

Eigen::VectorXd schmidt_spectrum(const RSPDM& rho) {
    Eigen::VectorXd lam = symmetrized_spectrum(rho.grid, rho.rho);
    std::sort(lam.data(), lam.data() + lam.size(), std::greater<double>());
    return lam;
}

double entropy(const RSPDM& rho) {
    const Eigen::VectorXd lam = schmidt_spectrum(rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        double l = lam(i);
        if (l < -1e-9)
            throw SolverError("entropy: significantly negative Schmidt weight");
        if (l <= 0.0) continue;
        l = std::min(l, 1.0);
        s -= l * std::log2(l);
    }
    return s;
}

double trace_distance(const RSPDM& a, const RSPDM& b) {
    if (!a.grid.same_as(b.grid)) throw ConfigError("trace_distance: grids differ");
    const Eigen::VectorXd mu = symmetrized_spectrum(a.grid, a.rho - b.rho);
    double t = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) t += std::abs(mu(i));
    return std::clamp(0.5 * t, 0.0, 1.0);
}

EntanglementReport make_report(const RSPDM& state, const RSPDM& target, double s_target) {
    EntanglementReport r;
    r.S = entropy(state);
    const Eigen::VectorXd lam = schmidt_spectrum(state);
    r.schmidt_rank = static_cast<int>((lam.array() > 1e-8).count());
    r.delta_S = delta_entropy(r.S, s_target);
    r.T_D = trace_distance(state, target);
    return r;
}

}  // namespace stira::correlations
