#include "stira/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "stira/errors.hpp"
#include "stira/quadrature.hpp"

namespace stira::specfun {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrt2Pi = 2.5066282746310005024;

// Lanczos g=7, 9-term coefficient set.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
};

double lanczos_sum(double x) {  // x >= 0.5
    double s = kLanczos[0];
    for (int k = 1; k < 9; ++k) s += kLanczos[k] / (x - 1.0 + k);
    return s;
}

double gamma_positive(double x) {  // x >= 0.5
    const double t = x + 6.5;
    return kSqrt2Pi * std::pow(t, x - 0.5) * std::exp(-t) * lanczos_sum(x);
}

double log_gamma_positive(double x) {  // x >= 0.5
    const double t = x + 6.5;
    return 0.5 * std::log(2.0 * M_PI) + (x - 0.5) * std::log(t) - t + std::log(lanczos_sum(x));
}

// sin(pi x) with exact period-2 argument reduction.
double sin_pi(double x) {
    return std::sin(M_PI * std::remainder(x, 2.0));
}

// Kummer M(a, b, z) power series; fine for z <= ~18 where the connection
// formula is used (cancellation against the second term stays below ~1e8).
double kummer_m(double a, double b, double z) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 1000; ++k) {
        term *= (a + k) * z / ((b + k) * (k + 1));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum) && k > 2) return sum;
    }
    return sum;
}

// Connection formula U = sqrt(pi)/Gamma(a+1/2) M(a,1/2,z)
//                      - 2 sqrt(pi)/Gamma(a) sqrt(z) M(a+1/2,3/2,z).
double u_connection(double a, double z) {
    const double alpha = gamma_pole(a + 0.5) ? 0.0 : kSqrtPi / gamma(a + 0.5);
    const double beta = gamma_pole(a) ? 0.0 : -2.0 * kSqrtPi / gamma(a);
    double u = 0.0;
    if (alpha != 0.0) u += alpha * kummer_m(a, 0.5, z);
    if (beta != 0.0) u += beta * std::sqrt(z) * kummer_m(a + 0.5, 1.5, z);
    return u;
}

// Asymptotic series U ~ z^{-a} sum_k (a)_k (a+1/2)_k / (k! (-z)^k),
// truncated at the smallest term.
double u_asymptotic(double a, double z) {
    double term = 1.0, sum = 1.0, prev = std::numeric_limits<double>::max();
    for (int k = 0; k < 200; ++k) {
        term *= -(a + k) * (a + 0.5 + k) / ((k + 1) * z);
        if (std::abs(term) >= prev) break;  // divergent tail reached
        sum += term;
        prev = std::abs(term);
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::pow(z, -a) * sum;
}

// Laplace representation (a > 0):
//   U(a,b,z) = Gamma(a)^{-1} int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt.
// For z >= 1 integrate in tau = z t (peak at tau ~ a, away from the large-z
// boundary layer); for z < 1 the (1+t) factor is the slow one, so integrate
// in t directly with a log-substituted tail.  Heads use s = t^a when a < 1.
double u_integral(double a, double z) {
    const double bma1 = -a - 0.5;  // b - a - 1 with b = 1/2
    double acc;
    if (z >= 1.0) {
        if (a < 1.0) {
            const double inv_a = 1.0 / a;
            acc = adaptive_simpson(
                [&](double s) {
                    const double tau = std::pow(s, inv_a);
                    return inv_a * std::exp(-tau) * std::pow(1.0 + tau / z, bma1);
                },
                0.0, 1.0, 1e-14);
        } else {
            acc = adaptive_simpson(
                [&](double tau) {
                    return std::exp(-tau) * std::pow(tau, a - 1.0) * std::pow(1.0 + tau / z, bma1);
                },
                0.0, 1.0, 1e-14);
        }
        const auto tail = [&](double tau) {
            return std::exp(-tau + (a - 1.0) * std::log(tau)) * std::pow(1.0 + tau / z, bma1);
        };
        const double tau_max = 60.0 + 12.0 * a;
        acc += adaptive_simpson(tail, 1.0, 5.0, 1e-14);
        acc += adaptive_simpson(tail, 5.0, 15.0, 1e-14);
        acc += adaptive_simpson(tail, 15.0, tau_max, 1e-14);
        return std::pow(z, -a) * acc / gamma(a);
    }
    if (a < 1.0) {
        const double inv_a = 1.0 / a;
        acc = adaptive_simpson(
            [&](double s) {
                const double t = std::pow(s, inv_a);
                return inv_a * std::exp(-z * t) * std::pow(1.0 + t, bma1);
            },
            0.0, 1.0, 1e-14);
    } else {
        acc = adaptive_simpson(
            [&](double t) { return std::exp(-z * t) * std::pow(t, a - 1.0) * std::pow(1.0 + t, bma1); },
            0.0, 1.0, 1e-14);
    }
    const double t_max = (60.0 + 12.0 * a) / z;
    acc += adaptive_simpson(
        [&](double u) {
            const double t = std::exp(u);
            return std::exp(-z * t + a * u) * std::pow(1.0 + t, bma1);
        },
        0.0, std::log(t_max), 1e-14);
    return acc / gamma(a);
}

// U at exact non-positive integer a: polynomial, by the downward recurrence
// from U(0) = 1, U(-1) = z - b.
double u_integer(int n, double z) {  // a = -n, n >= 0
    const double b = 0.5;
    double u_hi = 1.0;  // U(0)
    if (n == 0) return u_hi;
    double u = z - b;  // U(-1)
    double acur = -1.0;
    for (int k = 1; k < n; ++k) {
        const double u_lo = (2.0 * acur - b + z) * u - acur * (acur - b + 1.0) * u_hi;
        u_hi = u;
        u = u_lo;
        acur -= 1.0;
    }
    return u;
}

// a <= -1, non-integer: seed at abar, abar+1 in (0, 2] and recur down.
// U is minimal in increasing a, so the downward direction is stable.
double u_ladder(double a, double z) {
    const int m = static_cast<int>(std::ceil(-a));
    const double abar = a + m;  // in (0, 1]
    const double b = 0.5;
    double u_hi = u_integral(abar + 1.0, z);
    double u = u_integral(abar, z);
    double acur = abar;
    for (int k = 0; k < m; ++k) {
        const double u_lo = (2.0 * acur - b + z) * u - acur * (acur - b + 1.0) * u_hi;
        u_hi = u;
        u = u_lo;
        acur -= 1.0;
    }
    return u;
}

constexpr double kUSwitchZ = 18.0;  // cross-validated connection/asymptotic overlap

}  // namespace

bool gamma_pole(double x) {
    return x <= 0.0 && x == std::floor(x);
}

double gamma(double x) {
    if (gamma_pole(x)) throw SolverError("gamma: pole at non-positive integer argument");
    if (x >= 0.5) return gamma_positive(x);
    return M_PI / (sin_pi(x) * gamma_positive(1.0 - x));
}

LogGamma log_gamma(double x) {
    if (gamma_pole(x)) return {-std::numeric_limits<double>::infinity(), 0.0};
    if (x >= 0.5) return {log_gamma_positive(x), 1.0};
    const double s = sin_pi(x);
    return {std::log(M_PI) - std::log(std::abs(s)) - log_gamma_positive(1.0 - x),
            s > 0.0 ? 1.0 : -1.0};
}

double gamma_ratio(double p, double q) {
    const bool p_pole = gamma_pole(p), q_pole = gamma_pole(q);
    if (p_pole && q_pole) throw SolverError("gamma_ratio: both arguments at poles");
    if (q_pole) return 0.0;
    if (p_pole) throw SolverError("gamma_ratio: numerator pole with regular denominator");
    const LogGamma lp = log_gamma(p), lq = log_gamma(q);
    return lp.sign * lq.sign * std::exp(lp.log_abs - lq.log_abs);
}

double kummer_u(double a, double z) {
    if (z < 0.0) throw std::domain_error("kummer_u: z must be non-negative");
    if (a == 0.0) return 1.0;
    if (z == 0.0) return gamma_pole(a + 0.5) ? 0.0 : kSqrtPi / gamma(a + 0.5);
    if (a <= 0.0 && a == std::floor(a)) return u_integer(static_cast<int>(-a), z);
    if (a > 0.0) return u_integral(a, z);
    if (a > -1.0) return z <= kUSwitchZ ? u_connection(a, z) : u_asymptotic(a, z);
    // the asymptotic tail only converges once z dominates a^2
    return z > std::max(kUSwitchZ, 2.5 * a * a) ? u_asymptotic(a, z) : u_ladder(a, z);
}

namespace {

// Normalized recurrence u_{m+1} = x sqrt(2/(m+1)) u_m - sqrt(m/(m+1)) u_{m-1},
// run on mantissas with the Gaussian carried as a shared log-scale so that
// large |x| does not underflow before the classical turning point.
template <typename Sink>
void oscillator_sweep(double x, int m_top, Sink&& sink) {
    double log_scale = -0.5 * x * x;
    double u_prev = std::pow(M_PI, -0.25);  // mantissa of u_0
    sink(0, u_prev, log_scale);
    if (m_top == 0) return;
    double u = x * std::sqrt(2.0) * u_prev;
    sink(1, u, log_scale);
    for (int m = 1; m < m_top; ++m) {
        double u_next = x * std::sqrt(2.0 / (m + 1)) * u - std::sqrt(double(m) / (m + 1)) * u_prev;
        u_prev = u;
        u = u_next;
        if (std::abs(u) > 1e250) {
            const double shrink = std::exp(-500.0);
            u *= shrink;
            u_prev *= shrink;
            log_scale += 500.0;
        }
        sink(m + 1, u, log_scale);
    }
}

double descale(double mantissa, double log_scale) {
    if (log_scale < -745.0) return 0.0;
    return mantissa * std::exp(log_scale);
}

}  // namespace

double oscillator_eigenfunction(int n, double x) {
    if (n < 0) throw std::domain_error("oscillator_eigenfunction: n >= 0 required");
    double out = 0.0;
    oscillator_sweep(x, n, [&](int m, double u, double ls) {
        if (m == n) out = descale(u, ls);
    });
    return out;
}

std::vector<double> even_oscillator_values(double x, int count) {
    std::vector<double> out(count);
    oscillator_sweep(x, 2 * (count - 1), [&](int m, double u, double ls) {
        if (m % 2 == 0) out[m / 2] = descale(u, ls);
    });
    return out;
}

std::vector<double> even_oscillator_center_values(int count) {
    std::vector<double> v(count);
    v[0] = std::pow(M_PI, -0.25);
    for (int n = 1; n < count; ++n) {
        const int m = 2 * n - 1;  // u_{2n}(0) = -sqrt(m/(m+1)) u_{2n-2}(0)
        v[n] = -std::sqrt(double(m) / (m + 1)) * v[n - 1];
    }
    return v;
}

}  // namespace stira::specfun
