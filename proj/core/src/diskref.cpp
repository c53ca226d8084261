#include "lowfreq/diskref.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lowfreq/specfun.hpp"

namespace lowfreq::diskref {

namespace {

constexpr double pi = 3.14159265358979323846;

// 16-point Gauss-Legendre rule on [-1, 1], positive half; nodes are the
// roots of P_16 found by Newton from the Chebyshev initial guess.
struct GaussRule {
    std::array<double, 8> x{};
    std::array<double, 8> w{};
};

const GaussRule& gl16() {
    static const GaussRule rule = [] {
        GaussRule r;
        constexpr int n = 16;
        for (int i = 0; i < 8; ++i) {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
                }
                pp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-15) break;
            }
            r.x[static_cast<size_t>(i)] = z;
            r.w[static_cast<size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
        return r;
    }();
    return rule;
}

int truncation_order(double x) {
    return static_cast<int>(std::ceil(x + 8.0 * (1.0 + std::cbrt(x))));
}

// sum_{l} m_l / (J_l(s)^2 + Y_l(s)^2), m_0 = 1 and m_l = 2 otherwise;
// orders whose Y has left the double range contribute zero.
double modulus_sum(double s, int l_max) {
    const auto j = specfun::bessel_j_array(l_max, s);
    double y_prev = (s <= 2.0) ? specfun::detail::bessel_y_series(0, s)
                  : (s > 20.0) ? specfun::detail::bessel_y_asymptotic(0, s)
                               : specfun::detail::bessel_y_neumann(0, s);
    double acc = 1.0 / (j[0] * j[0] + y_prev * y_prev);
    if (l_max == 0) return acc;
    double y = (s <= 2.0) ? specfun::detail::bessel_y_series(1, s)
             : (s > 20.0) ? specfun::detail::bessel_y_asymptotic(1, s)
                          : specfun::detail::bessel_y_neumann(1, s);
    for (int l = 1; l <= l_max; ++l) {
        acc += 2.0 / (j[static_cast<size_t>(l)] * j[static_cast<size_t>(l)] + y * y);
        if (l == l_max) break;
        const double yn = 2.0 * l / s * y - y_prev;
        if (std::abs(yn) > 1e150) break; // remaining orders contribute 0
        y_prev = y;
        y = yn;
    }
    return acc;
}

// Integrate (2/pi) sum_l m_l/|H_l(2 e^u)|^2 over u in [ua, ub] with
// composite 16-point Gauss-Legendre panels.
double phase_integral(double ua, double ub, int l_max, double panel_width) {
    const int n_panels = std::max(1, static_cast<int>(std::ceil((ub - ua) / panel_width)));
    const double h = (ub - ua) / n_panels;
    const GaussRule& g = gl16();
    double acc = 0.0;
    for (int p = 0; p < n_panels; ++p) {
        const double c = ua + (p + 0.5) * h;
        double panel = 0.0;
        for (size_t q = 0; q < g.x.size(); ++q) {
            const double dp = 0.5 * h * g.x[q];
            panel += g.w[q] * (modulus_sum(2.0 * std::exp(c + dp), l_max)
                               + modulus_sum(2.0 * std::exp(c - dp), l_max));
        }
        acc += 0.5 * h * panel;
    }
    return (2.0 / pi) * acc;
}

// Closed form of the l = 0 contribution below u_cut, where
// |H_0|^2 = 1 + (4/pi^2)(u + gamma)^2 up to O(e^{2u}) corrections.
double l0_tail(double u_cut) {
    return std::atan((2.0 / pi) * (u_cut + specfun::euler_gamma)) + pi / 2.0;
}

} // namespace

std::complex<double> smatrix_entry(int ell, double lambda_rho) {
    if (!(lambda_rho > 0.0)) throw DomainError("smatrix_entry requires lambda rho > 0");
    const int l = std::abs(ell); // H_{-l} = (-1)^l H_l cancels in the ratio
    const std::complex<double> h = specfun::hankel1(l, lambda_rho);
    const double phase = pi - 2.0 * std::arg(h); // -conj(h)/h on the unit circle
    return {std::cos(phase), std::sin(phase)};
}

SsfValue ssf_disk(double rho, double mu, double tol) {
    if (!(rho > 0.0) || !(mu > 0.0)) throw DomainError("ssf_disk requires rho, mu > 0");
    const double x = rho * std::sqrt(mu);
    const int l_max = truncation_order(x);
    const double u_max = std::log(x / 2.0);
    constexpr double u_tail = -20.0; // below this, only l = 0 contributes

    double sum; // sum over l of the continuous phase increments
    if (u_max <= u_tail) {
        sum = l0_tail(u_max);
        return {sum / pi, 1};
    }
    sum = l0_tail(u_tail) + phase_integral(u_tail, u_max, l_max, 0.4);

    // size of the first dropped order; the phase shift of order l is
    // asymptotically -J_l/Y_l
    const double j_top = specfun::bessel_j(l_max + 1, x);
    double tail_term = 0.0;
    if (j_top != 0.0) {
        const double y_top = specfun::bessel_y(l_max + 1, x);
        tail_term = 2.0 * std::abs(j_top / y_top) / pi;
        if (tail_term > tol)
            throw NonConvergentSum("ssf_disk: truncation tail above tolerance");
    }
    return {sum / pi, l_max + 1};
}

double phase_disk(double rho, double lambda, double tol) {
    if (!(lambda > 0.0)) throw DomainError("phase_disk requires lambda > 0");
    return -ssf_disk(rho, lambda * lambda, tol).value;
}

double dtn_disk_lowest(double rho, double kappa) {
    if (!(rho > 0.0) || !(kappa > 0.0))
        throw DomainError("dtn_disk_lowest requires rho, kappa > 0");
    const double z = kappa * rho;
    return kappa * specfun::bessel_k(1, z) / specfun::bessel_k(0, z);
}

} // namespace lowfreq::diskref
