#include "lowfreq/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lowfreq::specfun {

namespace {

constexpr double pi = 3.14159265358979323846;

void check_args(int order, double x, int max_order) {
    if (order < 0) throw DomainError("cylinder function order must be >= 0");
    if (!(x > 0.0)) throw DomainError("cylinder function argument must be > 0");
    if (order > max_order) throw OrderOverflow("order exceeds configured maximum");
}

} // namespace

double digamma_nat(int m) {
    if (m < 1) throw DomainError("digamma_nat requires m >= 1");
    double s = -euler_gamma;
    for (int i = 1; i < m; ++i) s += 1.0 / i;
    return s;
}

namespace detail {

// J_0 or J_1 by the defining power series. Accurate to ~1e-15 relative for
// x <= 2; cancellation grows like e^x beyond.
double bessel_j_series(int order, double x) {
    const double q = -x * x / 4.0;
    double term = (order == 0) ? 1.0 : x / 2.0;
    double sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= q / (m * (m + order));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

// Y_0, Y_1 by their logarithmic power series.
double bessel_y_series(int order, double x) {
    const double q = -x * x / 4.0;
    const double lg = std::log(x / 2.0);
    if (order == 0) {
        // (2/pi)[(log(x/2)+gamma) J0 - sum_{m>=1} H_m q^m/(m!)^2]
        double jterm = 1.0, hsum = 0.0, acc = 0.0;
        for (int m = 1; m < 200; ++m) {
            jterm *= q / (m * m);
            hsum += 1.0 / m;
            const double t = hsum * jterm;
            acc += t;
            if (std::abs(t) < 1e-17 * (std::abs(acc) + 1.0)) break;
        }
        return (2.0 / pi) * ((lg + euler_gamma) * bessel_j_series(0, x) - acc);
    }
    // Y1 = (2/pi) log(x/2) J1 - 2/(pi x)
    //      - (x/(2 pi)) sum_{k>=0} (psi(k+1)+psi(k+2)) q^k/(k!(k+1)!)
    double term = 1.0;                 // q^k/(k!(k+1)!)
    double psum = -2.0 * euler_gamma + 1.0; // psi(k+1)+psi(k+2) at k = 0
    double acc = psum * term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (k * (k + 1));
        psum += 1.0 / k + 1.0 / (k + 1);
        const double t = psum * term;
        acc += t;
        if (std::abs(t) < 1e-17 * (std::abs(acc) + 1.0)) break;
    }
    return (2.0 / pi) * lg * bessel_j_series(1, x) - 2.0 / (pi * x)
           - x / (2.0 * pi) * acc;
}

namespace {

// Backward (Miller) recurrence normalized by J0 + 2 sum J_{2k} = 1.
// Returns J_0..J_{n_max}.
std::vector<double> miller_array(int n_max, double x) {
    const int start = std::max(n_max, static_cast<int>(std::ceil(
                          x + 8.0 * (1.0 + std::cbrt(x))))) + 24;
    std::vector<double> j(static_cast<size_t>(n_max) + 1, 0.0);
    double jp2 = 0.0, jp1 = 1e-280;
    double norm = 0.0;
    for (int k = start; k >= 1; --k) {
        double jk = 2.0 * k / x * jp1 - jp2;
        jp2 = jp1;
        jp1 = jk;
        const int idx = k - 1;
        if (std::abs(jp1) > 1e280) { // rescale to avoid overflow
            jp1 *= 1e-280;
            jp2 *= 1e-280;
            norm *= 1e-280;
            for (auto& v : j) v *= 1e-280;
        }
        if (idx <= n_max) j[idx] = jp1;
        if (idx >= 2 && idx % 2 == 0) norm += 2.0 * jp1;
    }
    norm += jp1; // jp1 now holds the unnormalized J_0
    for (auto& v : j) v /= norm;
    return j;
}

// Large-argument Hankel expansion pieces: J_n = sqrt(2/(pi x)) (P cos chi - Q sin chi),
// Y_n = sqrt(2/(pi x)) (P sin chi + Q cos chi), chi = x - (2n+1) pi/4.
void hankel_asymptotic_pq(int order, double x, double& p, double& q) {
    const double mu = 4.0 * order * order;
    p = 1.0;
    q = 0.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k < 60; ++k) {
        const double num = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
        term *= num / (k * 8.0 * x);
        if (std::abs(term) >= prev) break; // divergence floor of the expansion
        prev = std::abs(term);
        const int r = k % 4;
        if (r == 1) q += term;
        else if (r == 2) p -= term;
        else if (r == 3) q -= term;
        else p += term;
        if (std::abs(term) < 1e-18) break;
    }
}

} // namespace

double bessel_j_miller(int order, double x) {
    return miller_array(order, x)[static_cast<size_t>(order)];
}

double bessel_j_asymptotic(int order, double x) {
    double p, q;
    hankel_asymptotic_pq(order, x, p, q);
    const double chi = x - (2.0 * order + 1.0) * pi / 4.0;
    return std::sqrt(2.0 / (pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_y_asymptotic(int order, double x) {
    double p, q;
    hankel_asymptotic_pq(order, x, p, q);
    const double chi = x - (2.0 * order + 1.0) * pi / 4.0;
    return std::sqrt(2.0 / (pi * x)) * (p * std::sin(chi) + q * std::cos(chi));
}

// Neumann-series route to Y0, Y1 built on the Miller J array; no
// cancellation at moderate x where the log series has lost digits.
//   Y0 = (2/pi)(log(x/2)+gamma) J0 + (4/pi) sum_{k>=1} (-1)^{k+1} J_{2k}/k
//   Y1 = (2/pi)(log(x/2)+gamma) J1 - (2/(pi x)) J0
//        - (2/pi)[J1 + sum_{k>=1} (-1)^k (1/k + 1/(k+1)) J_{2k+1}]
double bessel_y_neumann(int order, double x) {
    const int kmax = static_cast<int>(std::ceil(x + 8.0 * (1.0 + std::cbrt(x)))) + 6;
    const auto j = miller_array(2 * kmax + 1, x);
    const double lg = std::log(x / 2.0) + euler_gamma;
    if (order == 0) {
        double s = 0.0;
        for (int k = kmax; k >= 1; --k) {
            const double t = j[static_cast<size_t>(2 * k)] / k;
            s += (k % 2 == 1) ? t : -t;
        }
        return (2.0 / pi) * lg * j[0] + (4.0 / pi) * s;
    }
    double s = 0.0;
    for (int k = kmax; k >= 1; --k) {
        const double t = (1.0 / k + 1.0 / (k + 1)) * j[static_cast<size_t>(2 * k + 1)];
        s += (k % 2 == 0) ? t : -t;
    }
    return (2.0 / pi) * lg * j[1] - 2.0 / (pi * x) * j[0] - (2.0 / pi) * (j[1] + s);
}

double bessel_k_series(int order, double x) {
    const double q = x * x / 4.0;
    const double lg = std::log(x / 2.0) + euler_gamma;
    if (order == 0) {
        // -(log(x/2)+gamma) I0 + sum_{m>=1} H_m q^m/(m!)^2
        double iterm = 1.0, i0 = 1.0, hsum = 0.0, acc = 0.0;
        for (int m = 1; m < 200; ++m) {
            iterm *= q / (m * m);
            i0 += iterm;
            hsum += 1.0 / m;
            acc += hsum * iterm;
            if (iterm < 1e-18 * i0) break;
        }
        return -lg * i0 + acc;
    }
    // K1 = (1/x) I0 + (log(x/2)+gamma) I1
    //      - (x/2) sum_{m>=1} H_m q^{m-1}/((m-1)! m!)
    double i0 = 1.0, i1term = 1.0, i1 = 0.0, acc = 0.0, hsum = 0.0;
    double iterm = 1.0;
    for (int m = 1; m < 200; ++m) {
        hsum += 1.0 / m;
        acc += hsum * i1term;          // H_m q^{m-1}/((m-1)! m!)
        i1 += i1term;                  // I1 = (x/2) sum q^{m-1}/((m-1)! m!)
        iterm *= q / (m * m);
        i0 += iterm;
        i1term *= q / (m * (m + 1));
        if (i1term < 1e-18 * (i1 + 1.0) && iterm < 1e-18 * i0) break;
    }
    return i0 / x + lg * (x / 2.0) * i1 - (x / 2.0) * acc;
}

// Trapezoidal rule on K_n(x) = int_0^inf e^{-x cosh t} cosh(n t) dt.
// The integrand is analytic and decays doubly exponentially, so the
// trapezoid converges geometrically; h is chosen so the discretization
// error stays below the e^{-x} scale of the result.
double bessel_k_coshint(int order, double x) {
    const double h = pi * pi / (x + 45.0);
    const double tmax = std::acosh(1.0 + 50.0 / x);
    double sum = 0.5 * 1.0; // t = 0: e^{-x cosh 0} cosh(0) / e^{-x} scale handled below
    const int n = static_cast<int>(std::ceil(tmax / h));
    for (int k = 1; k <= n; ++k) {
        const double t = k * h;
        const double w = (order == 0) ? 1.0 : std::cosh(t);
        sum += w * std::exp(-x * (std::cosh(t) - 1.0));
    }
    return h * sum * std::exp(-x);
}

double bessel_k_asymptotic(int order, double x) {
    const double mu = 4.0 * order * order;
    double term = 1.0, sum = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k < 60; ++k) {
        term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
        if (std::abs(term) >= prev) break;
        prev = std::abs(term);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return std::sqrt(pi / (2.0 * x)) * std::exp(-x) * sum;
}

std::complex<double> hankel1_0_series_log(std::complex<double> minus_z2_over_4,
                                          std::complex<double> log_half) {
    // H0^(1) = sum_m ((2i/pi) log(z/2) - (2i/pi) psi(m+1) + 1) (-z^2/4)^m / (m!)^2
    const std::complex<double> two_i_over_pi(0.0, 2.0 / pi);
    std::complex<double> pw(1.0, 0.0);
    double psi = -euler_gamma;
    std::complex<double> sum = two_i_over_pi * (log_half - psi) + 1.0;
    for (int m = 1; m < 60; ++m) {
        pw *= minus_z2_over_4 / static_cast<double>(m * m);
        psi += 1.0 / m;
        const std::complex<double> term = (two_i_over_pi * (log_half - psi) + 1.0) * pw;
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    }
    return sum;
}

} // namespace detail

std::vector<double> bessel_j_array(int n_max, double x) {
    if (n_max < 0) throw DomainError("bessel_j_array requires n_max >= 0");
    if (!(x > 0.0)) throw DomainError("bessel_j_array requires x > 0");
    return detail::miller_array(n_max, x);
}

double bessel_j(int order, double x, int max_order) {
    check_args(order, x, max_order);
    if (order <= 1) {
        if (x <= 2.0) return detail::bessel_j_series(order, x);
        if (x > 20.0) return detail::bessel_j_asymptotic(order, x);
    }
    return detail::bessel_j_miller(order, x);
}

double bessel_y(int order, double x, int max_order) {
    check_args(order, x, max_order);
    auto y01 = [&](int n) {
        if (x <= 2.0) return detail::bessel_y_series(n, x);
        if (x > 20.0) return detail::bessel_y_asymptotic(n, x);
        return detail::bessel_y_neumann(n, x);
    };
    if (order == 0) return y01(0);
    double ym = y01(0), yk = y01(1);
    for (int k = 1; k < order; ++k) {
        const double yn = 2.0 * k / x * yk - ym;
        if (std::abs(yn) > 1e305) {
            throw BesselOverflow("bessel_y overflow at order " + std::to_string(k + 1),
                                 yn > 0 ? 1 : -1);
        }
        ym = yk;
        yk = yn;
    }
    return yk;
}

std::complex<double> hankel1(int order, double x, int max_order) {
    return {bessel_j(order, x, max_order), bessel_y(order, x, max_order)};
}

std::complex<double> hankel2(int order, double x, int max_order) {
    return std::conj(hankel1(order, x, max_order));
}

double bessel_k(int order, double x) {
    if (order != 0 && order != 1) throw DomainError("bessel_k supports orders 0 and 1");
    if (!(x > 0.0)) throw DomainError("bessel_k argument must be > 0");
    if (x <= 4.0) return detail::bessel_k_series(order, x);
    if (x >= 20.0) return detail::bessel_k_asymptotic(order, x);
    return detail::bessel_k_coshint(order, x);
}

std::complex<double> free_resolvent_kernel(const LogPoint& lambda, double r) {
    if (!(r > 0.0)) throw DomainError("free_resolvent_kernel requires r > 0");
    if (!(lambda.modulus > 0.0)) throw DomainError("LogPoint modulus must be > 0");
    const double xr = lambda.modulus * r;
    const std::complex<double> quarter_i(0.0, 0.25);
    if (xr <= 2.0) {
        // analytic continuation of the series in arg(lambda)
        const std::complex<double> log_zr = std::log(xr)
            + std::complex<double>(0.0, lambda.argument);
        const std::complex<double> zr2 = std::exp(2.0 * log_zr);
        return quarter_i * detail::hankel1_0_series_log(-zr2 / 4.0,
                                                        log_zr - std::log(2.0));
    }
    const double a = lambda.argument;
    if (std::abs(a) < 1e-12) {
        return quarter_i * hankel1(0, xr);
    }
    if (std::abs(a - pi / 2.0) < 1e-12) {
        // (i/4) H0^(1)(i s) = (1/(2 pi)) K0(s)
        return {bessel_k(0, xr) / (2.0 * pi), 0.0};
    }
    throw DomainError("free_resolvent_kernel: |lambda| r > 2 supported only on "
                      "the real and positive-imaginary rays");
}

} // namespace lowfreq::specfun
