#ifndef LOWFREQ_SPECFUN_HPP
#define LOWFREQ_SPECFUN_HPP

#include <complex>
#include <vector>

#include "lowfreq/errors.hpp"

// Real-argument, integer-order cylinder functions (J, Y, H1, H2, K0, K1),
// digamma at positive integers, and the outgoing free-field kernel
// (i/4) H0^(1)(lambda r) continued to the logarithmic Riemann surface.
//
// Regime split: power series for x <= 2 at orders 0,1; Miller backward
// recurrence for J elsewhere; Y0,Y1 from Neumann series over the J array for
// 2 < x <= 20 and from the large-argument expansions beyond; upward
// recurrence in the order for Y_n. K0,K1 use their own series /
// cosh-integral / asymptotic split. Each pair of regimes is cross-checked in
// the overlap by the test suite.
//
// All functions are pure and thread-safe.

namespace lowfreq::specfun {

inline constexpr double euler_gamma = 0.5772156649015328606;

// Point on the Riemann surface of the logarithm: modulus > 0 and an
// unbounded argument (the sheet is part of the value).
struct LogPoint {
    double modulus;
    double argument;

    std::complex<double> log() const {
        return {std::log(modulus), argument};
    }
    std::complex<double> value() const {
        return std::polar(modulus, argument);
    }
};

// psi(m) = -gamma + sum_{i=1}^{m-1} 1/i, m >= 1.
double digamma_nat(int m);

// J_n(x), n >= 0, x > 0. Throws OrderOverflow if n exceeds max_order.
double bessel_j(int order, double x, int max_order = 10000);

// Y_n(x), n >= 0, x > 0. Throws BesselOverflow when the upward recurrence
// leaves the double range (large n, small x).
double bessel_y(int order, double x, int max_order = 10000);

// H_n^(1)(x) = J_n(x) + i Y_n(x); H_n^(2) is its conjugate for real x > 0.
std::complex<double> hankel1(int order, double x, int max_order = 10000);
std::complex<double> hankel2(int order, double x, int max_order = 10000);

// K_0, K_1 (modified Bessel, second kind), x > 0.
double bessel_k(int order, double x);

// (i/4) H_0^(1)(lambda r) for lambda on the log surface. Within |lambda| r
// <= 2 the series continuation is used for any argument; beyond that only
// the real axis (J,Y) and the positive imaginary axis (K_0) are supported.
std::complex<double> free_resolvent_kernel(const LogPoint& lambda, double r);

// J_0..J_n at one argument from a single backward-recurrence pass.
std::vector<double> bessel_j_array(int n_max, double x);

namespace detail {
// Individual evaluation paths, exposed so the tests can compare regimes in
// their overlap regions.
double bessel_j_series(int order, double x);   // orders 0,1, any x (cancellation grows with x)
double bessel_y_series(int order, double x);   // orders 0,1, log power series
double bessel_j_miller(int order, double x);   // backward recurrence, any order
double bessel_y_neumann(int order, double x);  // orders 0,1, Neumann series over J_k
double bessel_j_asymptotic(int order, double x); // orders 0,1, x > ~18
double bessel_y_asymptotic(int order, double x);
double bessel_k_series(int order, double x);
double bessel_k_coshint(int order, double x);  // trapezoidal cosh integral
double bessel_k_asymptotic(int order, double x);
// H_0^(1)(z) by the defining series with log z supplied explicitly
// (analytic continuation in the argument).
std::complex<double> hankel1_0_series_log(std::complex<double> z2_over_m4,
                                          std::complex<double> log_half);
} // namespace detail

} // namespace lowfreq::specfun

#endif
