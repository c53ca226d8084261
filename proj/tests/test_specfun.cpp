#include <doctest.h>

#include <cmath>
#include <complex>

#include "lowfreq/specfun.hpp"
#include "oracles.hpp"

using namespace lowfreq;
using specfun::LogPoint;
using std::complex;

namespace {
constexpr double pi = 3.14159265358979323846;
constexpr double gamma_e = specfun::euler_gamma;
} // namespace

TEST_CASE("digamma at positive integers") {
    CHECK(specfun::digamma_nat(1) == doctest::Approx(-0.5772156649015329).epsilon(1e-15));
    CHECK(specfun::digamma_nat(2) == doctest::Approx(0.4227843350984671).epsilon(1e-15));
    CHECK(specfun::digamma_nat(4)
          == doctest::Approx(11.0 / 6.0 - gamma_e).epsilon(1e-15));
    // recurrence psi(m+1) = psi(m) + 1/m up the chain
    for (int m = 1; m < 40; ++m) {
        CHECK(specfun::digamma_nat(m + 1)
              == doctest::Approx(specfun::digamma_nat(m) + 1.0 / m).epsilon(1e-14));
    }
    CHECK_THROWS_AS(specfun::digamma_nat(0), DomainError);
}

TEST_CASE("bessel_j limits and root") {
    CHECK(specfun::bessel_j(0, 1e-9) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(specfun::bessel_j(1, 1e-9)) < 1e-9);

    // locate the first root of J0 on the series oracle, then check the
    // implementation vanishes there
    const double root = oracles::bisect(
        [](double x) { return oracles::bessel_j_series(0, x); }, 2.0, 3.0, 1e-14);
    CHECK(root == doctest::Approx(2.404825557695773).epsilon(1e-12));
    CHECK(std::abs(specfun::bessel_j(0, root)) < 1e-12);

    CHECK_THROWS_AS(specfun::bessel_j(11, 1.0, 10), OrderOverflow);
}

TEST_CASE("bessel_j against the integral representation") {
    for (const auto [n, x] : {std::pair{0, 1.0}, {0, 5.0}, {1, 2.5}, {5, 10.0},
                              {7, 13.7}, {12, 3.0}, {20, 27.0}}) {
        CHECK(specfun::bessel_j(n, x)
              == doctest::Approx(oracles::bessel_j_integral(n, x)).epsilon(5e-11));
    }
}

TEST_CASE("bessel_y small-argument law and Wronskian pin") {
    // Y0 ~ (2/pi)(log(x/2) + gamma)
    const double x = 1e-4;
    CHECK(specfun::bessel_y(0, x)
          == doctest::Approx((2.0 / pi) * (std::log(x / 2.0) + gamma_e)).epsilon(1e-7));

    // J0(1) Y1(1) - J1(1) Y0(1) = -2/pi
    const double w = specfun::bessel_j(0, 1.0) * specfun::bessel_y(1, 1.0)
                   - specfun::bessel_j(1, 1.0) * specfun::bessel_y(0, 1.0);
    CHECK(std::abs(w + 2.0 / pi) < 1e-10);

    // Y1 ~ -2/(pi x)
    CHECK(specfun::bessel_y(1, 1e-5) * 1e-5 == doctest::Approx(-2.0 / pi).epsilon(1e-8));
}

TEST_CASE("bessel_y order 5 via recurrence oracle and integral") {
    // upward recurrence from the order 0,1 values, done independently here
    const double x = 10.0;
    double ym = specfun::bessel_y(0, x), yk = specfun::bessel_y(1, x);
    for (int k = 1; k < 5; ++k) {
        const double yn = 2.0 * k / x * yk - ym;
        ym = yk;
        yk = yn;
    }
    CHECK(specfun::bessel_y(5, x) == doctest::Approx(yk).epsilon(1e-10));
    CHECK(specfun::bessel_y(5, x)
          == doctest::Approx(oracles::bessel_y_integral(5, x)).epsilon(1e-9));
}

TEST_CASE("bessel_y overflow policy") {
    CHECK_THROWS_AS(specfun::bessel_y(400, 1e-3), BesselOverflow);
    try {
        specfun::bessel_y(400, 1e-3);
    } catch (const BesselOverflow& e) {
        CHECK((e.sign == 1 || e.sign == -1));
    }
}

TEST_CASE("hankel series path vs recurrence path on (0, 2]") {
    // the production route for x <= 2 is the series; compare against the
    // backward-recurrence + Neumann-series route on the same interval
    double worst = 0.0;
    for (int i = 1; i <= 40; ++i) {
        const double x = 2.0 * i / 40.0;
        const complex<double> series{specfun::detail::bessel_j_series(0, x),
                                     specfun::detail::bessel_y_series(0, x)};
        const complex<double> recur{specfun::detail::bessel_j_miller(0, x),
                                    specfun::detail::bessel_y_neumann(0, x)};
        worst = std::max(worst, std::abs(series - recur));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("hankel1 equals the defining series for order 0") {
    for (const double x : {0.05, 0.3, 1.0, 1.7, 2.0}) {
        const auto ref = oracles::hankel1_0_series(complex<double>(std::log(x), 0.0));
        CHECK(std::abs(specfun::hankel1(0, x) - ref) < 1e-10);
    }
}

TEST_CASE("hankel2 is the conjugate of hankel1") {
    for (const auto [n, x] : {std::pair{0, 0.5}, {1, 3.0}, {6, 11.0}}) {
        const auto h1 = specfun::hankel1(n, x);
        const auto h2 = specfun::hankel2(n, x);
        CHECK(h2.real() == h1.real()); // bitwise by construction
        CHECK(h2.imag() == -h1.imag());
    }
    // series check at (0, 0.5)
    const auto ref = std::conj(oracles::hankel1_0_series({std::log(0.5), 0.0}));
    CHECK(std::abs(specfun::hankel2(0, 0.5) - ref) < 1e-10);
    // divergence of the modulus as x -> 0+
    CHECK(std::abs(specfun::hankel2(0, 1e-8)) > 10.0);
}

TEST_CASE("bessel_k series regime and frozen value") {
    const double x = 1e-4;
    CHECK(specfun::bessel_k(0, x)
          == doctest::Approx(-std::log(x / 2.0) - gamma_e).epsilon(1e-8));
    // K0(1) against the independent series oracle and its frozen value
    CHECK(oracles::bessel_k0_series(1.0)
          == doctest::Approx(0.42102443824070834).epsilon(1e-14));
    CHECK(specfun::bessel_k(0, 1.0)
          == doctest::Approx(0.42102443824070834).epsilon(1e-13));
    // x K1(x) -> 1
    CHECK(specfun::bessel_k(1, 1e-6) * 1e-6 == doctest::Approx(1.0).epsilon(1e-9));
    // monotone decay
    double prev = specfun::bessel_k(0, 0.5);
    for (double t = 1.0; t < 30.0; t += 0.7) {
        const double cur = specfun::bessel_k(0, t);
        CHECK(cur > 0.0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("bessel_k regime overlaps agree") {
    // series vs cosh integral around x = 4, integral vs asymptotic around 20
    for (const double x : {3.0, 3.5, 4.0}) {
        CHECK(specfun::detail::bessel_k_series(0, x)
              == doctest::Approx(specfun::detail::bessel_k_coshint(0, x)).epsilon(1e-12));
        CHECK(specfun::detail::bessel_k_series(1, x)
              == doctest::Approx(specfun::detail::bessel_k_coshint(1, x)).epsilon(1e-12));
    }
    for (const double x : {19.0, 20.0, 22.0}) {
        CHECK(specfun::detail::bessel_k_coshint(0, x)
              == doctest::Approx(specfun::detail::bessel_k_asymptotic(0, x)).epsilon(1e-12));
        CHECK(specfun::detail::bessel_k_coshint(1, x)
              == doctest::Approx(specfun::detail::bessel_k_asymptotic(1, x)).epsilon(1e-12));
    }
}

TEST_CASE("free resolvent kernel on the imaginary axis is K0/(2 pi)") {
    for (const auto [kappa, r] : {std::pair{1.0, 1.0}, {0.7, 1.3}, {2.0, 0.4}}) {
        const auto v = specfun::free_resolvent_kernel(LogPoint{kappa, pi / 2.0}, r);
        CHECK(v.real()
              == doctest::Approx(specfun::bessel_k(0, kappa * r) / (2.0 * pi))
                     .epsilon(1e-12));
        CHECK(std::abs(v.imag()) < 1e-14);
        CHECK(v.real() > 0.0);
    }
    // frozen value at lambda = i, r = 1
    const auto v = specfun::free_resolvent_kernel(LogPoint{1.0, pi / 2.0}, 1.0);
    CHECK(v.real() == doctest::Approx(0.42102443824070834 / (2.0 * pi)).epsilon(1e-13));
}

TEST_CASE("free resolvent kernel on the real axis is (i/4) H0") {
    for (const double x : {0.5, 1.5, 7.0}) {
        const auto v = specfun::free_resolvent_kernel(LogPoint{x, 0.0}, 1.0);
        const auto h = specfun::hankel1(0, x);
        CHECK(std::abs(v - complex<double>(0.0, 0.25) * h) < 1e-13);
    }
    CHECK_THROWS_AS(specfun::free_resolvent_kernel(LogPoint{1.0, 0.0}, -1.0),
                    DomainError);
    CHECK_THROWS_AS(specfun::free_resolvent_kernel(LogPoint{5.0, 1.0}, 1.0),
                    DomainError);
}

TEST_CASE("K/H link through the series continuation") {
    // (1/2pi) K0(r) = (i/4) H0^(1) at log lambda = i pi/2, for r in [0.01, 5]
    for (double r = 0.01; r <= 5.0; r *= 1.6) {
        const auto h = oracles::hankel1_0_series({std::log(r), pi / 2.0});
        const auto lhs = specfun::bessel_k(0, r) / (2.0 * pi);
        const auto rhs = complex<double>(0.0, 0.25) * h;
        CHECK(std::abs(lhs - rhs.real()) < 1e-10);
        CHECK(std::abs(rhs.imag()) < 1e-10);
    }
}

TEST_CASE("Wronskian sweep across orders and arguments") {
    double worst = 0.0;
    for (int n = 0; n <= 50; n += 5) {
        for (double x = 0.1; x <= 100.0; x *= 1.35) {
            const double w = specfun::bessel_j(n, x) * specfun::bessel_y(n + 1, x)
                           - specfun::bessel_j(n + 1, x) * specfun::bessel_y(n, x);
            worst = std::max(worst, std::abs(w + 2.0 / (pi * x)));
        }
    }
    CHECK(worst < 1e-10);
}
