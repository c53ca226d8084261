#include "lowfreq/asymptotics.hpp"

#include <cmath>

#include "lowfreq/specfun.hpp"

namespace lowfreq::asymptotics {

namespace {
constexpr double pi = 3.14159265358979323846;
}

AsymParams::AsymParams(double log_capacity, std::optional<double> length)
    : C(log_capacity),
      gamma(specfun::euler_gamma),
      b(std::log(4.0) - 2.0 * log_capacity - 2.0 * specfun::euler_gamma),
      a(std::log(2.0) - specfun::euler_gamma - log_capacity, pi / 2.0),
      boundary_length(length) {
    if (boundary_length && !(*boundary_length > 0.0))
        throw DomainError("boundary length must be > 0");
}

double sigma_leading(const AsymParams& p, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("sigma_leading requires lambda > 0");
    const double denom = 2.0 * std::log(lambda / 2.0) + 2.0 * p.C + 2.0 * p.gamma;
    if (std::abs(denom) < 1e-14)
        throw AtanPole("sigma_leading: arctan argument pole");
    return std::atan(pi / denom) / pi;
}

double sigma_prime_leading(const AsymParams& p, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("sigma_prime_leading requires lambda > 0");
    const double t = std::log(lambda / 2.0) + p.C + p.gamma;
    return -(2.0 / lambda) / (4.0 * t * t + pi * pi);
}

double xi_arctan(const AsymParams& p, double mu) {
    if (!(mu > 0.0)) throw DomainError("xi_arctan requires mu > 0");
    const double denom = p.b - std::log(mu);
    if (std::abs(denom) < 1e-14)
        throw AtanPole("xi_arctan: arctan argument pole");
    return std::atan(pi / denom) / pi;
}

double xi_mcg(const AsymParams& p, double mu, int order) {
    if (order != 1 && order != 3)
        throw DomainError("xi_mcg supports orders 1 and 3");
    if (!(mu > 0.0) || mu >= 1.0)
        throw DomainError("xi_mcg requires 0 < mu < 1");
    const double l = -std::log(mu);
    if (order == 1) return 1.0 / l;
    return 1.0 / l - p.b / (l * l) + (p.b * p.b - pi * pi / 3.0) / (l * l * l);
}

double dtn_lowest_asym(const AsymParams& p, double kappa) {
    if (!p.boundary_length)
        throw DomainError("dtn_lowest_asym requires the boundary length");
    if (!(kappa > 0.0)) throw DomainError("dtn_lowest_asym requires kappa > 0");
    const double d = std::log(kappa / 2.0) + p.gamma + p.C;
    if (!(d < 0.0))
        throw DomainError("dtn_lowest_asym: log(kappa/2) + gamma + C must be negative");
    return -(2.0 * pi / *p.boundary_length) / d;
}

std::complex<double> smatrix_leading(const AsymParams& p, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("smatrix_leading requires lambda > 0");
    const std::complex<double> w = std::log(lambda) - p.a;
    if (std::abs(w) < 1e-14)
        throw PoleAtShift("smatrix_leading: log lambda equals the shift");
    return 1.0 + std::complex<double>(0.0, pi) / w;
}

} // namespace lowfreq::asymptotics
