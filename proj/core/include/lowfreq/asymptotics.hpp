#ifndef LOWFREQ_ASYMPTOTICS_HPP
#define LOWFREQ_ASYMPTOTICS_HPP

#include <complex>
#include <optional>

#include "lowfreq/errors.hpp"

// Leading-order low-frequency formulas, parameterized by the log-capacity C
// alone (plus the boundary length for the DtN eigenvalue). No dependence on
// the geometry pipeline; the CLI wires the two together.

namespace lowfreq::asymptotics {

struct AsymParams {
    double C;                           // log-capacity
    double gamma;                       // Euler's constant
    double b;                           // log 4 - 2C - 2 gamma
    std::complex<double> a;             // log 2 - gamma - C + i pi/2
    std::optional<double> boundary_length;

    explicit AsymParams(double log_capacity,
                        std::optional<double> length = std::nullopt);
};

// scattering phase sigma(lambda) = (1/pi) arctan(pi / (2 log(lambda/2) + 2C + 2 gamma))
double sigma_leading(const AsymParams& p, double lambda);

// sigma'(lambda) = -(2/lambda) / (4 (log(lambda/2) + C + gamma)^2 + pi^2)
double sigma_prime_leading(const AsymParams& p, double lambda);

// spectral shift xi(mu) = (1/pi) arctan(pi / (b - log mu)) = -sigma(sqrt mu)
double xi_arctan(const AsymParams& p, double mu);

// 1/(-log mu) - b/(-log mu)^2 + (b^2 - pi^2/3)/(-log mu)^3, truncated at the
// requested order (1 or 3); requires 0 < mu < 1
double xi_mcg(const AsymParams& p, double mu, int order);

// lowest DtN eigenvalue at i kappa: -(2 pi / boundary_length) / (log(kappa/2) + gamma + C)
double dtn_lowest_asym(const AsymParams& p, double kappa);

// leading constant-mode scattering-matrix entry 1 + i pi / (log lambda - a)
std::complex<double> smatrix_leading(const AsymParams& p, double lambda);

} // namespace lowfreq::asymptotics

#endif
