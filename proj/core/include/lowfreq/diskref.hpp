#ifndef LOWFREQ_DISKREF_HPP
#define LOWFREQ_DISKREF_HPP

#include <complex>
#include <vector>

#include "lowfreq/errors.hpp"

// Exact reference quantities for the disk obstacle: scattering-matrix
// diagonal entries -H_l^(2)/H_l^(1), the spectral shift function as a sum of
// continuous Hankel phases, and the lowest Dirichlet-to-Neumann eigenvalue
// kappa K_1(kappa rho)/K_0(kappa rho) on the positive imaginary axis.

namespace lowfreq::diskref {

// Diagonal scattering-matrix entry -H_l^(2)(x)/H_l^(1)(x); unit modulus by
// construction for real x > 0. Integer-order symmetry makes l and -l equal.
std::complex<double> smatrix_entry(int ell, double lambda_rho);

struct SsfValue {
    double value;
    int terms_used; // number of distinct |l| included
};

// Spectral shift between the disk of radius rho and free space at energy mu.
// Summed as -(1/pi) sum_l delta_l with the phase of H_l^(1) taken continuous
// in the argument and anchored to -pi/2 at 0+, which is the branch on which
// the sum converges and xi -> 0 as mu -> 0. Throws NonConvergentSum when the
// last retained order still exceeds tol.
SsfValue ssf_disk(double rho, double mu, double tol = 1e-12);

// Scattering phase sigma(lambda) = -xi(lambda^2).
double phase_disk(double rho, double lambda, double tol = 1e-12);

// Lowest DtN eigenvalue at lambda = i kappa: kappa K_1(kappa rho)/K_0(kappa rho).
double dtn_disk_lowest(double rho, double kappa);

struct SsfRow {
    double x;   // rho sqrt(mu), the scaling-invariant abscissa
    double mu;
    double xi_exact;
    double xi_arctan;
    double xi_mcg1;
    double xi_mcg3;
    int terms_used;
};

struct SsfTable {
    double rho;
    std::vector<SsfRow> rows; // mu strictly increasing
};

} // namespace lowfreq::diskref

#endif
