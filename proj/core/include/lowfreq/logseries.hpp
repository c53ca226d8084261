#ifndef LOWFREQ_LOGSERIES_HPP
#define LOWFREQ_LOGSERIES_HPP

#include <complex>
#include <map>
#include <string>
#include <utility>

#include "lowfreq/errors.hpp"
#include "lowfreq/specfun.hpp" // LogPoint

// Truncated two-index series  sum_{j,k} c_{j,k} lambda^j (log lambda - a)^k
// on the logarithmic Riemann surface: arithmetic, unit inversion, the
// shifted-log geometric inversion, and sector tail bounds.
//
// Values are immutable after construction; all operations return new values.

namespace lowfreq::logseries {

using specfun::LogPoint;
using Complex = std::complex<double>;

struct SectorSpec {
    double half_angle; // > 0
    double radius;     // in (0,1)
};

class LogPowSeries {
public:
    // key = (power of lambda, power of (log lambda - shift))
    using Key = std::pair<int, int>;
    using CoeffMap = std::map<Key, Complex>;

    LogPowSeries() = default;
    LogPowSeries(Complex shift, CoeffMap coeffs, int j_max = -1);

    // single-term convenience
    static LogPowSeries term(Complex shift, int j, int k, Complex c);
    static LogPowSeries constant(Complex shift, Complex c);

    Complex shift() const { return shift_; }
    const CoeffMap& coeffs() const { return coeffs_; }
    int j_max() const { return j_max_; }

    Complex coeff(int j, int k) const; // absent key = 0
    bool has_negative_powers() const;
    int k_lower(int j) const; // 0 when the stratum is empty
    int k_upper(int j) const;

    std::string to_json() const;
    static LogPowSeries from_json(const std::string& text);

private:
    Complex shift_{0.0, 0.0};
    CoeffMap coeffs_;
    int j_max_ = 0; // highest stratum intended to be meaningful
};

// sum over stored coefficients with log lambda = log(modulus) + i argument.
// Throws PoleAtShift when a negative power would divide by a vanishing
// (log lambda - shift).
Complex evaluate(const LogPowSeries& s, const LogPoint& lambda);

LogPowSeries add(const LogPowSeries& a, const LogPowSeries& b);
LogPowSeries scale(const LogPowSeries& s, Complex c);

// Cauchy product truncated at lambda^J_cut; k indices add.
LogPowSeries mul(const LogPowSeries& a, const LogPowSeries& b, int j_cut);

// Neumann-series inverse of a series whose j = 0 stratum is the single
// scalar c_{0,0} != 0.
LogPowSeries invert_unit(const LogPowSeries& s, int j_cut);

// Exact re-expansion (log l - a)^k = ((log l - a') + (a' - a))^k; k >= 0 only.
LogPowSeries rebase_shift(const LogPowSeries& s, Complex new_shift);

// Term-by-term derivative in lambda:
//   d/dl [c l^j (log l - a)^k] = c l^{j-1} (j (log l - a)^k + k (log l - a)^{k-1}).
// Demo-grade companion to the series tooling; j = 0 strata with k != 0 are
// rejected (their derivative leaves the monomial basis).
LogPowSeries differentiate(const LogPowSeries& s);

// Result of inverting 1 - (log lambda - log z) alpha(lambda): per stratum a
// polynomial part in plain log-lambda powers (k >= 1) plus negative powers
// of (log lambda - a) with a = log z + 1/alpha_00 (k <= 0, constants kept in
// the shifted part).
struct GeometricInverse {
    LogPowSeries plain;   // shift 0, k >= 1
    LogPowSeries shifted; // shift a, k <= 0
    Complex shift_a;

    std::string to_json() const;
};

Complex evaluate(const GeometricInverse& g, const LogPoint& lambda);

// alpha must have k >= 0 everywhere and a scalar j = 0 stratum; throws
// SingularAlpha when |alpha_00| < 1e-14.
GeometricInverse geometric_log_invert(const LogPowSeries& alpha,
                                      Complex log_z, int j_cut);

// Upper bound on sup over the sector of |sum_{j > j_cut} c_{j,k} nu^j
// (log nu)^k|, evaluated via the majorization |log nu|^N |nu| <=
// |log nu0|^N nu0. The hypothesis is checked numerically at 64 boundary
// samples; returns +infinity when it fails at the sector radius.
double sector_tail_bound(const LogPowSeries& s, int j_cut,
                         const SectorSpec& sector, double nu0);

} // namespace lowfreq::logseries

#endif
