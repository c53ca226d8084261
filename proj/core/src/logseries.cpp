#include "lowfreq/logseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <json.hpp>

namespace lowfreq::logseries {

namespace {

Complex ipow(Complex z, int k) {
    if (k < 0) return 1.0 / ipow(z, -k);
    Complex r(1.0, 0.0);
    while (k > 0) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

bool shifts_equal(Complex a, Complex b) {
    return std::abs(a - b) <= 1e-14 * (1.0 + std::abs(a) + std::abs(b));
}

} // namespace

LogPowSeries::LogPowSeries(Complex shift, CoeffMap coeffs, int j_max)
    : shift_(shift), coeffs_(std::move(coeffs)) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->first.first < 0) throw DomainError("lambda powers must be >= 0");
        if (it->second == Complex(0.0, 0.0)) it = coeffs_.erase(it);
        else ++it;
    }
    int top = 0;
    for (const auto& [key, c] : coeffs_) top = std::max(top, key.first);
    j_max_ = (j_max >= 0) ? j_max : top;
}

LogPowSeries LogPowSeries::term(Complex shift, int j, int k, Complex c) {
    CoeffMap m;
    m[{j, k}] = c;
    return LogPowSeries(shift, std::move(m));
}

LogPowSeries LogPowSeries::constant(Complex shift, Complex c) {
    return term(shift, 0, 0, c);
}

Complex LogPowSeries::coeff(int j, int k) const {
    auto it = coeffs_.find({j, k});
    return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

bool LogPowSeries::has_negative_powers() const {
    return std::any_of(coeffs_.begin(), coeffs_.end(),
                       [](const auto& e) { return e.first.second < 0; });
}

int LogPowSeries::k_lower(int j) const {
    int lo = 0;
    bool seen = false;
    for (const auto& [key, c] : coeffs_) {
        if (key.first != j) continue;
        lo = seen ? std::min(lo, key.second) : key.second;
        seen = true;
    }
    return lo;
}

int LogPowSeries::k_upper(int j) const {
    int hi = 0;
    bool seen = false;
    for (const auto& [key, c] : coeffs_) {
        if (key.first != j) continue;
        hi = seen ? std::max(hi, key.second) : key.second;
        seen = true;
    }
    return hi;
}

Complex evaluate(const LogPowSeries& s, const LogPoint& lambda) {
    const Complex log_lambda = lambda.log();
    const Complex w = log_lambda - s.shift();
    if (s.has_negative_powers() && std::abs(w) < 1e-14) {
        throw PoleAtShift("evaluate: log lambda coincides with the series shift");
    }
    Complex acc(0.0, 0.0);
    for (const auto& [key, c] : s.coeffs()) {
        const auto [j, k] = key;
        const Complex lj = std::polar(std::pow(lambda.modulus, j),
                                      j * lambda.argument);
        acc += c * lj * ipow(w, k);
    }
    return acc;
}

LogPowSeries add(const LogPowSeries& a, const LogPowSeries& b) {
    if (!shifts_equal(a.shift(), b.shift()))
        throw RebaseRequired("add: series shifts differ");
    LogPowSeries::CoeffMap m = a.coeffs();
    for (const auto& [key, c] : b.coeffs()) m[key] += c;
    return LogPowSeries(a.shift(), std::move(m), std::max(a.j_max(), b.j_max()));
}

LogPowSeries scale(const LogPowSeries& s, Complex c) {
    LogPowSeries::CoeffMap m;
    if (c != Complex(0.0, 0.0)) {
        m = s.coeffs();
        for (auto& [key, v] : m) v *= c;
    }
    return LogPowSeries(s.shift(), std::move(m), s.j_max());
}

LogPowSeries mul(const LogPowSeries& a, const LogPowSeries& b, int j_cut) {
    if (!shifts_equal(a.shift(), b.shift()))
        throw RebaseRequired("mul: series shifts differ");
    LogPowSeries::CoeffMap m;
    for (const auto& [ka, ca] : a.coeffs()) {
        for (const auto& [kb, cb] : b.coeffs()) {
            const int j = ka.first + kb.first;
            if (j > j_cut) continue;
            m[{j, ka.second + kb.second}] += ca * cb;
        }
    }
    return LogPowSeries(a.shift(), std::move(m), j_cut);
}

LogPowSeries invert_unit(const LogPowSeries& s, int j_cut) {
    const Complex c00 = s.coeff(0, 0);
    if (c00 == Complex(0.0, 0.0)) throw NotAUnit("invert_unit: c_{0,0} vanishes");
    for (const auto& [key, c] : s.coeffs()) {
        if (key.first == 0 && key.second != 0)
            throw NotAUnit("invert_unit: j = 0 stratum is not scalar");
    }
    // t = 1 - s/c00 has strata j >= 1; sum the geometric series by Horner.
    LogPowSeries t = scale(s, -1.0 / c00);
    t = add(t, LogPowSeries::constant(s.shift(), 1.0));
    LogPowSeries acc = LogPowSeries::constant(s.shift(), 1.0);
    for (int m = 0; m < j_cut; ++m) {
        acc = add(LogPowSeries::constant(s.shift(), 1.0), mul(t, acc, j_cut));
    }
    return scale(acc, 1.0 / c00);
}

LogPowSeries rebase_shift(const LogPowSeries& s, Complex new_shift) {
    if (s.has_negative_powers())
        throw NegativePowersPresent("rebase_shift: negative log powers do not rebase finitely");
    const Complex d = s.shift() - new_shift; // (L - a) = (L - a') + (a' - a)
    LogPowSeries::CoeffMap m;
    for (const auto& [key, c] : s.coeffs()) {
        const auto [j, k] = key;
        for (int i = 0; i <= k; ++i) {
            m[{j, i}] += c * binom(k, i) * ipow(-d, k - i);
        }
    }
    return LogPowSeries(new_shift, std::move(m), s.j_max());
}

LogPowSeries differentiate(const LogPowSeries& s) {
    LogPowSeries::CoeffMap m;
    for (const auto& [key, c] : s.coeffs()) {
        const auto [j, k] = key;
        if (j == 0) {
            if (k != 0)
                throw DomainError("differentiate: j = 0 terms with k != 0 leave the basis");
            continue; // constants vanish
        }
        m[{j - 1, k}] += c * static_cast<double>(j);
        if (k != 0) m[{j - 1, k - 1}] += c * static_cast<double>(k);
    }
    return LogPowSeries(s.shift(), std::move(m), std::max(0, s.j_max() - 1));
}

// ---------------------------------------------------------------------------
// geometric inversion in the mixed basis
// ---------------------------------------------------------------------------

namespace {

// Mixed-basis polynomial data: per (j, code) coefficient where code t >= 1
// encodes lambda^j (log lambda)^t and t <= 0 encodes
// lambda^j (log lambda - a)^t. Code 0 is the shared constant slot.
using Mixed = std::map<std::pair<int, int>, Complex>;

void mixed_accum(Mixed& m, int j, int t, Complex c) {
    if (c == Complex(0.0, 0.0)) return;
    m[{j, t}] += c;
}

// Canonicalize L^k (L-a)^{-mm} into the mixed basis and accumulate.
void accum_cross(Mixed& out, int j, int k, int mm, Complex c, Complex a) {
    // L^k = sum_i C(k,i) a^{k-i} (L-a)^i
    for (int i = 0; i <= k; ++i) {
        const Complex w = c * binom(k, i) * ipow(a, k - i);
        const int p = i - mm;
        if (p <= 0) {
            mixed_accum(out, j, p, w);
        } else {
            // (L-a)^p back to plain powers
            for (int q = 0; q <= p; ++q) {
                mixed_accum(out, j, q, w * binom(p, q) * ipow(-a, p - q));
            }
        }
    }
}

Mixed mixed_mul(const Mixed& x, const Mixed& y, Complex a, int j_cut) {
    Mixed out;
    for (const auto& [kx, cx] : x) {
        for (const auto& [ky, cy] : y) {
            const int j = kx.first + ky.first;
            if (j > j_cut) continue;
            const int t1 = kx.second, t2 = ky.second;
            const Complex c = cx * cy;
            if (t1 >= 1 && t2 >= 1) {
                mixed_accum(out, j, t1 + t2, c);
            } else if (t1 <= 0 && t2 <= 0) {
                mixed_accum(out, j, t1 + t2, c);
            } else if (t1 == 0 || t2 == 0) {
                mixed_accum(out, j, t1 + t2, c);
            } else if (t1 >= 1) {
                accum_cross(out, j, t1, -t2, c, a);
            } else {
                accum_cross(out, j, t2, -t1, c, a);
            }
        }
    }
    return out;
}

} // namespace

Complex evaluate(const GeometricInverse& g, const LogPoint& lambda) {
    return evaluate(g.plain, lambda) + evaluate(g.shifted, lambda);
}

GeometricInverse geometric_log_invert(const LogPowSeries& alpha_in,
                                      Complex log_z, int j_cut) {
    LogPowSeries alpha = alpha_in;
    if (alpha.shift() != Complex(0.0, 0.0)) {
        alpha = rebase_shift(alpha, Complex(0.0, 0.0)); // also rejects k < 0
    } else if (alpha.has_negative_powers()) {
        throw DomainError("geometric_log_invert: alpha must have k >= 0 only");
    }
    for (const auto& [key, c] : alpha.coeffs()) {
        if (key.first == 0 && key.second != 0)
            throw DomainError("geometric_log_invert: j = 0 stratum of alpha must be scalar");
    }
    const Complex a00 = alpha.coeff(0, 0);
    if (std::abs(a00) < 1e-14)
        throw SingularAlpha("geometric_log_invert: |alpha_00| < 1e-14");
    const Complex a = log_z + 1.0 / a00;

    // S = 1/(1 - (L - log z) a00) = -(1/a00) (L - a)^{-1}
    Mixed S;
    mixed_accum(S, 0, -1, -1.0 / a00);

    // one_minus_S = 1 + (1/a00)(L - a)^{-1}
    Mixed one_minus_S;
    mixed_accum(one_minus_S, 0, 0, 1.0);
    mixed_accum(one_minus_S, 0, -1, 1.0 / a00);

    // beta = alpha - a00, embedded (k >= 1 plain, k = 0 constants)
    Mixed beta;
    for (const auto& [key, c] : alpha.coeffs()) {
        if (key.first == 0 && key.second == 0) continue;
        mixed_accum(beta, key.first, key.second, c);
    }

    // r = -(1/a00) (1 - S) beta
    Mixed r = mixed_mul(one_minus_S, beta, a, j_cut);
    for (auto& [key, c] : r) c *= -1.0 / a00;

    // geometric sum G = sum_m r^m; r has strata j >= 1 so j_cut powers suffice
    Mixed geom;
    mixed_accum(geom, 0, 0, 1.0);
    Mixed power;
    mixed_accum(power, 0, 0, 1.0);
    for (int m = 1; m <= j_cut; ++m) {
        power = mixed_mul(power, r, a, j_cut);
        if (power.empty()) break;
        for (const auto& [key, c] : power) mixed_accum(geom, key.first, key.second, c);
    }

    Mixed full = mixed_mul(S, geom, a, j_cut);

    GeometricInverse out;
    out.shift_a = a;
    LogPowSeries::CoeffMap plain, shifted;
    for (const auto& [key, c] : full) {
        if (key.second >= 1) plain[{key.first, key.second}] = c;
        else shifted[{key.first, key.second}] = c;
    }
    out.plain = LogPowSeries(Complex(0.0, 0.0), std::move(plain), j_cut);
    out.shifted = LogPowSeries(a, std::move(shifted), j_cut);
    return out;
}

double sector_tail_bound(const LogPowSeries& s, int j_cut,
                         const SectorSpec& sector, double nu0) {
    if (!(nu0 > 0.0 && nu0 < 1.0))
        throw DomainError("sector_tail_bound: nu0 must lie in (0,1)");
    if (!(sector.half_angle > 0.0) || !(sector.radius > 0.0) || !(sector.radius < 1.0))
        throw DomainError("sector_tail_bound: invalid sector");

    int n_growth = 0;
    for (const auto& [key, c] : s.coeffs()) {
        if (key.first >= 1 && key.second > 0) {
            n_growth = std::max(n_growth,
                                (key.second + key.first - 1) / key.first);
        }
    }

    const double inf = std::numeric_limits<double>::infinity();
    if (sector.radius > nu0) return inf;
    const double rhs = std::pow(std::abs(std::log(nu0)), n_growth) * nu0;
    // 32 samples along the arc |nu| = nu1, 32 along the ray arg nu = phi
    for (int i = 0; i < 32; ++i) {
        const double th = sector.half_angle * (2.0 * i / 31.0 - 1.0);
        const double lg = std::hypot(std::log(sector.radius), th);
        if (std::pow(lg, n_growth) * sector.radius > rhs * (1.0 + 1e-12)) return inf;
    }
    for (int i = 0; i < 32; ++i) {
        const double m = sector.radius * std::pow(1e-6, i / 31.0);
        const double lg = std::hypot(std::log(m), sector.half_angle);
        if (std::pow(lg, n_growth) * m > rhs * (1.0 + 1e-12)) return inf;
    }

    const double lg0 = std::abs(std::log(nu0));
    double bound = 0.0;
    for (const auto& [key, c] : s.coeffs()) {
        if (key.first <= j_cut) continue;
        bound += std::abs(c) * std::pow(lg0, key.second) * std::pow(nu0, key.first);
    }
    return bound;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

nlohmann::json terms_to_json(const LogPowSeries::CoeffMap& m) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [key, c] : m) {
        terms.push_back({{"j", key.first},
                         {"k", key.second},
                         {"c", {c.real(), c.imag()}}});
    }
    return terms;
}

LogPowSeries::CoeffMap terms_from_json(const nlohmann::json& terms) {
    LogPowSeries::CoeffMap m;
    for (const auto& t : terms) {
        const int j = t.at("j").get<int>();
        const int k = t.at("k").get<int>();
        const auto c = t.at("c");
        m[{j, k}] += Complex(c.at(0).get<double>(), c.at(1).get<double>());
    }
    return m;
}

} // namespace

std::string LogPowSeries::to_json() const {
    nlohmann::json out;
    out["shift"] = {shift_.real(), shift_.imag()};
    out["terms"] = terms_to_json(coeffs_);
    return out.dump(2);
}

LogPowSeries LogPowSeries::from_json(const std::string& text) {
    nlohmann::json in;
    try {
        in = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("series JSON parse failed: ") + e.what());
    }
    try {
        const auto sh = in.at("shift");
        Complex shift(sh.at(0).get<double>(), sh.at(1).get<double>());
        return LogPowSeries(shift, terms_from_json(in.at("terms")));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("series JSON invalid: ") + e.what());
    }
}

std::string GeometricInverse::to_json() const {
    nlohmann::json out;
    out["shift"] = {shift_a.real(), shift_a.imag()};
    out["log_terms"] = terms_to_json(plain.coeffs());
    out["shifted_terms"] = terms_to_json(shifted.coeffs());
    return out.dump(2);
}

} // namespace lowfreq::logseries
