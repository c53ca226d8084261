// Command-line front end: capacity solves, disk spectral-shift reference
// curves, leading-order approximations, DtN eigenvalue comparison, and the
// shifted-log series inversion. Emits plot-ready CSV/JSON only; identical
// invocations produce byte-identical files.

#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lowfreq/asymptotics.hpp"
#include "lowfreq/diskref.hpp"
#include "lowfreq/errors.hpp"
#include "lowfreq/logseries.hpp"
#include "lowfreq/potential.hpp"
#include "lowfreq/specfun.hpp"

namespace {

using namespace lowfreq;

constexpr double pi = 3.14159265358979323846;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

std::string csv_header(const std::string& cmdline, std::complex<double> a) {
    std::ostringstream os;
    os << "# lowfreq " << LOWFREQ_VERSION << " | " << cmdline
       << " | a = " << fmt17(a.real()) << "+" << fmt17(a.imag()) << "i\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open output file: " + path);
    os << content;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InvalidGeometry("cannot open input file: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

// chunk-free parallel map; results land at their own indices so output
// order equals input order
template <class F>
void parallel_rows(int n, F&& f) {
    unsigned hw = std::thread::hardware_concurrency();
    const int nt = std::min<int>(n, hw ? static_cast<int>(hw) : 4);
    if (nt <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        threads.emplace_back([&] {
            int i;
            while ((i = next.fetch_add(1)) < n) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (err) std::rethrow_exception(err);
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo)) throw DomainError("grid bounds must satisfy 0 < min < max");
    if (points < 2) throw DomainError("grid needs at least 2 points");
    std::vector<double> g(static_cast<size_t>(points));
    const double r = std::log(hi / lo);
    for (int i = 0; i < points; ++i) {
        g[static_cast<size_t>(i)] = lo * std::exp(r * i / (points - 1));
    }
    return g;
}

// ---------------------------------------------------------------------------

diskref::SsfTable build_ssf_table(double rho, double x_min, double x_max,
                                  int points, double tol) {
    diskref::SsfTable table;
    table.rho = rho;
    table.rows.resize(static_cast<size_t>(points));
    const auto xs = log_grid(x_min, x_max, points);
    const asymptotics::AsymParams p(std::log(rho));
    parallel_rows(points, [&](int i) {
        diskref::SsfRow& row = table.rows[static_cast<size_t>(i)];
        row.x = xs[static_cast<size_t>(i)];
        row.mu = (row.x / rho) * (row.x / rho);
        const auto v = diskref::ssf_disk(rho, row.mu, tol);
        row.xi_exact = v.value;
        row.terms_used = v.terms_used;
        row.xi_arctan = asymptotics::xi_arctan(p, row.mu);
        const bool mcg_ok = row.mu > 0.0 && row.mu < 1.0;
        row.xi_mcg1 = mcg_ok ? asymptotics::xi_mcg(p, row.mu, 1)
                             : std::nan("");
        row.xi_mcg3 = mcg_ok ? asymptotics::xi_mcg(p, row.mu, 3)
                             : std::nan("");
    });
    // stitch any residual 2-pi phase jump (a jump of 2 in xi units); the
    // continuous-branch quadrature should never produce one
    for (size_t i = 1; i < table.rows.size(); ++i) {
        const double d = table.rows[i].xi_exact - table.rows[i - 1].xi_exact;
        const int k = static_cast<int>(std::lround(d / 2.0));
        if (std::abs(d) > 0.5 && k != 0) {
            for (size_t j = i; j < table.rows.size(); ++j)
                table.rows[j].xi_exact -= 2.0 * k;
        }
    }
    return table;
}

std::string ssf_table_csv(const diskref::SsfTable& t, const std::string& cmdline) {
    std::ostringstream os;
    os << csv_header(cmdline, potential::shift_a(std::log(t.rho)));
    os << "x,mu,xi_exact,xi_arctan,xi_mcg1,xi_mcg3\n";
    for (const auto& r : t.rows) {
        os << fmt17(r.x) << ',' << fmt17(r.mu) << ',' << fmt17(r.xi_exact) << ','
           << fmt17(r.xi_arctan) << ',' << fmt17(r.xi_mcg1) << ','
           << fmt17(r.xi_mcg3) << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------

int cmd_capacity(const std::string& cmdline, const std::string& geometry_path,
                 int panels, bool richardson, const std::string& output) {
    (void)cmdline;
    const potential::Geometry g = potential::geometry_from_json(read_file(geometry_path));
    const potential::CapacityReport r = potential::solve_capacity(g, panels, richardson);
    write_file(output, potential::report_to_json(r) + "\n");
    return 0;
}

int cmd_disk_ssf(const std::string& cmdline, double rho, double x_min, double x_max,
                 int points, double tol, const std::string& output) {
    const auto table = build_ssf_table(rho, x_min, x_max, points, tol);
    write_file(output, ssf_table_csv(table, cmdline));
    return 0;
}

int cmd_fig1(const std::string& cmdline, const std::string& out_dir) {
    for (const double rho : {0.15, 1.5, 15.0, 150.0}) {
        const auto table = build_ssf_table(rho, 0.02, 8.0, 400, 1e-10);
        std::ostringstream name;
        name << out_dir << "/disk_ssf_rho_" << rho << ".csv";
        write_file(name.str(), ssf_table_csv(table, cmdline));
    }
    return 0;
}

int cmd_phase(const std::string& cmdline, std::optional<double> capacity_c,
              const std::string& geometry_path, int panels, double l_min,
              double l_max, int points, const std::string& output) {
    double c;
    if (capacity_c) {
        c = *capacity_c;
    } else if (!geometry_path.empty()) {
        const auto g = potential::geometry_from_json(read_file(geometry_path));
        c = potential::solve_capacity(g, panels, false).solution.log_capacity;
    } else {
        throw DomainError("phase: provide --capacity or --geometry");
    }
    const asymptotics::AsymParams p(c);
    const auto grid = log_grid(l_min, l_max, points);
    std::vector<std::array<double, 3>> rows(grid.size());
    parallel_rows(points, [&](int i) {
        const double lambda = grid[static_cast<size_t>(i)];
        rows[static_cast<size_t>(i)] = {lambda, asymptotics::sigma_leading(p, lambda),
                                        asymptotics::sigma_prime_leading(p, lambda)};
    });
    std::ostringstream os;
    os << csv_header(cmdline, p.a);
    os << "lambda,sigma_leading,sigma_prime_leading\n";
    for (const auto& r : rows)
        os << fmt17(r[0]) << ',' << fmt17(r[1]) << ',' << fmt17(r[2]) << '\n';
    write_file(output, os.str());
    return 0;
}

int cmd_dtn_eig(const std::string& cmdline, double rho, double k_min, double k_max,
                int points, const std::string& output) {
    const asymptotics::AsymParams p(std::log(rho), 2.0 * pi * rho);
    const auto grid = log_grid(k_min, k_max, points);
    std::vector<std::array<double, 4>> rows(grid.size());
    parallel_rows(points, [&](int i) {
        const double kappa = grid[static_cast<size_t>(i)];
        const double exact = diskref::dtn_disk_lowest(rho, kappa);
        const double asym = asymptotics::dtn_lowest_asym(p, kappa);
        rows[static_cast<size_t>(i)] = {kappa, exact, asym, std::abs(exact - asym)};
    });
    std::ostringstream os;
    os << csv_header(cmdline, p.a);
    os << "kappa,exact,asymptotic,residual\n";
    for (const auto& r : rows)
        os << fmt17(r[0]) << ',' << fmt17(r[1]) << ',' << fmt17(r[2]) << ','
           << fmt17(r[3]) << '\n';
    write_file(output, os.str());
    return 0;
}

int cmd_series_invert(const std::string& series_path, double log_z_re,
                      double log_z_im, int j_cut, bool derivative,
                      const std::string& output) {
    const auto alpha = logseries::LogPowSeries::from_json(read_file(series_path));
    const std::complex<double> log_z(log_z_re, log_z_im);
    const auto inv = logseries::geometric_log_invert(alpha, log_z, j_cut);

    // embedded oracle: compare against the direct quotient on sector samples
    double max_rel = 0.0;
    for (const double m : {1e-4, 1e-3, 1e-2}) {
        for (const double th : {0.0, pi / 4.0, pi / 2.0, -pi / 2.0}) {
            const specfun::LogPoint lp{m, th};
            const std::complex<double> log_l = lp.log();
            const auto a_val = logseries::evaluate(alpha, lp);
            const auto direct = 1.0 / (1.0 - (log_l - log_z) * a_val);
            const auto series_val = logseries::evaluate(inv, lp);
            max_rel = std::max(max_rel, std::abs(series_val - direct) / std::abs(direct));
        }
    }

    nlohmann::json out = nlohmann::json::parse(inv.to_json());
    out["oracle_residual"] = max_rel;
    out["j_cut"] = j_cut;
    out["log_z"] = {log_z_re, log_z_im};
    if (derivative) {
        // term-by-term derivative of the input series, as a demo of the
        // series calculus (the inverted result's (log l - a)^{-1} head has
        // no in-basis derivative)
        const auto da = logseries::differentiate(alpha);
        out["input_derivative"] = nlohmann::json::parse(da.to_json());
    }
    write_file(output, out.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-frequency planar obstacle scattering toolkit"};
    app.require_subcommand(1);
    const std::string cmdline = join_args(argc, argv);

    // capacity
    auto* cap = app.add_subcommand(
        "capacity", "equilibrium-measure solve: Robin constant, logarithmic "
                    "capacity, shift constant a.\nOutput JSON keys: "
                    "robin_constant, log_capacity, capacity, shift_a, panels, "
                    "residual (plus *_richardson with --richardson)");
    std::string cap_geom;
    int cap_panels = 512;
    bool cap_rich = false;
    std::string cap_out = "-";
    cap->add_option("geometry", cap_geom, "geometry JSON file")->required();
    cap->add_option("--panels", cap_panels, "total boundary panels (8..8192)");
    cap->add_flag("--richardson", cap_rich, "add a {N, N/2} extrapolated capacity");
    cap->add_option("--output,-o", cap_out, "output path ('-' = stdout)");

    // disk-ssf
    auto* ssf = app.add_subcommand(
        "disk-ssf", "spectral shift function of a disk vs. its approximations.\n"
                    "CSV columns: x (= rho*sqrt(mu)), mu, xi_exact, xi_arctan, "
                    "xi_mcg1, xi_mcg3; log-spaced in x");
    double ssf_rho = 1.0, ssf_xmin = 0.02, ssf_xmax = 8.0, ssf_tol = 1e-10;
    int ssf_points = 200;
    std::string ssf_out = "-";
    ssf->add_option("--radius", ssf_rho, "disk radius")->required();
    ssf->add_option("--x-min", ssf_xmin, "smallest rho*sqrt(mu)");
    ssf->add_option("--x-max", ssf_xmax, "largest rho*sqrt(mu)");
    ssf->add_option("--points", ssf_points, "number of rows (>= 2)");
    ssf->add_option("--tol", ssf_tol, "truncation tolerance of the l-sum");
    ssf->add_option("--output,-o", ssf_out, "output path ('-' = stdout)");

    // fig1
    auto* fig = app.add_subcommand(
        "fig1", "emit the four reference CSVs (radii 0.15, 1.5, 15, 150) over "
                "x in [0.02, 8], 400 points; files disk_ssf_rho_<r>.csv");
    std::string fig_dir = ".";
    fig->add_option("--output-dir", fig_dir, "directory for the four CSVs");

    // phase
    auto* ph = app.add_subcommand(
        "phase", "leading-order scattering phase and its derivative.\n"
                 "CSV columns: lambda, sigma_leading, sigma_prime_leading");
    std::optional<double> ph_c;
    std::string ph_geom;
    int ph_panels = 512;
    double ph_lmin = 1e-8, ph_lmax = 1e-1;
    int ph_points = 100;
    std::string ph_out = "-";
    double ph_c_value = 0.0;
    auto* ph_c_opt = ph->add_option("--capacity", ph_c_value, "log-capacity C");
    ph->add_option("--geometry", ph_geom, "geometry JSON file (C is solved first)");
    ph->add_option("--panels", ph_panels, "panels for the geometry solve");
    ph->add_option("--lambda-min", ph_lmin, "smallest lambda");
    ph->add_option("--lambda-max", ph_lmax, "largest lambda");
    ph->add_option("--points", ph_points, "number of rows");
    ph->add_option("--output,-o", ph_out, "output path ('-' = stdout)");

    // dtn-eig
    auto* dtn = app.add_subcommand(
        "dtn-eig", "lowest DtN eigenvalue of a disk at lambda = i kappa, exact "
                   "vs. asymptotic.\nCSV columns: kappa, exact, asymptotic, residual");
    double dtn_rho = 1.0, dtn_kmin = 1e-5, dtn_kmax = 1e-2;
    int dtn_points = 50;
    std::string dtn_out = "-";
    dtn->add_option("--radius", dtn_rho, "disk radius")->required();
    dtn->add_option("--kappa-min", dtn_kmin, "smallest kappa");
    dtn->add_option("--kappa-max", dtn_kmax, "largest kappa");
    dtn->add_option("--points", dtn_points, "number of rows");
    dtn->add_option("--output,-o", dtn_out, "output path ('-' = stdout)");

    // series-invert
    auto* ser = app.add_subcommand(
        "series-invert", "invert 1 - (log lambda - log z) alpha(lambda) in the "
                         "mixed basis; output JSON holds the shift a = log z + "
                         "1/alpha_00, plain log-power terms (k >= 1), shifted "
                         "negative-power terms (k <= 0), and an oracle residual");
    std::string ser_path;
    std::vector<double> ser_logz{0.0, 0.0};
    int ser_jcut = 8;
    bool ser_deriv = false;
    std::string ser_out = "-";
    ser->add_option("series", ser_path, "input series JSON")->required();
    ser->add_option("--log-z", ser_logz, "log z as two reals: re im")
        ->expected(2);
    ser->add_option("--j-cut", ser_jcut, "truncation order in lambda");
    ser->add_flag("--derivative", ser_deriv,
                  "also emit the term-by-term derivative of the input series");
    ser->add_option("--output,-o", ser_out, "output path ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (cap->parsed())
            return cmd_capacity(cmdline, cap_geom, cap_panels, cap_rich, cap_out);
        if (ssf->parsed())
            return cmd_disk_ssf(cmdline, ssf_rho, ssf_xmin, ssf_xmax, ssf_points,
                                ssf_tol, ssf_out);
        if (fig->parsed()) return cmd_fig1(cmdline, fig_dir);
        if (ph->parsed()) {
            if (ph_c_opt->count() > 0) ph_c = ph_c_value;
            return cmd_phase(cmdline, ph_c, ph_geom, ph_panels, ph_lmin, ph_lmax,
                             ph_points, ph_out);
        }
        if (dtn->parsed())
            return cmd_dtn_eig(cmdline, dtn_rho, dtn_kmin, dtn_kmax, dtn_points,
                               dtn_out);
        if (ser->parsed())
            return cmd_series_invert(ser_path, ser_logz[0], ser_logz[1], ser_jcut,
                                     ser_deriv, ser_out);
    } catch (const InvalidGeometry& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NonConvergent& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NonConvergentSum& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const SingularSystem& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        // mathematical precondition violations (poles, singular alpha, ...)
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
