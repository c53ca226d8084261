#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "lowfreq/potential.hpp"
#include "lowfreq/specfun.hpp"
#include "oracles.hpp"

using namespace lowfreq;
using namespace lowfreq::potential;

namespace {

constexpr double pi = 3.14159265358979323846;

Geometry circle_geom(double r, Vec2 c = {0, 0}) {
    Geometry g;
    g.primitives.push_back(Circle{c, r});
    return g;
}

Geometry segment_geom(Vec2 a, Vec2 b) {
    Geometry g;
    g.primitives.push_back(Segment{a, b});
    return g;
}

Geometry ellipse_geom(double a, double b, double rot = 0.0, Vec2 c = {0, 0}) {
    Geometry g;
    g.primitives.push_back(Ellipse{c, a, b, rot});
    return g;
}

} // namespace

TEST_CASE("geometry validation") {
    CHECK_THROWS_AS(validate(Geometry{}), InvalidGeometry);
    CHECK_THROWS_AS(validate(segment_geom({0, 0}, {0, 0})), InvalidGeometry);
    Geometry bowtie;
    bowtie.primitives.push_back(
        Polygon{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}});
    CHECK_THROWS_AS(validate(bowtie), InvalidGeometry);
    Geometry overlapping;
    overlapping.primitives.push_back(Circle{{0, 0}, 1.0});
    overlapping.primitives.push_back(Circle{{0.5, 0}, 1.0});
    CHECK_THROWS_AS(validate(overlapping), InvalidGeometry);
    Geometry nested;
    nested.primitives.push_back(Circle{{0, 0}, 2.0});
    nested.primitives.push_back(Circle{{0, 0}, 0.5});
    CHECK_THROWS_AS(validate(nested), InvalidGeometry);
    // two disjoint pieces are fine
    Geometry two;
    two.primitives.push_back(Circle{{0, 0}, 1.0});
    two.primitives.push_back(Circle{{5, 0}, 1.0});
    CHECK_NOTHROW(validate(two));
}

TEST_CASE("geometry JSON parsing") {
    const auto g = geometry_from_json(R"({"primitives":[
        {"type":"circle","center":[0,0],"radius":1.0},
        {"type":"segment","p0":[4,0],"p1":[6,0]},
        {"type":"ellipse","center":[0,6],"semi_axes":[2,1],"rotation":0.3},
        {"type":"polygon","vertices":[[10,0],[11,0],[11,1],[10,1]]}]})");
    CHECK(g.primitives.size() == 4);
    CHECK_THROWS_AS(geometry_from_json("{"), InvalidGeometry);
    CHECK_THROWS_AS(geometry_from_json(R"({"primitives":[]})"), InvalidGeometry);
    CHECK_THROWS_AS(geometry_from_json(R"({"primitives":[{"type":"blob"}]})"),
                    InvalidGeometry);
}

TEST_CASE("mesh of a circle with four panels") {
    const auto mesh = build_mesh(circle_geom(1.0), 4);
    REQUIRE(mesh.panels.size() == 4);
    for (int i = 0; i < 4; ++i) {
        const auto& p = mesh.panels[static_cast<size_t>(i)];
        CHECK(p.length == doctest::Approx(2.0 * pi / 4.0).epsilon(1e-14));
        // midpoints at angles pi/4 + k pi/2
        const double ang = std::atan2(p.midpoint.y, p.midpoint.x);
        const double expected = pi / 4.0 + i * pi / 2.0;
        const double wrapped = expected > pi ? expected - 2.0 * pi : expected;
        CHECK(ang == doctest::Approx(wrapped).epsilon(1e-12));
    }
    CHECK(mesh.total_length == doctest::Approx(2.0 * pi).epsilon(1e-12));
}

TEST_CASE("segment mesh uses Chebyshev breakpoints") {
    const auto mesh = build_mesh(segment_geom({0, 0}, {1, 0}), 2);
    REQUIRE(mesh.panels.size() == 2);
    // breakpoints 0, (1 - cos(pi/2))/2 = 1/2, 1
    CHECK(mesh.panels[0].a.x == doctest::Approx(0.0));
    CHECK(mesh.panels[0].b.x == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mesh.panels[1].b.x == doctest::Approx(1.0));
    const auto fine = build_mesh(segment_geom({0, 0}, {1, 0}), 8);
    // graded: end panels shorter than middle ones
    CHECK(fine.panels.front().length < fine.panels[3].length);
    CHECK(fine.panels.back().length < fine.panels[4].length);
}

TEST_CASE("ellipse mesh length matches the quadrature oracle") {
    const auto mesh = build_mesh(ellipse_geom(2.0, 1.0), 256);
    const double oracle = oracles::simpson(
        [](double t) {
            const double sx = 2.0 * std::sin(t), cy = 1.0 * std::cos(t);
            return std::hypot(sx, cy);
        },
        0.0, 2.0 * pi, 200000);
    CHECK(mesh.total_length == doctest::Approx(oracle).epsilon(1e-9));
    // equal-arc panels
    for (const auto& p : mesh.panels)
        CHECK(p.length == doctest::Approx(oracle / 256.0).epsilon(1e-8));
}

TEST_CASE("mutual energy of separated point-like masses") {
    const auto mesh = build_mesh(segment_geom({0, 0}, {1, 0}), 8);
    std::vector<double> w1(8, 0.0), w2(8, 0.0);
    w1[1] = 1.0;
    w2[6] = 1.0;
    const double d = norm(mesh.panels[1].midpoint - mesh.panels[6].midpoint);
    CHECK(mutual_energy(mesh, w1, w2) == doctest::Approx(std::log(1.0 / d)).epsilon(1e-14));
    std::vector<double> bad(7, 0.0);
    CHECK_THROWS_AS(mutual_energy(mesh, w1, bad), DimensionMismatch);
}

TEST_CASE("uniform circle energy converges to -log rho") {
    for (const double rho : {1.0, 2.0}) {
        double prev_err = 1e9;
        for (const int n : {64, 128, 256}) {
            const auto mesh = build_mesh(circle_geom(rho), n);
            std::vector<double> w(static_cast<size_t>(n), 1.0 / n);
            const double err = std::abs(mutual_energy(mesh, w, w) + std::log(rho));
            CHECK(err < prev_err + 1e-12);
            prev_err = err;
        }
        CHECK(prev_err < 5e-3);
    }
}

TEST_CASE("equilibrium solve on circles") {
    const auto sol = solve_equilibrium(build_mesh(circle_geom(1.0), 512));
    CHECK(std::abs(sol.capacity - 1.0) < 1e-3);
    // weights uniform by symmetry
    for (const double w : sol.weights)
        CHECK(w == doctest::Approx(1.0 / 512).epsilon(1e-6));
    CHECK(std::abs(std::accumulate(sol.weights.begin(), sol.weights.end(), 0.0) - 1.0)
          < 1e-12);

    const auto sol2 = solve_equilibrium(build_mesh(circle_geom(2.0), 512));
    CHECK(std::abs(sol2.log_capacity - std::log(2.0)) < 1e-3);
    CHECK(std::abs(sol2.robin_constant + sol2.log_capacity) < 1e-14);
    // shift a = -gamma + i pi/2 at C = log 2
    CHECK(sol2.shift_a.real()
          == doctest::Approx(std::log(2.0) - specfun::euler_gamma - sol2.log_capacity)
                 .epsilon(1e-14));
    CHECK(sol2.shift_a.imag() == doctest::Approx(pi / 2.0));
}

TEST_CASE("segment of length 4 has capacity 1 and arcsine profile") {
    const int n = 512;
    const auto sol = solve_equilibrium(build_mesh(segment_geom({-2, 0}, {2, 0}), n));
    CHECK(std::abs(sol.capacity - 1.0) < 5e-3);
    // Chebyshev panels carry equal arcsine mass 1/n exactly
    double chi2 = 0.0;
    for (const double w : sol.weights) {
        const double m = 1.0 / n;
        chi2 += (w - m) * (w - m) / m;
    }
    CHECK(chi2 < 1e-3);
}

TEST_CASE("green_G on the unit circle") {
    const auto mesh = build_mesh(circle_geom(1.0), 512);
    const auto sol = solve_equilibrium(mesh);
    for (const double r : {2.0, 10.0}) {
        // G carries the solve's own far-field constant: G = log r - C_N with
        // the midpoint sum reproducing the circle average exponentially well
        const double g = green_G(sol, mesh, {r, 0.0});
        CHECK(std::abs(g - std::log(r) + sol.log_capacity) < 1e-6);
        CHECK(g == doctest::Approx(std::log(r)).epsilon(1e-3));
        // mean-value oracle: (1/2pi) int log|x - e^{i t}| dt = log|x|
        const double oracle = oracles::simpson(
            [&](double t) {
                return 0.5 * std::log((r - std::cos(t)) * (r - std::cos(t))
                                      + std::sin(t) * std::sin(t));
            },
            0.0, 2.0 * pi, 40000) / (2.0 * pi);
        CHECK(oracle == doctest::Approx(std::log(r)).epsilon(1e-10));
    }
    // far field: G - log|x| -> -C
    const double far = green_G(sol, mesh, {1e6, 0.0});
    CHECK(std::abs(far - std::log(1e6) + sol.log_capacity) < 1e-5);
    // boundary limit: small and shrinking under refinement
    const double l1 = mesh.panels[0].length;
    const double g1 = green_G(sol, mesh, {1.0 + 1.5 * l1, 0.0});
    const auto mesh2 = build_mesh(circle_geom(1.0), 1024);
    const auto sol2 = solve_equilibrium(mesh2);
    const double l2 = mesh2.panels[0].length;
    const double g2 = green_G(sol2, mesh2, {1.0 + 1.5 * l2, 0.0});
    CHECK(std::abs(g1) < 2.0 * 1.5 * l1);
    CHECK(std::abs(g2) < std::abs(g1));
    CHECK_THROWS_AS(green_G(sol, mesh, {1.0 + 0.5 * l1, 0.0}), TooCloseToBoundary);
    CHECK_THROWS_AS(green_G(sol, mesh, {0.0, 0.0}), TooCloseToBoundary);
}

TEST_CASE("shift constant") {
    const auto a0 = shift_a(0.0);
    CHECK(a0.real() == doctest::Approx(0.1159315156584124).epsilon(1e-14));
    CHECK(a0.imag() == doctest::Approx(1.5707963267948966).epsilon(1e-15));
    const auto a2 = shift_a(std::log(2.0));
    CHECK(a2.real() == doctest::Approx(-specfun::euler_gamma).epsilon(1e-14));
    // scaling linearity: a(log(s rho)) - a(log rho) = -log s
    const auto d = shift_a(std::log(3.0 * 1.7)) - shift_a(std::log(1.7));
    CHECK(d.real() == doctest::Approx(-std::log(3.0)).epsilon(1e-13));
    CHECK(d.imag() == 0.0);
}

TEST_CASE("capacity scaling law") {
    struct Case {
        Geometry g;
        Geometry scaled;
        double s;
    };
    for (const double s : {0.5, 2.0, 10.0}) {
        const auto c1 = solve_equilibrium(build_mesh(circle_geom(1.3), 512));
        const auto c2 = solve_equilibrium(build_mesh(circle_geom(1.3 * s), 512));
        CHECK(std::abs(c2.log_capacity - c1.log_capacity - std::log(s)) < 5e-3);

        const auto e1 = solve_equilibrium(build_mesh(ellipse_geom(2.0, 1.0), 512));
        const auto e2 =
            solve_equilibrium(build_mesh(ellipse_geom(2.0 * s, 1.0 * s), 512));
        CHECK(std::abs(e2.log_capacity - e1.log_capacity - std::log(s)) < 5e-3);

        const auto s1 = solve_equilibrium(build_mesh(segment_geom({0, 0}, {1, 0}), 512));
        const auto s2 =
            solve_equilibrium(build_mesh(segment_geom({0, 0}, {s, 0}), 512));
        CHECK(std::abs(s2.log_capacity - s1.log_capacity - std::log(s)) < 5e-3);
    }
}

TEST_CASE("capacity is invariant under rigid motions") {
    const auto base = solve_equilibrium(build_mesh(ellipse_geom(2.0, 1.0), 256));
    const auto moved = solve_equilibrium(
        build_mesh(ellipse_geom(2.0, 1.0, 0.77, {13.0, -4.0}), 256));
    CHECK(std::abs(moved.log_capacity - base.log_capacity) < 1e-6);

    const auto seg = solve_equilibrium(build_mesh(segment_geom({0, 0}, {4, 0}), 256));
    const double c = std::cos(1.1), s = std::sin(1.1);
    const auto rot = solve_equilibrium(
        build_mesh(segment_geom({2, 3}, {2 + 4 * c, 3 + 4 * s}), 256));
    CHECK(std::abs(rot.log_capacity - seg.log_capacity) < 1e-6);
}

TEST_CASE("capacity monotonicity under inclusion") {
    const auto inner = solve_equilibrium(build_mesh(circle_geom(1.0), 256));
    const auto outer = solve_equilibrium(build_mesh(circle_geom(2.0), 256));
    CHECK(inner.capacity <= outer.capacity + 1e-4);

    // segment inside a surrounding rectangle
    const auto seg = solve_equilibrium(build_mesh(segment_geom({-1, 0}, {1, 0}), 256));
    Geometry rect;
    rect.primitives.push_back(
        Polygon{{{-1.2, -0.3}, {1.2, -0.3}, {1.2, 0.3}, {-1.2, 0.3}}});
    const auto hull = solve_equilibrium(build_mesh(rect, 256));
    CHECK(seg.capacity <= hull.capacity + 1e-4);
}

TEST_CASE("equilibrium weights minimize the energy") {
    const auto mesh = build_mesh(ellipse_geom(2.0, 1.0), 128);
    const auto sol = solve_equilibrium(mesh);
    const double e0 = mutual_energy(mesh, sol.weights, sol.weights);
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> w = sol.weights;
        double shift_sum = 0.0;
        for (auto& v : w) {
            const double dv = 1e-3 * d(rng) / 128.0;
            v += dv;
            shift_sum += dv;
        }
        for (auto& v : w) v -= shift_sum / 128.0; // restore total mass 1
        CHECK(e0 <= mutual_energy(mesh, w, w) + 1e-8);
    }
}

TEST_CASE("equilibrium potential is constant on the boundary") {
    for (const auto& g : {circle_geom(1.0), ellipse_geom(2.0, 1.0)}) {
        const auto mesh = build_mesh(g, 512);
        const auto sol = solve_equilibrium(mesh);
        // collocated potential at the panel midpoints
        double lo = 1e300, hi = -1e300;
        for (size_t i = 0; i < mesh.panels.size(); ++i) {
            double u = 0.0;
            for (size_t j = 0; j < mesh.panels.size(); ++j)
                u += kernel_entry(mesh, static_cast<int>(i), static_cast<int>(j))
                   * sol.weights[j];
            lo = std::min(lo, u);
            hi = std::max(hi, u);
        }
        CHECK(hi - lo < 1e-4);
        // off-collocation probe at panel quarter points, exact chord integrals
        double qlo = 1e300, qhi = -1e300;
        for (size_t i = 0; i < mesh.panels.size(); i += 7) {
            const auto& p = mesh.panels[i];
            const Vec2 q{0.75 * p.a.x + 0.25 * p.b.x, 0.75 * p.a.y + 0.25 * p.b.y};
            const double u = layer_potential(mesh, sol.weights, q);
            qlo = std::min(qlo, u);
            qhi = std::max(qhi, u);
        }
        CHECK(qhi - qlo < 5e-4);
    }
}

TEST_CASE("boundary flux of G is -2 pi") {
    for (const auto& g : {circle_geom(1.0), ellipse_geom(2.0, 1.0)}) {
        const auto mesh = build_mesh(g, 512);
        const auto sol = solve_equilibrium(mesh);
        CHECK(std::abs(boundary_flux(sol, mesh) + 2.0 * pi) < 1e-2 * 2.0 * pi);
    }
}

TEST_CASE("polygon with corners solves and may refine") {
    Geometry square;
    square.primitives.push_back(Polygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}});
    const auto sol = solve_equilibrium(build_mesh(square, 64));
    // capacity of the unit square: s * Gamma(1/4)^2 / (4 pi^{3/2})
    const double exact = 0.5901702995080481;
    CHECK(std::abs(sol.capacity - exact) < 5e-3);
}

TEST_CASE("richardson extrapolation sharpens the circle") {
    const auto rep = solve_capacity(circle_geom(1.0), 512, true);
    CHECK(std::abs(rep.solution.capacity - 1.0) < 1e-3);
    CHECK(std::abs(*rep.capacity_richardson - 1.0) < 1e-5);
}

TEST_CASE("multi-component geometry keeps a single charge constraint") {
    Geometry two;
    two.primitives.push_back(Circle{{-3, 0}, 1.0});
    two.primitives.push_back(Circle{{3, 0}, 1.0});
    const auto mesh = build_mesh(two, 512);
    const auto sol = solve_equilibrium(mesh);
    CHECK(std::abs(std::accumulate(sol.weights.begin(), sol.weights.end(), 0.0) - 1.0)
          < 1e-12);
    // two identical far-apart disks split the charge nearly evenly
    double left = 0.0;
    for (size_t i = 0; i < mesh.panels.size(); ++i)
        if (mesh.panels[i].midpoint.x < 0) left += sol.weights[i];
    CHECK(left == doctest::Approx(0.5).epsilon(1e-6));
    // capacity exceeds a single disk's
    CHECK(sol.capacity > 1.0);
}
