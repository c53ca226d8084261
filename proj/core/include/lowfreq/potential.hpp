#ifndef LOWFREQ_POTENTIAL_HPP
#define LOWFREQ_POTENTIAL_HPP

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lowfreq/errors.hpp"

// Obstacle geometry, boundary panelization, and the equilibrium-measure
// solve: Robin constant, log-capacity, capacity, the shift constant
// a = log 2 - gamma - C + i pi/2, and the exterior harmonic function G.

namespace lowfreq::potential {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

struct Circle {
    Vec2 center;
    double radius;
};
struct Ellipse {
    Vec2 center;
    double semi_major; // a >= b > 0, measured before rotation
    double semi_minor;
    double rotation = 0.0;
};
struct Segment {
    Vec2 p0, p1;
};
struct Polygon {
    std::vector<Vec2> vertices; // simple, closed; stored counter-clockwise
};

using Primitive = std::variant<Circle, Ellipse, Segment, Polygon>;

struct Geometry {
    std::vector<Primitive> primitives;
};

// Throws InvalidGeometry on an empty list, degenerate primitives,
// polygon self-intersection, or overlapping primitives.
void validate(const Geometry& g);

Geometry geometry_from_json(const std::string& text);

struct Panel {
    Vec2 midpoint;
    Vec2 a, b;          // endpoints
    double length;      // exact arc length for circles/ellipses
    Vec2 normal;        // unit, pointing away from the obstacle
    int primitive;      // generating primitive
    double t0, t1;      // parameter range on the primitive
};

struct BoundaryMesh {
    std::vector<Panel> panels;
    double total_length = 0.0;
    Geometry geometry;
};

// Panelize the boundary. n_panels is the total across the geometry,
// distributed proportionally to primitive length (at least 8 per primitive
// when there are several). Segments get Chebyshev-graded breakpoints to
// resolve the arcsine endpoint density.
BoundaryMesh build_mesh(const Geometry& g, int n_panels);

// Energy kernel entries used by both mutual_energy and the solve:
// off-diagonal -log|c_i - c_j| between panel midpoints, diagonal
// 1 - log(L_i/2) (the exact panel-averaged self integral per unit mass).
double kernel_entry(const BoundaryMesh& mesh, int i, int j);

// Discrete logarithmic energy sum_{ij} w1_i K_ij w2_j of two panel-mass
// vectors.
double mutual_energy(const BoundaryMesh& mesh,
                     const std::vector<double>& w1,
                     const std::vector<double>& w2);

struct EquilibriumSolution {
    std::vector<double> weights; // panel masses, sum = 1
    double robin_constant;       // constant boundary value of the potential
    double log_capacity;         // C = -V_R
    double capacity;             // e^C
    std::complex<double> shift_a;
    double residual;             // max collocation defect at the midpoints
    int panels;
    double min_weight;
    bool refined; // one automatic refinement was triggered by negative weights
};

// Bordered collocation solve of the equilibrium problem
//   [K 1; 1^T 0][w; V] = [0; 1].
// Throws SingularSystem / NonConvergent / NotResolved.
EquilibriumSolution solve_equilibrium(const BoundaryMesh& mesh);

// log 2 - gamma - C + i pi/2.
std::complex<double> shift_a(double log_capacity);

// G(x) = V_R + sum_i w_i log|x - y_i|; zero on the boundary, and
// G(x) - log|x| -> -C at infinity. Throws TooCloseToBoundary when x is
// within one panel length of the mesh or inside a primitive.
double green_G(const EquilibriumSolution& sol, const BoundaryMesh& mesh, Vec2 x);

// Single-layer potential of the panel masses at an arbitrary point, with
// the exact straight-panel integral per panel (uniform density on each
// chord). Usable on the boundary itself.
double layer_potential(const BoundaryMesh& mesh, const std::vector<double>& w,
                       Vec2 x);

// Discretized check of the Green's identity for the equilibrium potential:
// integral over the boundary of the normal derivative of G, with the normal
// pointing out of the exterior domain (into the obstacle). Exact value -2pi.
double boundary_flux(const EquilibriumSolution& sol, const BoundaryMesh& mesh);

struct CapacityReport {
    EquilibriumSolution solution;
    std::optional<double> log_capacity_richardson;
    std::optional<double> capacity_richardson;
};

// Convenience pipeline: build a mesh, solve, optionally Richardson-
// extrapolate over {N, N/2} assuming first-order panel error.
CapacityReport solve_capacity(const Geometry& g, int n_panels, bool richardson);

std::string report_to_json(const CapacityReport& r);

} // namespace lowfreq::potential

#endif
