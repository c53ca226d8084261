#include "lowfreq/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <json.hpp>

#include "lowfreq/specfun.hpp" // euler_gamma

namespace lowfreq::potential {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr int panel_cap = 8192;

double ellipse_speed(const Ellipse& e, double t) {
    const double sx = e.semi_major * std::sin(t);
    const double cy = e.semi_minor * std::cos(t);
    return std::hypot(sx, cy);
}

// adaptive Simpson for the ellipse arc length
double simpson(const Ellipse& e, double a, double b) {
    const double c = 0.5 * (a + b);
    return (b - a) / 6.0 * (ellipse_speed(e, a) + 4.0 * ellipse_speed(e, c)
                            + ellipse_speed(e, b));
}

double adaptive_arc(const Ellipse& e, double a, double b, double whole, double tol,
                    int depth) {
    const double c = 0.5 * (a + b);
    const double left = simpson(e, a, c), right = simpson(e, c, b);
    if (depth > 40 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_arc(e, a, c, left, tol / 2.0, depth + 1)
         + adaptive_arc(e, c, b, right, tol / 2.0, depth + 1);
}

double ellipse_arc(const Ellipse& e, double a, double b) {
    if (a == b) return 0.0;
    return adaptive_arc(e, a, b, simpson(e, a, b), 1e-13, 0);
}

Vec2 ellipse_point(const Ellipse& e, double t) {
    const double cr = std::cos(e.rotation), sr = std::sin(e.rotation);
    const double px = e.semi_major * std::cos(t), py = e.semi_minor * std::sin(t);
    return {e.center.x + cr * px - sr * py, e.center.y + sr * px + cr * py};
}

double primitive_length(const Primitive& p) {
    if (const auto* c = std::get_if<Circle>(&p)) return 2.0 * pi * c->radius;
    if (const auto* e = std::get_if<Ellipse>(&p)) return ellipse_arc(*e, 0.0, 2.0 * pi);
    if (const auto* s = std::get_if<Segment>(&p)) return norm(s->p1 - s->p0);
    const auto& poly = std::get<Polygon>(p);
    double len = 0.0;
    for (size_t i = 0; i < poly.vertices.size(); ++i) {
        len += norm(poly.vertices[(i + 1) % poly.vertices.size()] - poly.vertices[i]);
    }
    return len;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto cross = [](Vec2 u, Vec2 v) { return u.x * v.y - u.y * v.x; };
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

struct Box {
    double xmin, xmax, ymin, ymax;
};

Box bounding_box(const Primitive& p) {
    if (const auto* c = std::get_if<Circle>(&p)) {
        return {c->center.x - c->radius, c->center.x + c->radius,
                c->center.y - c->radius, c->center.y + c->radius};
    }
    if (const auto* e = std::get_if<Ellipse>(&p)) {
        const double r = e->semi_major;
        return {e->center.x - r, e->center.x + r, e->center.y - r, e->center.y + r};
    }
    if (const auto* s = std::get_if<Segment>(&p)) {
        return {std::min(s->p0.x, s->p1.x), std::max(s->p0.x, s->p1.x),
                std::min(s->p0.y, s->p1.y), std::max(s->p0.y, s->p1.y)};
    }
    const auto& poly = std::get<Polygon>(p);
    Box b{poly.vertices[0].x, poly.vertices[0].x, poly.vertices[0].y, poly.vertices[0].y};
    for (const auto& v : poly.vertices) {
        b.xmin = std::min(b.xmin, v.x);
        b.xmax = std::max(b.xmax, v.x);
        b.ymin = std::min(b.ymin, v.y);
        b.ymax = std::max(b.ymax, v.y);
    }
    return b;
}

bool boxes_overlap(const Box& a, const Box& b) {
    return a.xmin <= b.xmax && b.xmin <= a.xmax && a.ymin <= b.ymax && b.ymin <= a.ymax;
}

std::vector<Vec2> sample_boundary(const Primitive& p, int n) {
    std::vector<Vec2> pts;
    pts.reserve(static_cast<size_t>(n));
    if (const auto* c = std::get_if<Circle>(&p)) {
        for (int i = 0; i < n; ++i) {
            const double t = 2.0 * pi * i / n;
            pts.push_back({c->center.x + c->radius * std::cos(t),
                           c->center.y + c->radius * std::sin(t)});
        }
    } else if (const auto* e = std::get_if<Ellipse>(&p)) {
        for (int i = 0; i < n; ++i) pts.push_back(ellipse_point(*e, 2.0 * pi * i / n));
    } else if (const auto* s = std::get_if<Segment>(&p)) {
        for (int i = 0; i < n; ++i) {
            const double u = static_cast<double>(i) / (n - 1);
            pts.push_back(s->p0 + u * (s->p1 - s->p0));
        }
    } else {
        const auto& poly = std::get<Polygon>(p);
        const size_t m = poly.vertices.size();
        for (int i = 0; i < n; ++i) {
            const double u = static_cast<double>(i) / n * static_cast<double>(m);
            const size_t edge = std::min(static_cast<size_t>(u), m - 1);
            const double frac = u - static_cast<double>(edge);
            pts.push_back(poly.vertices[edge]
                          + frac * (poly.vertices[(edge + 1) % m] - poly.vertices[edge]));
        }
    }
    return pts;
}

double polygon_signed_area(const Polygon& p) {
    double a = 0.0;
    const size_t m = p.vertices.size();
    for (size_t i = 0; i < m; ++i) {
        const Vec2& u = p.vertices[i];
        const Vec2& v = p.vertices[(i + 1) % m];
        a += u.x * v.y - u.y * v.x;
    }
    return 0.5 * a;
}

bool point_in_primitive(const Primitive& p, Vec2 x) {
    if (const auto* c = std::get_if<Circle>(&p)) return norm(x - c->center) < c->radius;
    if (const auto* e = std::get_if<Ellipse>(&p)) {
        const double cr = std::cos(e->rotation), sr = std::sin(e->rotation);
        const Vec2 d = x - e->center;
        const double u = cr * d.x + sr * d.y, v = -sr * d.x + cr * d.y;
        const double q = u * u / (e->semi_major * e->semi_major)
                       + v * v / (e->semi_minor * e->semi_minor);
        return q < 1.0;
    }
    if (std::holds_alternative<Segment>(p)) return false;
    const auto& poly = std::get<Polygon>(p);
    bool inside = false;
    const size_t m = poly.vertices.size();
    for (size_t i = 0, j = m - 1; i < m; j = i++) {
        const Vec2& vi = poly.vertices[i];
        const Vec2& vj = poly.vertices[j];
        if ((vi.y > x.y) != (vj.y > x.y)
            && x.x < (vj.x - vi.x) * (x.y - vi.y) / (vj.y - vi.y) + vi.x) {
            inside = !inside;
        }
    }
    return inside;
}

} // namespace

void validate(const Geometry& g) {
    if (g.primitives.empty()) throw InvalidGeometry("geometry has no primitives");
    for (const auto& p : g.primitives) {
        if (const auto* c = std::get_if<Circle>(&p)) {
            if (!(c->radius > 0.0)) throw InvalidGeometry("circle radius must be > 0");
        } else if (const auto* e = std::get_if<Ellipse>(&p)) {
            if (!(e->semi_major >= e->semi_minor) || !(e->semi_minor > 0.0))
                throw InvalidGeometry("ellipse requires a >= b > 0");
        } else if (const auto* s = std::get_if<Segment>(&p)) {
            if (!(norm(s->p1 - s->p0) > 0.0))
                throw InvalidGeometry("segment endpoints coincide");
        } else {
            const auto& poly = std::get<Polygon>(p);
            const size_t m = poly.vertices.size();
            if (m < 3) throw InvalidGeometry("polygon needs at least 3 vertices");
            for (size_t i = 0; i < m; ++i) {
                if (!(norm(poly.vertices[(i + 1) % m] - poly.vertices[i]) > 0.0))
                    throw InvalidGeometry("polygon has a zero-length edge");
                for (size_t j = i + 1; j < m; ++j) {
                    if (j == i || (j + 1) % m == i || (i + 1) % m == j) continue;
                    if (segments_intersect(poly.vertices[i], poly.vertices[(i + 1) % m],
                                           poly.vertices[j], poly.vertices[(j + 1) % m]))
                        throw InvalidGeometry("polygon self-intersects");
                }
            }
        }
    }
    // pairwise disjointness: bounding boxes plus sampled distances
    const size_t n = g.primitives.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (!boxes_overlap(bounding_box(g.primitives[i]),
                               bounding_box(g.primitives[j])))
                continue;
            const auto a = sample_boundary(g.primitives[i], 128);
            const auto b = sample_boundary(g.primitives[j], 128);
            double dist = std::numeric_limits<double>::max();
            for (const auto& u : a)
                for (const auto& v : b) dist = std::min(dist, norm(u - v));
            bool contained = point_in_primitive(g.primitives[i], b.front())
                          || point_in_primitive(g.primitives[j], a.front());
            if (dist < 1e-9 || contained)
                throw InvalidGeometry("primitives are not pairwise disjoint");
        }
    }
}

Geometry geometry_from_json(const std::string& text) {
    nlohmann::json in;
    try {
        in = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidGeometry(std::string("geometry JSON parse failed: ") + e.what());
    }
    Geometry g;
    try {
        for (const auto& p : in.at("primitives")) {
            const std::string type = p.at("type").get<std::string>();
            if (type == "circle") {
                g.primitives.push_back(Circle{
                    {p.at("center").at(0).get<double>(), p.at("center").at(1).get<double>()},
                    p.at("radius").get<double>()});
            } else if (type == "ellipse") {
                g.primitives.push_back(Ellipse{
                    {p.at("center").at(0).get<double>(), p.at("center").at(1).get<double>()},
                    p.at("semi_axes").at(0).get<double>(),
                    p.at("semi_axes").at(1).get<double>(),
                    p.value("rotation", 0.0)});
            } else if (type == "segment") {
                g.primitives.push_back(Segment{
                    {p.at("p0").at(0).get<double>(), p.at("p0").at(1).get<double>()},
                    {p.at("p1").at(0).get<double>(), p.at("p1").at(1).get<double>()}});
            } else if (type == "polygon") {
                Polygon poly;
                for (const auto& v : p.at("vertices"))
                    poly.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
                g.primitives.push_back(std::move(poly));
            } else {
                throw InvalidGeometry("unknown primitive type: " + type);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidGeometry(std::string("geometry JSON invalid: ") + e.what());
    }
    validate(g);
    return g;
}

namespace {

void mesh_circle(BoundaryMesh& mesh, const Circle& c, int n, int prim) {
    for (int i = 0; i < n; ++i) {
        const double t0 = 2.0 * pi * i / n, t1 = 2.0 * pi * (i + 1) / n;
        const double tm = 0.5 * (t0 + t1);
        Panel p;
        p.a = {c.center.x + c.radius * std::cos(t0), c.center.y + c.radius * std::sin(t0)};
        p.b = {c.center.x + c.radius * std::cos(t1), c.center.y + c.radius * std::sin(t1)};
        p.midpoint = {c.center.x + c.radius * std::cos(tm),
                      c.center.y + c.radius * std::sin(tm)};
        p.length = c.radius * (t1 - t0);
        p.normal = {std::cos(tm), std::sin(tm)};
        p.primitive = prim;
        p.t0 = t0;
        p.t1 = t1;
        mesh.panels.push_back(p);
    }
}

// Cumulative arc-length table over a fine uniform parameter grid; the
// inverse s(t) = target is a table lookup plus a few local Newton steps.
struct EllipseArcTable {
    const Ellipse& e;
    double cell;
    std::vector<double> cum;

    explicit EllipseArcTable(const Ellipse& el, int n_panels) : e(el) {
        const int m = std::max(4096, 8 * n_panels);
        cell = 2.0 * pi / m;
        cum.resize(static_cast<size_t>(m) + 1, 0.0);
        for (int i = 0; i < m; ++i) {
            const double a = i * cell;
            cum[static_cast<size_t>(i) + 1] =
                cum[static_cast<size_t>(i)]
                + cell / 6.0 * (ellipse_speed(e, a)
                                + 4.0 * ellipse_speed(e, a + 0.5 * cell)
                                + ellipse_speed(e, a + cell));
        }
    }

    double total() const { return cum.back(); }

    double local_arc(double a, double b) const { // |b - a| <= one cell
        const double c = 0.5 * (a + b);
        return (b - a) / 6.0 * (ellipse_speed(e, a) + 4.0 * ellipse_speed(e, c)
                                + ellipse_speed(e, b));
    }

    double param_at(double target) const {
        if (target <= 0.0) return 0.0;
        if (target >= total()) return 2.0 * pi;
        const auto it = std::upper_bound(cum.begin(), cum.end(), target);
        const size_t i = static_cast<size_t>(it - cum.begin()) - 1;
        const double t0 = static_cast<double>(i) * cell;
        const double want = target - cum[i];
        double t = t0 + want / ellipse_speed(e, t0 + 0.5 * cell);
        for (int k = 0; k < 6; ++k) {
            const double f = local_arc(t0, t) - want;
            const double step = f / ellipse_speed(e, t);
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        return t;
    }
};

void mesh_ellipse(BoundaryMesh& mesh, const Ellipse& e, int n, int prim) {
    const EllipseArcTable table(e, n);
    const double total = table.total();
    std::vector<double> breaks(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        breaks[static_cast<size_t>(i)] = table.param_at(total * i / n);
    for (int i = 0; i < n; ++i) {
        const double t0 = breaks[static_cast<size_t>(i)], t1 = breaks[static_cast<size_t>(i) + 1];
        const double tm = table.param_at(total * (i + 0.5) / n);
        Panel p;
        p.a = ellipse_point(e, t0);
        p.b = ellipse_point(e, t1);
        p.midpoint = ellipse_point(e, tm);
        p.length = total / n;
        const double cr = std::cos(e.rotation), sr = std::sin(e.rotation);
        const double tx = -e.semi_major * std::sin(tm), ty = e.semi_minor * std::cos(tm);
        const Vec2 tang{cr * tx - sr * ty, sr * tx + cr * ty};
        const double tn = norm(tang);
        p.normal = {tang.y / tn, -tang.x / tn}; // CCW parameterization: outward
        p.primitive = prim;
        p.t0 = t0;
        p.t1 = t1;
        mesh.panels.push_back(p);
    }
}

void mesh_segment(BoundaryMesh& mesh, const Segment& s, int n, int prim) {
    const Vec2 d = s.p1 - s.p0;
    const double len = norm(d);
    const Vec2 nrm{-d.y / len, d.x / len};
    auto breakpt = [&](int i) { return 0.5 * (1.0 - std::cos(pi * i / n)); };
    for (int i = 0; i < n; ++i) {
        const double u0 = breakpt(i), u1 = breakpt(i + 1);
        Panel p;
        p.a = s.p0 + u0 * d;
        p.b = s.p0 + u1 * d;
        p.midpoint = s.p0 + (0.5 * (u0 + u1)) * d;
        p.length = (u1 - u0) * len;
        p.normal = nrm; // one-sided label; segments are two-sided slits
        p.primitive = prim;
        p.t0 = u0;
        p.t1 = u1;
        mesh.panels.push_back(p);
    }
}

void mesh_polygon(BoundaryMesh& mesh, const Polygon& poly_in, int n, int prim) {
    Polygon poly = poly_in;
    if (polygon_signed_area(poly) < 0.0)
        std::reverse(poly.vertices.begin(), poly.vertices.end());
    const size_t m = poly.vertices.size();
    std::vector<double> elen(m);
    double total = 0.0;
    for (size_t i = 0; i < m; ++i) {
        elen[i] = norm(poly.vertices[(i + 1) % m] - poly.vertices[i]);
        total += elen[i];
    }
    // distribute panels over edges proportionally, at least one per edge
    std::vector<int> per_edge(m, 1);
    int assigned = static_cast<int>(m);
    for (size_t i = 0; i < m && assigned < n; ++i) {
        const int extra = std::min(n - assigned,
            static_cast<int>(std::lround(elen[i] / total * n)) - 1);
        if (extra > 0) {
            per_edge[i] += extra;
            assigned += extra;
        }
    }
    size_t i = 0;
    while (assigned < n) { // distribute any remainder round-robin
        per_edge[i % m] += 1;
        ++assigned;
        ++i;
    }
    for (size_t e = 0; e < m; ++e) {
        const Vec2 v0 = poly.vertices[e], v1 = poly.vertices[(e + 1) % m];
        const Vec2 d = v1 - v0;
        const Vec2 nrm{d.y / elen[e], -d.x / elen[e]}; // CCW: outward
        for (int k = 0; k < per_edge[e]; ++k) {
            const double u0 = static_cast<double>(k) / per_edge[e];
            const double u1 = static_cast<double>(k + 1) / per_edge[e];
            Panel p;
            p.a = v0 + u0 * d;
            p.b = v0 + u1 * d;
            p.midpoint = v0 + (0.5 * (u0 + u1)) * d;
            p.length = (u1 - u0) * elen[e];
            p.normal = nrm;
            p.primitive = prim;
            p.t0 = static_cast<double>(e) + u0;
            p.t1 = static_cast<double>(e) + u1;
            mesh.panels.push_back(p);
        }
    }
}

} // namespace

BoundaryMesh build_mesh(const Geometry& g, int n_panels) {
    validate(g);
    if (n_panels < 1) throw InvalidGeometry("panel count must be positive");
    if (n_panels > panel_cap) throw InvalidGeometry("panel count exceeds cap 8192");

    BoundaryMesh mesh;
    mesh.geometry = g;
    const size_t np = g.primitives.size();
    std::vector<double> lens(np);
    double total = 0.0;
    for (size_t i = 0; i < np; ++i) {
        lens[i] = primitive_length(g.primitives[i]);
        total += lens[i];
    }
    std::vector<int> counts(np);
    if (np == 1) {
        counts[0] = n_panels;
    } else {
        int assigned = 0;
        for (size_t i = 0; i < np; ++i) {
            counts[i] = std::max(8, static_cast<int>(std::lround(lens[i] / total * n_panels)));
            assigned += counts[i];
        }
        // trim or pad on the largest primitive to hit the requested total
        const size_t big = static_cast<size_t>(
            std::max_element(lens.begin(), lens.end()) - lens.begin());
        counts[big] = std::max(8, counts[big] + (n_panels - assigned));
    }

    for (size_t i = 0; i < np; ++i) {
        const int prim = static_cast<int>(i);
        if (const auto* c = std::get_if<Circle>(&g.primitives[i]))
            mesh_circle(mesh, *c, counts[i], prim);
        else if (const auto* e = std::get_if<Ellipse>(&g.primitives[i]))
            mesh_ellipse(mesh, *e, counts[i], prim);
        else if (const auto* s = std::get_if<Segment>(&g.primitives[i]))
            mesh_segment(mesh, *s, counts[i], prim);
        else
            mesh_polygon(mesh, std::get<Polygon>(g.primitives[i]), counts[i], prim);
    }
    mesh.total_length = 0.0;
    for (const auto& p : mesh.panels) mesh.total_length += p.length;
    return mesh;
}

double kernel_entry(const BoundaryMesh& mesh, int i, int j) {
    if (i == j) {
        const double l = mesh.panels[static_cast<size_t>(i)].length;
        return 1.0 - std::log(l / 2.0);
    }
    const double d = norm(mesh.panels[static_cast<size_t>(i)].midpoint
                          - mesh.panels[static_cast<size_t>(j)].midpoint);
    return -std::log(d);
}

double mutual_energy(const BoundaryMesh& mesh, const std::vector<double>& w1,
                     const std::vector<double>& w2) {
    const size_t n = mesh.panels.size();
    if (w1.size() != n || w2.size() != n)
        throw DimensionMismatch("weight vector size does not match panel count");
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (size_t j = 0; j < n; ++j) {
            row += kernel_entry(mesh, static_cast<int>(i), static_cast<int>(j)) * w2[j];
        }
        acc += w1[i] * row;
    }
    return acc;
}

namespace {

EquilibriumSolution solve_once(const BoundaryMesh& mesh) {
    const int n = static_cast<int>(mesh.panels.size());
    if (n < 8) throw InvalidGeometry("equilibrium solve requires at least 8 panels");

    Eigen::MatrixXd m(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = kernel_entry(mesh, i, j);
            m(i, j) = v;
            m(j, i) = v;
        }
        m(i, n) = 1.0;
        m(n, i) = 1.0;
    }
    m(n, n) = 0.0;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(n) = 1.0;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    Eigen::VectorXd sol = lu.solve(rhs);
    if (!sol.allFinite()) throw SingularSystem("equilibrium system is singular");

    EquilibriumSolution out;
    out.weights.assign(sol.data(), sol.data() + n);
    const double v_mult = sol(n);
    out.log_capacity = v_mult;       // multiplier equals -U on the boundary
    out.robin_constant = -v_mult;    // potential's constant boundary value
    out.capacity = std::exp(out.log_capacity);
    out.shift_a = shift_a(out.log_capacity);
    out.panels = n;
    out.refined = false;

    Eigen::VectorXd defect = m * sol - rhs;
    out.residual = defect.lpNorm<Eigen::Infinity>();
    out.min_weight = *std::min_element(out.weights.begin(), out.weights.end());
    return out;
}

} // namespace

EquilibriumSolution solve_equilibrium(const BoundaryMesh& mesh) {
    EquilibriumSolution out = solve_once(mesh);
    if (out.min_weight < -1e-8) {
        // coarse meshes on corners can produce spurious negative masses
        const int doubled = std::min(panel_cap, 2 * static_cast<int>(mesh.panels.size()));
        BoundaryMesh fine = build_mesh(mesh.geometry, doubled);
        out = solve_once(fine);
        out.refined = true;
    }
    if (out.residual > 1e-6)
        throw NonConvergent("collocation residual above 1e-6 after refinement");
    if (out.capacity < 1e-12)
        throw NotResolved("capacity numerically zero; polarity not resolvable");
    return out;
}

std::complex<double> shift_a(double log_capacity) {
    return {std::log(2.0) - specfun::euler_gamma - log_capacity, pi / 2.0};
}

namespace {

double min_clearance(const BoundaryMesh& mesh, Vec2 x) {
    double c = std::numeric_limits<double>::max();
    for (const auto& p : mesh.panels) {
        c = std::min(c, norm(x - p.midpoint) - p.length);
    }
    return c;
}

} // namespace

double green_G(const EquilibriumSolution& sol, const BoundaryMesh& mesh, Vec2 x) {
    for (const auto& p : mesh.geometry.primitives) {
        if (point_in_primitive(p, x))
            throw TooCloseToBoundary("green_G: point lies inside the obstacle");
    }
    if (min_clearance(mesh, x) <= 0.0)
        throw TooCloseToBoundary("green_G: point within one panel length of the boundary");
    double acc = sol.robin_constant;
    for (size_t i = 0; i < mesh.panels.size(); ++i) {
        acc += sol.weights[i] * std::log(norm(x - mesh.panels[i].midpoint));
    }
    return acc;
}

double layer_potential(const BoundaryMesh& mesh, const std::vector<double>& w, Vec2 x) {
    if (w.size() != mesh.panels.size())
        throw DimensionMismatch("weight vector size does not match panel count");
    double acc = 0.0;
    for (size_t i = 0; i < mesh.panels.size(); ++i) {
        const Panel& p = mesh.panels[i];
        // local frame along the chord
        const Vec2 d = p.b - p.a;
        const double len = norm(d);
        const Vec2 e{d.x / len, d.y / len};
        const double xi = dot(x - p.a, e);
        const double eta = (x.x - p.a.x) * (-e.y) + (x.y - p.a.y) * e.x;
        // int_0^len log((s-xi)^2 + eta^2)^(1/2) ds, exact antiderivative
        auto anti = [&](double s) {
            const double u = s - xi;
            const double r2 = u * u + eta * eta;
            double v = 0.5 * u * std::log(r2) - u;
            if (eta != 0.0) v += eta * std::atan(u / eta);
            else if (r2 == 0.0) v = 0.0;
            return v;
        };
        const double integral = anti(len) - anti(0.0);
        acc += w[i] * (-integral / len); // kernel log(1/r), uniform unit mass
    }
    return acc;
}

double boundary_flux(const EquilibriumSolution& sol, const BoundaryMesh& mesh) {
    auto grad_G = [&](Vec2 x) {
        Vec2 g{0.0, 0.0};
        for (size_t i = 0; i < mesh.panels.size(); ++i) {
            const Vec2 d = x - mesh.panels[i].midpoint;
            const double r2 = dot(d, d);
            g = g + (sol.weights[i] / r2) * d;
        }
        return g;
    };
    auto flux_at_offset = [&](double factor) {
        double acc = 0.0;
        for (const auto& p : mesh.panels) {
            const bool slit = std::holds_alternative<Segment>(
                mesh.geometry.primitives[static_cast<size_t>(p.primitive)]);
            const double delta = factor * p.length;
            // nu points out of the exterior domain, i.e. -normal
            double dn = -dot(p.normal, grad_G(p.midpoint + delta * p.normal));
            if (slit) {
                const Vec2 opp = -1.0 * p.normal;
                dn += -dot(opp, grad_G(p.midpoint + delta * opp));
            }
            acc += dn * p.length;
        }
        return acc;
    };
    // Offsets beyond one panel length keep the probes outside the
    // point-mass near field of the layer; Richardson removes the linear
    // offset term.
    const double f1 = flux_at_offset(1.5);
    const double f2 = flux_at_offset(3.0);
    return 2.0 * f1 - f2;
}

CapacityReport solve_capacity(const Geometry& g, int n_panels, bool richardson) {
    CapacityReport r;
    r.solution = solve_equilibrium(build_mesh(g, n_panels));
    if (richardson) {
        const EquilibriumSolution half = solve_equilibrium(build_mesh(g, n_panels / 2));
        const double c = 2.0 * r.solution.log_capacity - half.log_capacity;
        r.log_capacity_richardson = c;
        r.capacity_richardson = std::exp(c);
    }
    return r;
}

std::string report_to_json(const CapacityReport& r) {
    nlohmann::json out;
    out["robin_constant"] = r.solution.robin_constant;
    out["log_capacity"] = r.solution.log_capacity;
    out["capacity"] = r.solution.capacity;
    out["shift_a"] = {r.solution.shift_a.real(), r.solution.shift_a.imag()};
    out["panels"] = r.solution.panels;
    out["residual"] = r.solution.residual;
    if (r.log_capacity_richardson) {
        out["log_capacity_richardson"] = *r.log_capacity_richardson;
        out["capacity_richardson"] = *r.capacity_richardson;
    }
    return out.dump(2);
}

} // namespace lowfreq::potential
