#include "refscat/geom.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "refscat/errors.hpp"

namespace refscat {

double StarBoundary::radius(double t) const {
    double r = a0;
    for (size_t m = 0; m < ac.size(); ++m) r += ac[m] * std::cos((m + 1) * t);
    for (size_t m = 0; m < bs.size(); ++m) r += bs[m] * std::sin((m + 1) * t);
    return r;
}

double StarBoundary::radius_d(double t) const {
    double r = 0.0;
    for (size_t m = 0; m < ac.size(); ++m) r -= (m + 1) * ac[m] * std::sin((m + 1) * t);
    for (size_t m = 0; m < bs.size(); ++m) r += (m + 1) * bs[m] * std::cos((m + 1) * t);
    return r;
}

double StarBoundary::radius_dd(double t) const {
    double r = 0.0;
    for (size_t m = 0; m < ac.size(); ++m) {
        double w = double(m + 1);
        r -= w * w * ac[m] * std::cos(w * t);
    }
    for (size_t m = 0; m < bs.size(); ++m) {
        double w = double(m + 1);
        r -= w * w * bs[m] * std::sin(w * t);
    }
    return r;
}

Vec2 StarBoundary::point(double t) const {
    double r = radius(t);
    return {center.x + r * std::cos(t), center.y + r * std::sin(t)};
}

Vec2 StarBoundary::tangent(double t) const {
    double r = radius(t), rd = radius_d(t);
    double c = std::cos(t), s = std::sin(t);
    return {rd * c - r * s, rd * s + r * c};
}

Vec2 StarBoundary::second(double t) const {
    double r = radius(t), rd = radius_d(t), rdd = radius_dd(t);
    double c = std::cos(t), s = std::sin(t);
    return {(rdd - r) * c - 2.0 * rd * s, (rdd - r) * s + 2.0 * rd * c};
}

double StarBoundary::min_radius(int grid) const {
    double mn = radius(0.0);
    for (int i = 1; i < grid; ++i) mn = std::min(mn, radius(2.0 * pi * i / grid));
    return mn;
}

double StarBoundary::max_radius(int grid) const {
    double mx = radius(0.0);
    for (int i = 1; i < grid; ++i) mx = std::max(mx, radius(2.0 * pi * i / grid));
    return mx;
}

StarBoundary make_circle(Vec2 center, double radius) {
    StarBoundary b;
    b.center = center;
    b.a0 = radius;
    return b;
}

StarBoundary translate(const StarBoundary& b, Vec2 h) {
    StarBoundary out = b;
    out.center = b.center + h;
    return out;
}

bool point_inside(const StarBoundary& b, Vec2 p) {
    Vec2 d = p - b.center;
    double rho = d.norm();
    if (rho == 0.0) return b.min_radius() > 0.0;
    return rho < b.radius(d.angle());
}

BoundarySample sample_boundary(const StarBoundary& b, int m) {
    if (m < 4 || m % 2 != 0)
        throw ArgumentError("sample_boundary: node count must be even and at least 4");
    if (b.min_radius() <= 1e-9)
        throw GeometryError("sample_boundary: radial function is not positive");
    BoundarySample s;
    s.nodes.resize(m);
    s.normals.resize(m);
    s.jacobians.resize(m);
    s.params.resize(m);
    for (int i = 0; i < m; ++i) {
        double t = 2.0 * pi * i / m;
        Vec2 tau = b.tangent(t);
        double jac = tau.norm();
        s.params[i] = t;
        s.nodes[i] = b.point(t);
        s.jacobians[i] = jac;
        s.normals[i] = Vec2{tau.y, -tau.x} * (1.0 / jac); // outward for the CCW parametrization
    }
    return s;
}

std::vector<SourcePoint> sample_polygon(const SourcePolygon& p, int per_edge) {
    if (per_edge < 1) throw ArgumentError("sample_polygon: per_edge must be at least 1");
    const int n = (int)p.vertices.size();
    if (n < 3) throw GeometryError("sample_polygon: polygon needs at least 3 vertices");
    std::vector<SourcePoint> out;
    out.reserve((size_t)n * per_edge);
    for (int e = 0; e < n; ++e) {
        Vec2 a = p.vertices[e];
        Vec2 b = p.vertices[(e + 1) % n];
        if ((b - a).norm() < 1e-14) throw GeometryError("sample_polygon: degenerate edge");
        for (int q = 0; q < per_edge; ++q) {
            double f = double(q + 1) / double(per_edge + 1); // endpoints excluded
            out.push_back({a + (b - a) * f, e, f});
        }
    }
    return out;
}

void ValidationReport::add(const std::string& name, bool ok, const std::string& detail) {
    checks.push_back({name, ok, detail});
    pass = pass && ok;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// Conservative disjointness test for two star curves: no dense sample of one
// falls inside the other and the sampled gap stays positive.
bool curves_disjoint(const StarBoundary& a, const StarBoundary& b, double* gap = nullptr) {
    const int n = 512;
    double mind = 1e300;
    for (int i = 0; i < n; ++i) {
        double t = 2.0 * pi * i / n;
        Vec2 pa = a.point(t), pb = b.point(t);
        if (point_inside(b, pa) || point_inside(a, pb)) {
            if (gap) *gap = -1.0;
            return false;
        }
        for (int j = 0; j < n; j += 8) mind = std::min(mind, (pa - b.point(2.0 * pi * j / n)).norm());
    }
    if (point_inside(a, b.center) || point_inside(b, a.center)) {
        if (gap) *gap = -1.0;
        return false;
    }
    if (gap) *gap = mind;
    return mind > 1e-9;
}

bool polygon_convex(const SourcePolygon& p) {
    const int n = (int)p.vertices.size();
    if (n < 3) return false;
    int sign = 0;
    for (int i = 0; i < n; ++i) {
        Vec2 a = p.vertices[i], b = p.vertices[(i + 1) % n], c = p.vertices[(i + 2) % n];
        double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        if (std::fabs(cross) < 1e-14) return false; // collinear or repeated vertices
        int s = cross > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign) return false;
    }
    return true;
}

bool point_in_convex_polygon(const SourcePolygon& p, Vec2 q) {
    const int n = (int)p.vertices.size();
    int sign = 0;
    for (int i = 0; i < n; ++i) {
        Vec2 a = p.vertices[i], b = p.vertices[(i + 1) % n];
        double cross = (b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x);
        if (cross == 0.0) continue;
        int s = cross > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign) return false;
    }
    return true;
}

bool polygon_clear_of(const SourcePolygon& p, const StarBoundary& body) {
    const int n = 256;
    for (size_t v = 0; v < p.vertices.size(); ++v) {
        Vec2 a = p.vertices[v], b = p.vertices[(v + 1) % p.vertices.size()];
        for (int q = 0; q <= 16; ++q) {
            Vec2 z = a + (b - a) * (double(q) / 16.0);
            if (point_inside(body, z)) return false;
        }
    }
    for (int i = 0; i < n; ++i) {
        if (point_in_convex_polygon(p, body.point(2.0 * pi * i / n))) return false;
    }
    return !point_in_convex_polygon(p, body.center);
}

} // namespace

ValidationReport validate_scene(const Scene& s) {
    ValidationReport rep;

    rep.add("wavenumber_positive", s.k > 0.0, "k = " + fmt(s.k));
    rep.add("incident_direction_unit", std::fabs(s.d0.norm() - 1.0) < 1e-10,
            "|d0| = " + fmt(s.d0.norm()));

    std::vector<StarBoundary> bodies;
    if (s.kind == SceneKind::Obstacle) {
        for (auto& c : s.obstacles) bodies.push_back(c.boundary);
    } else {
        for (auto& c : s.media) bodies.push_back(c.region);
    }
    StarBoundary ball_curve = make_circle(s.ball.center, s.ball.radius);

    bool radii_ok = true;
    for (auto& b : bodies)
        if (b.min_radius() <= 1e-9) radii_ok = false;
    rep.add("boundaries_positive_radius", radii_ok);

    if (s.has_ball) rep.add("ball_radius_positive", s.ball.radius > 0.0, "R = " + fmt(s.ball.radius));

    bool disjoint = true;
    std::string which;
    for (size_t i = 0; i < bodies.size() && disjoint; ++i) {
        for (size_t j = i + 1; j < bodies.size() && disjoint; ++j) {
            if (!curves_disjoint(bodies[i], bodies[j])) {
                disjoint = false;
                which = "components " + std::to_string(i) + "," + std::to_string(j);
            }
        }
        if (disjoint && s.has_ball && !curves_disjoint(bodies[i], ball_curve)) {
            disjoint = false;
            which = "component " + std::to_string(i) + " and ball";
        }
    }
    rep.add("closures_disjoint", disjoint, which);

    if (s.kind == SceneKind::Medium) {
        if (s.has_ball) {
            double bound = pi / (2.0 * s.k * (s.ball_n0 + 1.0));
            rep.add("ball_radius_rule", s.ball.radius < bound,
                    "R = " + fmt(s.ball.radius) + ", bound = " + fmt(bound));
            rep.add("ball_index_valid", s.ball_n0 > 0.0 && std::fabs(s.ball_n0 - 1.0) > 1e-12,
                    "n0 = " + fmt(s.ball_n0));
        }
        bool idx_ok = true;
        for (auto& c : s.media)
            if (!(c.index.real() > 0.0) || c.index.imag() < 0.0) idx_ok = false;
        rep.add("medium_index_admissible", idx_ok, "Re n_D > 0, Im n_D >= 0");
    } else {
        bool lam_ok = true;
        for (auto& c : s.obstacles)
            if (c.bc.kind == BcKind::Impedance && c.bc.lambda.imag() < 0.0) lam_ok = false;
        rep.add("impedance_im_nonnegative", lam_ok);
    }

    if (!s.polygon.vertices.empty()) {
        rep.add("polygon_convex", polygon_convex(s.polygon));
        Vec2 centroid{0.0, 0.0};
        for (auto v : s.polygon.vertices) centroid = centroid + v;
        centroid = centroid * (1.0 / s.polygon.vertices.size());
        double circum = 0.0;
        for (auto v : s.polygon.vertices) circum = std::max(circum, (v - centroid).norm());
        rep.add("polygon_circumradius", circum < pi / s.k,
                "rho = " + fmt(circum) + ", bound = " + fmt(pi / s.k));
        bool clear = true;
        for (auto& b : bodies)
            if (!polygon_clear_of(s.polygon, b)) clear = false;
        if (s.has_ball && !polygon_clear_of(s.polygon, ball_curve)) clear = false;
        rep.add("polygon_disjoint", clear);
    }

    return rep;
}

} // namespace refscat
