#ifndef REFSCAT_GEOM_HPP
#define REFSCAT_GEOM_HPP

#include <string>
#include <vector>

#include "refscat/types.hpp"

namespace refscat {

// Closed star-shaped C^2 curve: x(t) = center + r(t)(cos t, sin t) with
// r(t) = a0 + sum_m (a_m cos mt + b_m sin mt).
struct StarBoundary {
    Vec2 center{0.0, 0.0};
    double a0 = 1.0;
    std::vector<double> ac; // cosine coefficients, order m = 1..M
    std::vector<double> bs; // sine coefficients, order m = 1..M

    int order() const { return (int)std::max(ac.size(), bs.size()); }
    double radius(double t) const;
    double radius_d(double t) const;
    double radius_dd(double t) const;
    Vec2 point(double t) const;
    Vec2 tangent(double t) const;      // x'(t)
    Vec2 second(double t) const;       // x''(t)
    double min_radius(int grid = 1024) const;
    double max_radius(int grid = 1024) const;
};

StarBoundary make_circle(Vec2 center, double radius);
StarBoundary translate(const StarBoundary& b, Vec2 h);
bool point_inside(const StarBoundary& b, Vec2 p);

struct ReferenceBall {
    Vec2 center{0.0, 0.0};
    double radius = 0.5;
};

// Convex polygon P carrying the point sources; edge ell joins vertex ell to
// vertex ell+1 (mod N).
struct SourcePolygon {
    std::vector<Vec2> vertices;
};

struct SourcePoint {
    Vec2 z;
    int edge = 0;
    double frac = 0.0; // position along the edge, in (0,1)
};

enum class BcKind { Dirichlet, Impedance };

// Impedance lambda with Im(lambda) >= 0; lambda = 0 is the sound-hard case.
struct BoundaryCondition {
    BcKind kind = BcKind::Dirichlet;
    Cplx lambda{0.0, 0.0};

    static BoundaryCondition dirichlet() { return {BcKind::Dirichlet, {}}; }
    static BoundaryCondition impedance(Cplx lam) { return {BcKind::Impedance, lam}; }
    static BoundaryCondition neumann() { return impedance({0.0, 0.0}); }
};

struct ObstacleComponent {
    StarBoundary boundary;
    BoundaryCondition bc;
};

// Penetrable region with constant coefficient n_D in the Helmholtz equation
// Delta u + k^2 n u = 0.
struct MediumComponent {
    StarBoundary region;
    Cplx index{2.0, 0.0};
};

enum class SceneKind { Obstacle, Medium };

struct Scene {
    SceneKind kind = SceneKind::Obstacle;
    double k = 1.0;
    Vec2 d0{1.0, 0.0};
    std::vector<ObstacleComponent> obstacles; // obstacle scenes
    std::vector<MediumComponent> media;       // medium scenes
    bool has_ball = true;
    ReferenceBall ball;
    double ball_n0 = 2.0; // medium scenes: ball index is n0^2
    SourcePolygon polygon;

    Scene without_ball() const {
        Scene s = *this;
        s.has_ball = false;
        return s;
    }
};

// Nodes, unit outward normals, |x'(t)| jacobians and parameter values at m
// equispaced parameters (m even, Nystrom requirement).
struct BoundarySample {
    std::vector<Vec2> nodes;
    std::vector<Vec2> normals;
    std::vector<double> jacobians;
    std::vector<double> params;

    int size() const { return (int)nodes.size(); }
};

BoundarySample sample_boundary(const StarBoundary& b, int m);
std::vector<SourcePoint> sample_polygon(const SourcePolygon& p, int per_edge);

struct ValidationCheck {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool pass = true;

    void add(const std::string& name, bool ok, const std::string& detail = "");
};

ValidationReport validate_scene(const Scene& s);

} // namespace refscat

#endif
