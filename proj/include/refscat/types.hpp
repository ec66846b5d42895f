#ifndef REFSCAT_TYPES_HPP
#define REFSCAT_TYPES_HPP

#include <cmath>
#include <complex>
#include <vector>

namespace refscat {

using Cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr Cplx iu{0.0, 1.0};

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double angle() const { return std::atan2(y, x); }
    Vec2 normalized() const {
        double n = norm();
        return {x / n, y / n};
    }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline Vec2 unit_dir(double angle) { return {std::cos(angle), std::sin(angle)}; }

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 normalized() const {
        double n = norm();
        return {x / n, y / n, z / n};
    }
};

inline Vec3 operator*(double s, Vec3 v) { return v * s; }

// Incident field of the superposed-incidence scheme: a plane wave e^{ikx.d}
// or a point source Phi(x,z).
struct IncidentField {
    enum class Kind { PlaneWave, PointSource };
    Kind kind = Kind::PlaneWave;
    Vec2 direction{1.0, 0.0}; // unit vector, PlaneWave
    Vec2 location{0.0, 0.0};  // source point, PointSource

    static IncidentField plane_wave(Vec2 d) { return {Kind::PlaneWave, d.normalized(), {}}; }
    static IncidentField point_source(Vec2 z) { return {Kind::PointSource, {}, z}; }
};

struct IncidentField3 {
    enum class Kind { PlaneWave, PointSource };
    Kind kind = Kind::PlaneWave;
    Vec3 direction{1.0, 0.0, 0.0};
    Vec3 location{0.0, 0.0, 0.0};

    static IncidentField3 plane_wave(Vec3 d) { return {Kind::PlaneWave, d.normalized(), {}}; }
    static IncidentField3 point_source(Vec3 z) { return {Kind::PointSource, {}, z}; }
};

// Far-field normalization constant of the 2D outgoing fundamental solution:
// Phi(x,y) -> C2(k) e^{ik|x|}/sqrt(|x|) e^{-ik xhat.y}.
inline Cplx far_field_constant_2d(double k) {
    return std::exp(iu * (pi / 4.0)) / std::sqrt(8.0 * pi * k);
}

// n equally spaced observation directions on the unit circle.
inline std::vector<Vec2> direction_grid(int n) {
    std::vector<Vec2> dirs(n);
    for (int i = 0; i < n; ++i) dirs[i] = unit_dir(2.0 * pi * i / n);
    return dirs;
}

} // namespace refscat

#endif
