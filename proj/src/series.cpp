#include "refscat/series.hpp"

#include <cmath>

#include "refscat/errors.hpp"
#include "refscat/specfun.hpp"

namespace refscat {

int default_truncation(double ka) {
    return (int)std::ceil(ka + 6.0 * std::cbrt(std::max(ka, 0.0)) + 12.0);
}

namespace {

// Incident modal weights w_n about `center` for the basis J_n(k rho) e^{in theta},
// n = -N..N (index n+N).
std::vector<Cplx> incident_weights(const IncidentField& inc, double k, Vec2 center, int N,
                                   double body_radius) {
    std::vector<Cplx> w(2 * N + 1);
    if (inc.kind == IncidentField::Kind::PlaneWave) {
        Cplx phase = std::exp(iu * k * center.dot(inc.direction));
        double phi = inc.direction.angle();
        for (int n = -N; n <= N; ++n)
            w[n + N] = phase * std::pow(iu, n) * std::exp(-iu * double(n) * phi);
    } else {
        Vec2 rel = inc.location - center;
        double rz = rel.norm();
        if (rz <= body_radius)
            throw DomainError("incident point source lies inside the body");
        double thz = rel.angle();
        auto jz = cyl_bessel_j_seq(N, k * rz);
        auto yz = cyl_bessel_y_seq(N, k * rz);
        for (int n = -N; n <= N; ++n) {
            int m = std::abs(n);
            Cplx h{jz[m], yz[m]};
            if (n < 0 && (m % 2)) h = -h; // H_{-n} = (-1)^n H_n
            w[n + N] = (iu / 4.0) * h * std::exp(-iu * double(n) * thz);
        }
    }
    return w;
}

void check_tail(const std::vector<Cplx>& b, int N) {
    double mx = 0.0;
    for (auto& v : b) mx = std::max(mx, std::abs(v));
    if (mx == 0.0) return;
    double tail = std::max(std::abs(b.front()), std::abs(b.back()));
    tail = std::max(tail, std::max(std::abs(b[1]), std::abs(b[2 * N - 1])));
    if (tail > 1e-12 * mx)
        throw ConvergenceError("series truncation tail above 1e-12 of peak; increase N");
}

} // namespace

DiskSeries solve_disk(double a, Vec2 center, BoundaryCondition bc, const IncidentField& inc,
                      double k, int N) {
    if (a <= 0.0 || k <= 0.0) throw ArgumentError("solve_disk: need a > 0 and k > 0");
    if (N < k * a + 10) throw ArgumentError("solve_disk: truncation order below ka + 10");
    auto w = incident_weights(inc, k, center, N, a);

    const double ka = k * a;
    auto j = cyl_bessel_j_seq(N, ka);
    auto y = cyl_bessel_y_seq(N, ka);
    DiskSeries sol;
    sol.k = k;
    sol.center = center;
    sol.a = a;
    sol.N = N;
    sol.b.resize(2 * N + 1);
    for (int n = -N; n <= N; ++n) {
        int m = std::abs(n);
        Cplx h{j[m], y[m]};
        Cplx jp = (m == 0) ? Cplx{-j[1], 0.0} : Cplx{j[m - 1] - (m / ka) * j[m], 0.0};
        Cplx hp = (m == 0) ? -Cplx{j[1], y[1]} : Cplx{j[m - 1], y[m - 1]} - (double(m) / ka) * h;
        Cplx An;
        if (bc.kind == BcKind::Dirichlet) {
            An = -j[m] / h;
        } else {
            An = -(k * jp + bc.lambda * j[m]) / (k * hp + bc.lambda * h);
        }
        sol.b[n + N] = w[n + N] * An;
    }
    check_tail(sol.b, N);
    return sol;
}

DiskSeries solve_penetrable_disk(double a, Vec2 center, double interior_index,
                                 const IncidentField& inc, double k, int N) {
    if (a <= 0.0 || k <= 0.0) throw ArgumentError("solve_penetrable_disk: need a > 0 and k > 0");
    if (interior_index <= 0.0)
        throw ArgumentError("solve_penetrable_disk: interior index must be positive");
    if (N < k * a + 10) throw ArgumentError("solve_penetrable_disk: truncation order below ka + 10");
    auto w = incident_weights(inc, k, center, N, a);

    const double k1 = k * std::sqrt(interior_index);
    const double ka = k * a, k1a = k1 * a;
    auto j = cyl_bessel_j_seq(N, ka);
    auto y = cyl_bessel_y_seq(N, ka);
    auto j1v = cyl_bessel_j_seq(N, k1a);

    DiskSeries sol;
    sol.k = k;
    sol.center = center;
    sol.a = a;
    sol.N = N;
    sol.penetrable = true;
    sol.interior_k = k1;
    sol.b.resize(2 * N + 1);
    sol.c_int.resize(2 * N + 1);
    for (int n = -N; n <= N; ++n) {
        int m = std::abs(n);
        Cplx h{j[m], y[m]};
        double jm = j[m], j1m = j1v[m];
        double jp = (m == 0) ? -j[1] : j[m - 1] - (m / ka) * j[m];
        double j1p = (m == 0) ? -j1v[1] : j1v[m - 1] - (m / k1a) * j1v[m];
        Cplx hp = (m == 0) ? -Cplx{j[1], y[1]} : Cplx{j[m - 1], y[m - 1]} - (double(m) / ka) * h;
        // continuity of u and du/drho across rho = a:
        //   b H + (-c) J1 = -w J        (values)
        //   b k H' + (-c) k1 J1' = -w k J'
        Cplx det = h * (-k1 * j1p) - (-j1m) * (k * hp);
        if (std::abs(det) == 0.0)
            throw NumericalError("solve_penetrable_disk: singular transmission system");
        Cplx r1 = -w[n + N] * jm, r2 = -w[n + N] * k * jp;
        sol.b[n + N] = (r1 * (-k1 * j1p) + j1m * r2) / det;
        sol.c_int[n + N] = (h * r2 - (k * hp) * r1) / det;
    }
    check_tail(sol.b, N);
    return sol;
}

std::vector<Cplx> eval_far(const DiskSeries& sol, const std::vector<Vec2>& directions) {
    const Cplx amp = std::sqrt(2.0 / (pi * sol.k)) * std::exp(-iu * (pi / 4.0));
    std::vector<Cplx> out(directions.size());
    for (size_t q = 0; q < directions.size(); ++q) {
        Vec2 xh = directions[q];
        if (std::fabs(xh.norm() - 1.0) > 1e-10)
            throw ArgumentError("eval_far: directions must be unit vectors");
        double th = xh.angle();
        Cplx sum = 0.0;
        for (int n = -sol.N; n <= sol.N; ++n)
            sum += sol.b[n + sol.N] * std::pow(-iu, n) * std::exp(iu * double(n) * th);
        out[q] = amp * std::exp(-iu * sol.k * xh.dot(sol.center)) * sum;
    }
    return out;
}

std::vector<Cplx> eval_near(const DiskSeries& sol, const std::vector<Vec2>& points) {
    std::vector<Cplx> out(points.size());
    for (size_t q = 0; q < points.size(); ++q) {
        Vec2 rel = points[q] - sol.center;
        double rho = rel.norm();
        // For penetrable disks the field representation jumps across the
        // interface, so a thin band around rho = a is rejected; impenetrable
        // traces on the circle itself are well defined.
        if (sol.penetrable && std::fabs(rho - sol.a) < 1e-10 * sol.a)
            throw AccuracyError("eval_near: point on the boundary circle");
        double th = rel.angle();
        Cplx sum = 0.0;
        if (rho >= sol.a || !sol.penetrable) {
            if (!sol.penetrable && rho < sol.a * (1.0 - 1e-10))
                throw DomainError("eval_near: interior evaluation on an impenetrable disk");
            auto j = cyl_bessel_j_seq(sol.N, sol.k * rho);
            auto y = cyl_bessel_y_seq(sol.N, sol.k * rho);
            for (int n = -sol.N; n <= sol.N; ++n) {
                int m = std::abs(n);
                Cplx h{j[m], y[m]};
                if (n < 0 && (m % 2)) h = -h;
                sum += sol.b[n + sol.N] * h * std::exp(iu * double(n) * th);
            }
        } else {
            auto j = cyl_bessel_j_seq(sol.N, sol.interior_k * rho);
            for (int n = -sol.N; n <= sol.N; ++n) {
                int m = std::abs(n);
                double jm = (n < 0 && (m % 2)) ? -j[m] : j[m];
                sum += sol.c_int[n + sol.N] * jm * std::exp(iu * double(n) * th);
            }
        }
        out[q] = sum;
    }
    return out;
}

SphereSeries solve_sphere(double a, Vec3 center, const IncidentField3& inc, double k, int N) {
    if (a <= 0.0 || k <= 0.0) throw ArgumentError("solve_sphere: need a > 0 and k > 0");
    if (N < k * a + 10) throw ArgumentError("solve_sphere: truncation order below ka + 10");
    const double ka = k * a;
    auto j = sph_bessel_j_seq(N, ka);
    auto y = sph_bessel_y_seq(N, ka);
    SphereSeries sol;
    sol.k = k;
    sol.center = center;
    sol.a = a;
    sol.N = N;
    sol.b.resize(N + 1);
    if (inc.kind == IncidentField3::Kind::PlaneWave) {
        sol.axis = inc.direction;
        Cplx phase = std::exp(iu * k * center.dot(inc.direction));
        for (int n = 0; n <= N; ++n) {
            Cplx An = -j[n] / Cplx{j[n], y[n]};
            sol.b[n] = phase * std::pow(iu, n) * (2.0 * n + 1.0) * An;
        }
    } else {
        Vec3 rel = inc.location - center;
        double rz = rel.norm();
        if (rz <= a) throw DomainError("solve_sphere: point source inside the sphere");
        sol.axis = rel.normalized();
        auto jz = sph_bessel_j_seq(N, k * rz);
        auto yz = sph_bessel_y_seq(N, k * rz);
        for (int n = 0; n <= N; ++n) {
            Cplx An = -j[n] / Cplx{j[n], y[n]};
            sol.b[n] = (iu * k / (4.0 * pi)) * (2.0 * n + 1.0) * Cplx{jz[n], yz[n]} * An;
        }
    }
    double mx = 0.0;
    for (auto& v : sol.b) mx = std::max(mx, std::abs(v));
    if (mx > 0.0 && std::abs(sol.b.back()) > 1e-12 * mx)
        throw ConvergenceError("solve_sphere: truncation tail above 1e-12 of peak");
    return sol;
}

std::vector<Cplx> eval_far(const SphereSeries& sol, const std::vector<Vec3>& directions) {
    std::vector<Cplx> out(directions.size());
    for (size_t q = 0; q < directions.size(); ++q) {
        Vec3 xh = directions[q];
        if (std::fabs(xh.norm() - 1.0) > 1e-10)
            throw ArgumentError("eval_far: directions must be unit vectors");
        Cplx sum = 0.0;
        for (int n = 0; n <= sol.N; ++n)
            sum += sol.b[n] * std::pow(-iu, n + 1) * legendre(n, xh.dot(sol.axis));
        out[q] = std::exp(-iu * sol.k * xh.dot(sol.center)) * sum / sol.k;
    }
    return out;
}

std::vector<Cplx> eval_near(const SphereSeries& sol, const std::vector<Vec3>& points) {
    std::vector<Cplx> out(points.size());
    for (size_t q = 0; q < points.size(); ++q) {
        Vec3 rel = points[q] - sol.center;
        double rho = rel.norm();
        if (rho <= sol.a + 1e-10 * sol.a)
            throw AccuracyError("eval_near: point on or inside the sphere");
        auto j = sph_bessel_j_seq(sol.N, sol.k * rho);
        auto y = sph_bessel_y_seq(sol.N, sol.k * rho);
        double ct = rel.normalized().dot(sol.axis);
        Cplx sum = 0.0;
        for (int n = 0; n <= sol.N; ++n)
            sum += sol.b[n] * Cplx{j[n], y[n]} * legendre(n, ct);
        out[q] = sum;
    }
    return out;
}

Cplx incident_value(const IncidentField& inc, double k, Vec2 x) {
    if (inc.kind == IncidentField::Kind::PlaneWave) return std::exp(iu * k * x.dot(inc.direction));
    double r = (x - inc.location).norm();
    Cplx h0, h1;
    cyl_hankel1_01(k * r, h0, h1);
    return (iu / 4.0) * h0;
}

Cplx incident_grad_dot(const IncidentField& inc, double k, Vec2 x, Vec2 v) {
    if (inc.kind == IncidentField::Kind::PlaneWave)
        return iu * k * inc.direction.dot(v) * std::exp(iu * k * x.dot(inc.direction));
    Vec2 rel = x - inc.location;
    double r = rel.norm();
    Cplx h0, h1;
    cyl_hankel1_01(k * r, h0, h1);
    return -(iu * k / 4.0) * h1 * rel.dot(v) / r;
}

} // namespace refscat
