#ifndef REFSCAT_SERIES_HPP
#define REFSCAT_SERIES_HPP

#include <vector>

#include "refscat/geom.hpp"
#include "refscat/types.hpp"

namespace refscat {

// Separation-of-variables solutions for canonical bodies.  A disk solution
// stores the outgoing coefficients b_n of
//   u^s(x) = sum_n b_n H_n^{(1)}(k|x-c|) e^{i n theta(x-c)},  n = -N..N,
// and, for penetrable disks, the interior coefficients c_n of
//   u(x)  = sum_n c_n J_n(k_int |x-c|) e^{i n theta(x-c)}.
struct DiskSeries {
    double k = 1.0;
    Vec2 center{0.0, 0.0};
    double a = 1.0;
    int N = 0;
    std::vector<Cplx> b;     // size 2N+1, order n stored at index n+N
    bool penetrable = false;
    double interior_k = 0.0;
    std::vector<Cplx> c_int; // penetrable only

    Cplx coeff(int n) const { return b[n + N]; }
};

// Sound-soft sphere; angular dependence is P_n(xhat . axis) where axis is the
// incident direction (plane wave) or the unit vector from center to source.
struct SphereSeries {
    double k = 1.0;
    Vec3 center{0.0, 0.0, 0.0};
    double a = 1.0;
    int N = 0;
    Vec3 axis{1.0, 0.0, 0.0};
    std::vector<Cplx> b; // order n = 0..N
};

// Multipole cutoff N = ceil(ka + 6 (ka)^{1/3} + 12).
int default_truncation(double ka);

DiskSeries solve_disk(double a, Vec2 center, BoundaryCondition bc, const IncidentField& inc,
                      double k, int N);
DiskSeries solve_penetrable_disk(double a, Vec2 center, double interior_index,
                                 const IncidentField& inc, double k, int N);
SphereSeries solve_sphere(double a, Vec3 center, const IncidentField3& inc, double k, int N);

std::vector<Cplx> eval_far(const DiskSeries& sol, const std::vector<Vec2>& directions);
std::vector<Cplx> eval_near(const DiskSeries& sol, const std::vector<Vec2>& points);
std::vector<Cplx> eval_far(const SphereSeries& sol, const std::vector<Vec3>& directions);
std::vector<Cplx> eval_near(const SphereSeries& sol, const std::vector<Vec3>& points);

// Incident-field values; shared by the integral-equation solvers.
Cplx incident_value(const IncidentField& inc, double k, Vec2 x);
Cplx incident_grad_dot(const IncidentField& inc, double k, Vec2 x, Vec2 v);

} // namespace refscat

#endif
