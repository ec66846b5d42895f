#ifndef REFSCAT_SPECFUN_HPP
#define REFSCAT_SPECFUN_HPP

#include <complex>
#include <vector>

#include "refscat/types.hpp"

namespace refscat {

// Cylindrical and spherical Bessel/Hankel functions and Legendre polynomials
// for integer order n in [0, 60] and real argument x in (0, 100] (x = 0 is
// admitted for the first kind).  J/j use Miller-style backward recurrence in
// the regime n > x and forward recurrence otherwise, with the n = 0, 1 seeds
// from power series (x <= 16) or the Hankel asymptotic expansion (x > 16).
// Y/y always recur upward, which is stable for the second-kind family.

enum class BesselKind { FirstKind, SecondKind, HankelFirst };

inline constexpr int specfun_max_order = 60;
inline constexpr double specfun_max_arg = 100.0;

double cyl_bessel_j(int n, double x);
double cyl_bessel_y(int n, double x);
Cplx cyl_hankel1(int n, double x);

double sph_bessel_j(int n, double x);
double sph_bessel_y(int n, double x);
Cplx sph_hankel1(int n, double x);

// Tagged entry points; real kinds come back with zero imaginary part.
Cplx cyl_bessel(BesselKind kind, int n, double x);
Cplx sph_bessel(BesselKind kind, int n, double x);

// d/dx via f_n' = f_{n-1} - (n/x) f_n (cylindrical) and
// f_n' = f_{n-1} - ((n+1)/x) f_n (spherical).
Cplx cyl_bessel_deriv(BesselKind kind, int n, double x);
Cplx sph_bessel_deriv(BesselKind kind, int n, double x);

// J_0..J_nmax (resp. j_0..j_nmax) in one sweep; used by the modal solvers.
std::vector<double> cyl_bessel_j_seq(int nmax, double x);
std::vector<double> cyl_bessel_y_seq(int nmax, double x);
std::vector<double> sph_bessel_j_seq(int nmax, double x);
std::vector<double> sph_bessel_y_seq(int nmax, double x);

// H_0^{(1)}(x), H_1^{(1)}(x) pair; the boundary-integral kernels want both.
void cyl_hankel1_01(double x, Cplx& h0, Cplx& h1);

double legendre(int n, double t);

} // namespace refscat

#endif
