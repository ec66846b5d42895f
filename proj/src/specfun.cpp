#include "refscat/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "refscat/errors.hpp"

namespace refscat {

namespace {

using ld = long double;

constexpr ld pi_l = 3.14159265358979323846264338327950288L;
constexpr ld euler_gamma = 0.57721566490153286060651209008240243L;

// Power series for the n = 0, 1 seeds; adequate up to the x = 16 crossover.
ld j0_series(ld x) {
    ld q = x * x / 4.0L, term = 1.0L, sum = 1.0L;
    for (int m = 1; m < 80; ++m) {
        term *= -q / (ld(m) * ld(m));
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
    }
    return sum;
}

ld j1_series(ld x) {
    ld q = x * x / 4.0L, term = 1.0L, sum = 1.0L;
    for (int m = 1; m < 80; ++m) {
        term *= -q / (ld(m) * ld(m + 1));
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
    }
    return (x / 2.0L) * sum;
}

ld y0_series(ld x) {
    ld q = x * x / 4.0L, term = 1.0L, hm = 0.0L, sum = 0.0L;
    for (int m = 1; m < 80; ++m) {
        term *= -q / (ld(m) * ld(m));
        hm += 1.0L / ld(m);
        ld add = -term * hm; // (-1)^{m+1} H_m q^m / (m!)^2
        sum += add;
        if (std::fabs(add) < 1e-22L * (std::fabs(sum) + 1e-30L) && m > 3) break;
    }
    return (2.0L / pi_l) * ((std::log(x / 2.0L) + euler_gamma) * j0_series(x) + sum);
}

ld y1_series(ld x) {
    // Y1 = (2/pi)(ln(x/2)+g) J1 - 2/(pi x) - (x/(2 pi)) sum (-1)^m (H_m+H_{m+1}) q^m / (m!(m+1)!)
    ld q = x * x / 4.0L, term = 1.0L, hm = 0.0L, hm1 = 1.0L;
    ld sum = hm + hm1; // m = 0 term
    for (int m = 1; m < 80; ++m) {
        term *= -q / (ld(m) * ld(m + 1));
        hm += 1.0L / ld(m);
        hm1 += 1.0L / ld(m + 1);
        ld add = term * (hm + hm1);
        sum += add;
        if (std::fabs(add) < 1e-22L * (std::fabs(sum) + 1e-30L) && m > 3) break;
    }
    return (2.0L / pi_l) * (std::log(x / 2.0L) + euler_gamma) * j1_series(x) - 2.0L / (pi_l * x) -
           (x / (2.0L * pi_l)) * sum;
}

// Hankel asymptotic expansion J_n = sqrt(2/(pi x)) [P cos chi - Q sin chi],
// Y_n = sqrt(2/(pi x)) [P sin chi + Q cos chi]; truncated at the smallest term.
void jy_asymptotic(int n, ld x, ld& jn, ld& yn) {
    const ld mu = 4.0L * ld(n) * ld(n);
    ld p = 1.0L, q = 0.0L;
    ld term = 1.0L;
    ld prev = std::numeric_limits<ld>::max();
    for (int k = 1; k < 60; ++k) {
        ld odd = ld(2 * k - 1);
        term *= (mu - odd * odd) / (ld(k) * 8.0L * x);
        if (std::fabs(term) > prev) break; // divergent tail
        prev = std::fabs(term);
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            case 0: p += term; break;
        }
        if (std::fabs(term) < 1e-20L) break;
    }
    const ld chi = x - (2.0L * ld(n) + 1.0L) * pi_l / 4.0L;
    const ld amp = std::sqrt(2.0L / (pi_l * x));
    const ld c = std::cos(chi), s = std::sin(chi);
    jn = amp * (p * c - q * s);
    yn = amp * (p * s + q * c);
}

constexpr ld seed_crossover = 16.0L;

void jy01(ld x, ld& j0, ld& j1, ld& y0, ld& y1) {
    if (x <= seed_crossover) {
        j0 = j0_series(x);
        j1 = j1_series(x);
        y0 = y0_series(x);
        y1 = y1_series(x);
    } else {
        jy_asymptotic(0, x, j0, y0);
        jy_asymptotic(1, x, j1, y1);
    }
}

void check_envelope(int n, double x, bool positive_required, const char* who) {
    if (n < 0) throw DomainError(std::string(who) + ": order must be nonnegative");
    if (n > specfun_max_order)
        throw RangeError(std::string(who) + ": order " + std::to_string(n) + " above supported " +
                         std::to_string(specfun_max_order));
    if (!(x >= 0.0) || std::isnan(x))
        throw DomainError(std::string(who) + ": argument must be nonnegative");
    if (positive_required && x == 0.0)
        throw DomainError(std::string(who) + ": argument must be positive for this kind");
    if (x > specfun_max_arg)
        throw RangeError(std::string(who) + ": argument " + std::to_string(x) + " above supported " +
                         std::to_string(specfun_max_arg));
}

// Miller backward recurrence for J_0..J_nmax, normalized with
// J_0 + 2 J_2 + 2 J_4 + ... = 1.
std::vector<double> cyl_j_miller(int nmax, ld x) {
    int start = nmax + std::max(18, int(1.5 * std::sqrt(40.0 * std::max(nmax, int(x) + 1))));
    start += start % 2; // even start keeps the normalization sum aligned
    ld fp = 0.0L, f = 1e-30L, sum = 0.0L;
    std::vector<ld> vals(nmax + 1, 0.0L);
    for (int k = start; k >= 1; --k) {
        ld fm = (2.0L * k / x) * f - fp;
        fp = f;
        f = fm;
        if (k - 1 <= nmax) vals[k - 1] = f;
        if (((k - 1) % 2) == 0) sum += (k == 1) ? f : 2.0L * f;
        if (std::fabs(f) > 1e270L) {
            f *= 1e-270L;
            fp *= 1e-270L;
            sum *= 1e-270L;
            for (auto& v : vals) v *= 1e-270L;
        }
    }
    std::vector<double> out(nmax + 1);
    for (int k = 0; k <= nmax; ++k) out[k] = double(vals[k] / sum);
    return out;
}

} // namespace

std::vector<double> cyl_bessel_j_seq(int nmax, double x) {
    check_envelope(nmax, x, false, "cyl_bessel_j");
    std::vector<double> out(nmax + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    ld j0, j1, y0, y1;
    jy01(x, j0, j1, y0, y1);
    if (nmax <= int(x)) {
        // forward recurrence, stable while order stays below the argument
        ld fm = j0, f = j1;
        out[0] = double(j0);
        if (nmax >= 1) out[1] = double(j1);
        for (int k = 1; k < nmax; ++k) {
            ld fp = (2.0L * k / ld(x)) * f - fm;
            fm = f;
            f = fp;
            out[k + 1] = double(f);
        }
        return out;
    }
    return cyl_j_miller(nmax, x);
}

std::vector<double> cyl_bessel_y_seq(int nmax, double x) {
    check_envelope(nmax, x, true, "cyl_bessel_y");
    ld j0, j1, y0, y1;
    jy01(x, j0, j1, y0, y1);
    std::vector<double> out(nmax + 1);
    out[0] = double(y0);
    if (nmax >= 1) out[1] = double(y1);
    ld fm = y0, f = y1;
    for (int k = 1; k < nmax; ++k) {
        ld fp = (2.0L * k / ld(x)) * f - fm;
        fm = f;
        f = fp;
        if (std::isinf(double(f)))
            throw RangeError("cyl_bessel_y: overflow at order " + std::to_string(k + 1));
        out[k + 1] = double(f);
    }
    return out;
}

double cyl_bessel_j(int n, double x) { return cyl_bessel_j_seq(n, x)[n]; }
double cyl_bessel_y(int n, double x) { return cyl_bessel_y_seq(n, x)[n]; }

Cplx cyl_hankel1(int n, double x) { return {cyl_bessel_j(n, x), cyl_bessel_y(n, x)}; }

void cyl_hankel1_01(double x, Cplx& h0, Cplx& h1) {
    // kernel fast path: no upper envelope, the asymptotic branch holds for
    // arbitrarily large arguments
    if (!(x > 0.0)) throw DomainError("cyl_hankel1_01: argument must be positive");
    ld j0, j1, y0, y1;
    jy01(x, j0, j1, y0, y1);
    h0 = {double(j0), double(y0)};
    h1 = {double(j1), double(y1)};
}

Cplx cyl_bessel(BesselKind kind, int n, double x) {
    switch (kind) {
        case BesselKind::FirstKind: return {cyl_bessel_j(n, x), 0.0};
        case BesselKind::SecondKind: return {cyl_bessel_y(n, x), 0.0};
        case BesselKind::HankelFirst: return cyl_hankel1(n, x);
    }
    throw ArgumentError("cyl_bessel: bad kind");
}

namespace {

ld sph_j0(ld x) { return (x < 1e-4L) ? 1.0L - x * x / 6.0L : std::sin(x) / x; }
ld sph_j1(ld x) {
    return (x < 1e-4L) ? x / 3.0L - x * x * x / 30.0L : (std::sin(x) / x - std::cos(x)) / x;
}

// Backward recurrence for j_n, anchored on whichever closed-form seed is
// larger in magnitude (j0 and j1 never vanish together).
std::vector<double> sph_j_miller(int nmax, ld x) {
    int start = nmax + std::max(18, int(1.5 * std::sqrt(40.0 * std::max(nmax, int(x) + 1))));
    ld fp = 0.0L, f = 1e-30L;
    std::vector<ld> vals(nmax + 1, 0.0L);
    ld f1 = 0.0L;
    for (int k = start; k >= 1; --k) {
        ld fm = (2.0L * k + 1.0L) / x * f - fp;
        fp = f;
        f = fm;
        if (k - 1 <= nmax) vals[k - 1] = f;
        if (k - 1 == 1) f1 = f;
        if (std::fabs(f) > 1e270L) {
            f *= 1e-270L;
            fp *= 1e-270L;
            f1 *= 1e-270L;
            for (auto& v : vals) v *= 1e-270L;
        }
    }
    ld a0 = sph_j0(x), a1 = sph_j1(x);
    ld scale = (std::fabs(a0) >= std::fabs(a1)) ? a0 / f : a1 / f1;
    std::vector<double> out(nmax + 1);
    for (int k = 0; k <= nmax; ++k) out[k] = double(vals[k] * scale);
    return out;
}

} // namespace

std::vector<double> sph_bessel_j_seq(int nmax, double x) {
    check_envelope(nmax, x, false, "sph_bessel_j");
    std::vector<double> out(nmax + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (nmax <= int(x)) {
        ld fm = sph_j0(x), f = sph_j1(x);
        out[0] = double(fm);
        if (nmax >= 1) out[1] = double(f);
        for (int k = 1; k < nmax; ++k) {
            ld fp = (2.0L * k + 1.0L) / ld(x) * f - fm;
            fm = f;
            f = fp;
            out[k + 1] = double(f);
        }
        return out;
    }
    return sph_j_miller(nmax, x);
}

std::vector<double> sph_bessel_y_seq(int nmax, double x) {
    check_envelope(nmax, x, true, "sph_bessel_y");
    ld y0 = -std::cos((ld)x) / x;
    ld y1 = y0 / x - std::sin((ld)x) / x;
    std::vector<double> out(nmax + 1);
    out[0] = double(y0);
    if (nmax >= 1) out[1] = double(y1);
    ld fm = y0, f = y1;
    for (int k = 1; k < nmax; ++k) {
        ld fp = (2.0L * k + 1.0L) / ld(x) * f - fm;
        fm = f;
        f = fp;
        if (std::isinf(double(f)))
            throw RangeError("sph_bessel_y: overflow at order " + std::to_string(k + 1));
        out[k + 1] = double(f);
    }
    return out;
}

double sph_bessel_j(int n, double x) { return sph_bessel_j_seq(n, x)[n]; }
double sph_bessel_y(int n, double x) { return sph_bessel_y_seq(n, x)[n]; }

Cplx sph_hankel1(int n, double x) { return {sph_bessel_j(n, x), sph_bessel_y(n, x)}; }

Cplx sph_bessel(BesselKind kind, int n, double x) {
    switch (kind) {
        case BesselKind::FirstKind: return {sph_bessel_j(n, x), 0.0};
        case BesselKind::SecondKind: return {sph_bessel_y(n, x), 0.0};
        case BesselKind::HankelFirst: return sph_hankel1(n, x);
    }
    throw ArgumentError("sph_bessel: bad kind");
}

Cplx cyl_bessel_deriv(BesselKind kind, int n, double x) {
    check_envelope(n, x, true, "cyl_bessel_deriv");
    if (n == 0) return -cyl_bessel(kind, 1, x);
    return cyl_bessel(kind, n - 1, x) - (double(n) / x) * cyl_bessel(kind, n, x);
}

Cplx sph_bessel_deriv(BesselKind kind, int n, double x) {
    check_envelope(n, x, true, "sph_bessel_deriv");
    if (n == 0) return -sph_bessel(kind, 1, x);
    return sph_bessel(kind, n - 1, x) - (double(n + 1) / x) * sph_bessel(kind, n, x);
}

double legendre(int n, double t) {
    if (n < 0) throw DomainError("legendre: order must be nonnegative");
    if (n > specfun_max_order) throw RangeError("legendre: order above supported envelope");
    if (std::fabs(t) > 1.0) throw DomainError("legendre: argument must lie in [-1,1]");
    if (n == 0) return 1.0;
    if (n == 1) return t;
    double pm = 1.0, p = t;
    for (int k = 1; k < n; ++k) {
        double pp = ((2.0 * k + 1.0) * t * p - k * pm) / (k + 1.0);
        pm = p;
        p = pp;
    }
    return p;
}

} // namespace refscat
