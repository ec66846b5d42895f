#include "refscat/medium.hpp"

#include <algorithm>
#include <cmath>

#include "refscat/errors.hpp"
#include "refscat/series.hpp"
#include "refscat/specfun.hpp"

namespace refscat {

namespace {

// Iterative radix-2 FFT, unscaled; inverse = conj-fft-conj / n.
void fft_pow2(std::vector<Cplx>& a, bool inverse) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * pi / double(len) * (inverse ? 1.0 : -1.0);
        Cplx wl{std::cos(ang), std::sin(ang)};
        for (size_t i = 0; i < n; i += len) {
            Cplx w{1.0, 0.0};
            for (size_t j = 0; j < len / 2; ++j) {
                Cplx u = a[i + j], v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& v : a) v /= double(n);
}

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft2(std::vector<Cplx>& a, size_t nx, size_t ny, bool inverse) {
    std::vector<Cplx> row(nx);
    for (size_t y = 0; y < ny; ++y) {
        std::copy(a.begin() + y * nx, a.begin() + (y + 1) * nx, row.begin());
        fft_pow2(row, inverse);
        std::copy(row.begin(), row.end(), a.begin() + y * nx);
    }
    std::vector<Cplx> col(ny);
    for (size_t x = 0; x < nx; ++x) {
        for (size_t y = 0; y < ny; ++y) col[y] = a[y * nx + x];
        fft_pow2(col, inverse);
        for (size_t y = 0; y < ny; ++y) a[y * nx + x] = col[y];
    }
}

// Convolution engine with the Green-kernel spectrum cached on a padded grid.
struct ConvPlan {
    size_t px = 0, py = 0;
    std::vector<Cplx> khat;

    ConvPlan(const ContrastGrid& g) {
        px = next_pow2(2 * (size_t)g.nx);
        py = next_pow2(2 * (size_t)g.ny);
        std::vector<Cplx> ker(px * py, Cplx{0.0, 0.0});
        const double req = g.h / std::sqrt(pi); // disk of the cell's area
        Cplx h0, h1;
        cyl_hankel1_01(g.k * req, h0, h1);
        Cplx self = iu * pi * req / (2.0 * g.k) * h1 - 1.0 / (g.k * g.k);
        for (int dy = -(g.ny - 1); dy <= g.ny - 1; ++dy) {
            for (int dx = -(g.nx - 1); dx <= g.nx - 1; ++dx) {
                Cplx w;
                if (dx == 0 && dy == 0) {
                    w = self;
                } else {
                    double r = g.h * std::hypot((double)dx, (double)dy);
                    Cplx a0, a1;
                    cyl_hankel1_01(g.k * r, a0, a1);
                    w = (iu / 4.0) * a0 * g.h * g.h;
                }
                size_t ix = (size_t)((dx + (int)px) % (int)px);
                size_t iy = (size_t)((dy + (int)py) % (int)py);
                ker[iy * px + ix] = w;
            }
        }
        fft2(ker, px, py, false);
        khat = std::move(ker);
    }

    // conv[c] = sum_{c'} K(c - c') v(c')
    std::vector<Cplx> apply(const ContrastGrid& g, const std::vector<Cplx>& v) const {
        std::vector<Cplx> pad(px * py, Cplx{0.0, 0.0});
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x) pad[(size_t)y * px + x] = v[g.idx(x, y)];
        fft2(pad, px, py, false);
        for (size_t i = 0; i < pad.size(); ++i) pad[i] *= khat[i];
        fft2(pad, px, py, true);
        std::vector<Cplx> out(g.m.size());
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x) out[g.idx(x, y)] = pad[(size_t)y * px + x];
        return out;
    }
};

// GMRES(restart) for x = A(x) = b with a functional operator.
template <typename Op>
int gmres(const Op& apply, const std::vector<Cplx>& b, std::vector<Cplx>& x, double rtol,
          int max_iter, int restart, double& final_res) {
    const size_t n = b.size();
    auto norm = [](const std::vector<Cplx>& v) {
        double s = 0.0;
        for (auto& c : v) s += std::norm(c);
        return std::sqrt(s);
    };
    double bnorm = norm(b);
    if (bnorm == 0.0) {
        x.assign(n, Cplx{0.0, 0.0});
        final_res = 0.0;
        return 0;
    }
    if (x.size() != n) x.assign(n, Cplx{0.0, 0.0});
    int total = 0;
    while (total < max_iter) {
        std::vector<Cplx> r = apply(x);
        for (size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        double beta = norm(r);
        final_res = beta / bnorm;
        if (final_res < rtol) return total;
        int mdim = std::min(restart, max_iter - total);
        std::vector<std::vector<Cplx>> v;
        v.reserve(mdim + 1);
        for (auto& c : r) c /= beta;
        v.push_back(r);
        std::vector<std::vector<Cplx>> hcol;
        std::vector<Cplx> cs(mdim), sn(mdim);
        std::vector<Cplx> g(mdim + 1, Cplx{0.0, 0.0});
        g[0] = beta;
        int j = 0;
        for (; j < mdim; ++j) {
            std::vector<Cplx> w = apply(v[j]);
            ++total; // one operator application per Arnoldi step
            std::vector<Cplx> h(j + 2);
            for (int i = 0; i <= j; ++i) {
                Cplx dot = 0.0;
                for (size_t q = 0; q < n; ++q) dot += std::conj(v[i][q]) * w[q];
                h[i] = dot;
                for (size_t q = 0; q < n; ++q) w[q] -= dot * v[i][q];
            }
            h[j + 1] = norm(w);
            if (std::abs(h[j + 1]) > 0.0) {
                auto wn = w;
                for (auto& c : wn) c /= h[j + 1].real();
                v.push_back(std::move(wn));
            }
            // apply stored Givens rotations
            for (int i = 0; i < j; ++i) {
                Cplx t = cs[i] * h[i] + sn[i] * h[i + 1];
                h[i + 1] = -std::conj(sn[i]) * h[i] + cs[i] * h[i + 1];
                h[i] = t;
            }
            double denom = std::sqrt(std::norm(h[j]) + std::norm(h[j + 1]));
            if (denom == 0.0) {
                hcol.push_back(h);
                ++j;
                break;
            }
            cs[j] = std::abs(h[j]) / denom;
            Cplx phase = (std::abs(h[j]) > 0.0) ? h[j] / std::abs(h[j]) : Cplx{1.0, 0.0};
            sn[j] = phase * std::conj(h[j + 1]) / denom;
            h[j] = phase * denom;
            h[j + 1] = 0.0;
            g[j + 1] = -std::conj(sn[j]) * g[j];
            g[j] = cs[j] * g[j];
            hcol.push_back(h);
            final_res = std::abs(g[j + 1]) / bnorm;
            if (final_res < rtol) {
                ++j;
                break;
            }
        }
        // back substitution
        int dim = (int)hcol.size();
        std::vector<Cplx> ycoef(dim, Cplx{0.0, 0.0});
        for (int i = dim - 1; i >= 0; --i) {
            Cplx s = g[i];
            for (int l = i + 1; l < dim; ++l) s -= hcol[l][i] * ycoef[l];
            ycoef[i] = s / hcol[i][i];
        }
        for (int i = 0; i < dim; ++i)
            for (size_t q = 0; q < n; ++q) x[q] += ycoef[i] * v[i][q];
    }
    return total;
}

bool inside_medium_component(const Scene& s, Vec2 p, Cplx& index) {
    for (auto& c : s.media) {
        if (point_inside(c.region, p)) {
            index = c.index;
            return true;
        }
    }
    if (s.has_ball && (p - s.ball.center).norm() < s.ball.radius) {
        index = s.ball_n0 * s.ball_n0;
        return true;
    }
    return false;
}

} // namespace

ContrastGrid assemble_ls(const Scene& scene, int resolution) {
    if (scene.kind != SceneKind::Medium)
        throw ArgumentError("assemble_ls: medium scenes only");
    if (resolution < 8) throw ArgumentError("assemble_ls: resolution too small");
    auto report = validate_scene(scene);
    for (auto& c : report.checks) {
        // the forward solver needs geometry and the radius rule; the n0 != 1
        // uniqueness assumption is not a solvability requirement
        bool relevant = c.name == "closures_disjoint" || c.name == "ball_radius_rule" ||
                        c.name == "medium_index_admissible" ||
                        c.name == "boundaries_positive_radius";
        if (relevant && !c.pass)
            throw ValidationError("assemble_ls: scene failed check " + c.name);
    }

    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    auto grow = [&](Vec2 c, double r) {
        x0 = std::min(x0, c.x - r);
        x1 = std::max(x1, c.x + r);
        y0 = std::min(y0, c.y - r);
        y1 = std::max(y1, c.y + r);
    };
    for (auto& c : scene.media) grow(c.region.center, c.region.max_radius());
    if (scene.has_ball) grow(scene.ball.center, scene.ball.radius);
    if (x0 > x1) throw ArgumentError("assemble_ls: empty medium scene");

    double side = std::max(x1 - x0, y1 - y0);
    ContrastGrid g;
    g.k = scene.k;
    g.h = side / resolution;
    // pad by one cell so boundary cells are fully covered
    x0 -= g.h;
    y0 -= g.h;
    x1 += g.h;
    y1 += g.h;
    g.origin = {x0, y0};
    g.nx = (int)std::ceil((x1 - x0) / g.h);
    g.ny = (int)std::ceil((y1 - y0) / g.h);
    g.m.assign((size_t)g.nx * g.ny, Cplx{0.0, 0.0});
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            Vec2 c = g.cell_center(ix, iy);
            Cplx index;
            bool cin = inside_medium_component(scene, c, index);
            // corners decide whether the interface crosses this cell
            bool mixed = false;
            for (int q = 0; q < 4 && !mixed; ++q) {
                Vec2 corner{c.x + ((q & 1) ? 0.5 : -0.5) * g.h,
                            c.y + ((q & 2) ? 0.5 : -0.5) * g.h};
                Cplx dummy;
                if (inside_medium_component(scene, corner, dummy) != cin) mixed = true;
            }
            if (!mixed) {
                if (cin) g.m[g.idx(ix, iy)] = index - 1.0;
                continue;
            }
            // interface cell: coverage-weighted contrast from an 8x8 subgrid,
            // which removes the monopole mass error of pure center sampling
            Cplx acc{0.0, 0.0};
            const int ss = 8;
            for (int sy = 0; sy < ss; ++sy) {
                for (int sx = 0; sx < ss; ++sx) {
                    Vec2 p{c.x + ((sx + 0.5) / ss - 0.5) * g.h,
                           c.y + ((sy + 0.5) / ss - 0.5) * g.h};
                    Cplx idx2;
                    if (inside_medium_component(scene, p, idx2)) acc += idx2 - 1.0;
                }
            }
            g.m[g.idx(ix, iy)] = acc / double(ss * ss);
        }
    }
    return g;
}

std::vector<Cplx> apply_volume_potential(const ContrastGrid& grid, const std::vector<Cplx>& f) {
    if (f.size() != grid.m.size()) throw ArgumentError("apply_volume_potential: size mismatch");
    ConvPlan plan(grid);
    std::vector<Cplx> v(f.size());
    for (size_t i = 0; i < f.size(); ++i) v[i] = grid.m[i] * f[i];
    auto conv = plan.apply(grid, v);
    const double k2 = grid.k * grid.k;
    for (auto& c : conv) c *= k2;
    return conv;
}

LsSolution solve_ls(const ContrastGrid& grid, const IncidentField& inc, const LsOptions& opt) {
    if (inc.kind == IncidentField::Kind::PointSource) {
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix)
                if (std::abs(grid.m[grid.idx(ix, iy)]) > 0.0 &&
                    (grid.cell_center(ix, iy) - inc.location).norm() < grid.h)
                    throw DomainError("solve_ls: point source inside the contrast support");
    }
    const size_t n = grid.m.size();
    std::vector<Cplx> ui(n);
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
            ui[grid.idx(ix, iy)] = incident_value(inc, grid.k, grid.cell_center(ix, iy));

    ConvPlan plan(grid);
    const double k2 = grid.k * grid.k;
    auto apply = [&](const std::vector<Cplx>& u) {
        std::vector<Cplx> v(n);
        for (size_t i = 0; i < n; ++i) v[i] = grid.m[i] * u[i];
        auto conv = plan.apply(grid, v);
        std::vector<Cplx> out(n);
        for (size_t i = 0; i < n; ++i) out[i] = u[i] - k2 * conv[i];
        return out;
    };

    LsSolution sol;
    sol.incident = inc;
    sol.total = ui; // initial guess: the incident field
    double res = 0.0;
    sol.iterations = gmres(apply, ui, sol.total, opt.rtol, opt.max_iter, opt.restart, res);
    sol.residual = res;
    if (res >= opt.rtol && sol.iterations >= opt.max_iter)
        throw ConvergenceError("solve_ls: GMRES stalled at relative residual " +
                               std::to_string(res));
    return sol;
}

std::vector<Cplx> medium_far_field(const ContrastGrid& grid, const LsSolution& sol,
                                   const std::vector<Vec2>& directions) {
    if (sol.total.size() != grid.m.size()) throw ArgumentError("medium_far_field: size mismatch");
    const Cplx c2 = far_field_constant_2d(grid.k);
    const double w = grid.h * grid.h * grid.k * grid.k;
    std::vector<Cplx> out(directions.size(), Cplx{0.0, 0.0});
    for (size_t q = 0; q < directions.size(); ++q) {
        Vec2 xh = directions[q];
        if (std::fabs(xh.norm() - 1.0) > 1e-10)
            throw ArgumentError("medium_far_field: directions must be unit vectors");
        Cplx acc = 0.0;
        for (int iy = 0; iy < grid.ny; ++iy) {
            for (int ix = 0; ix < grid.nx; ++ix) {
                size_t c = grid.idx(ix, iy);
                if (grid.m[c] == Cplx{0.0, 0.0}) continue;
                Vec2 y = grid.cell_center(ix, iy);
                acc += grid.m[c] * sol.total[c] * std::exp(-iu * grid.k * xh.dot(y));
            }
        }
        out[q] = c2 * w * acc;
    }
    return out;
}

std::vector<Cplx> medium_scattered_field(const ContrastGrid& grid, const LsSolution& sol,
                                         const std::vector<Vec2>& points) {
    const double w = grid.h * grid.h * grid.k * grid.k;
    std::vector<Cplx> out(points.size(), Cplx{0.0, 0.0});
    for (size_t q = 0; q < points.size(); ++q) {
        Cplx acc = 0.0;
        for (int iy = 0; iy < grid.ny; ++iy) {
            for (int ix = 0; ix < grid.nx; ++ix) {
                size_t c = grid.idx(ix, iy);
                if (grid.m[c] == Cplx{0.0, 0.0}) continue;
                Vec2 y = grid.cell_center(ix, iy);
                double r = (points[q] - y).norm();
                if (r < 2.0 * grid.h)
                    throw AccuracyError("medium_scattered_field: point too close to the support");
                Cplx h0, h1;
                cyl_hankel1_01(grid.k * r, h0, h1);
                acc += (iu / 4.0) * h0 * grid.m[c] * sol.total[c];
            }
        }
        out[q] = w * acc;
    }
    return out;
}

} // namespace refscat
