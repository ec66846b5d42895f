#include "refscat/inversion.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>

#include "refscat/errors.hpp"

namespace refscat {

namespace {

int env_threads() {
    const char* s = std::getenv("REFSCAT_THREADS");
    if (!s) return 1;
    int n = std::atoi(s);
    return n > 0 ? n : 1;
}

void parallel_for(int n, const std::function<void(int)>& body) {
    int threads = std::min(env_threads(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

StarBoundary ParamVector::boundary() const {
    StarBoundary b;
    b.center = center;
    b.a0 = a0;
    b.ac = ac;
    b.bs = bs;
    return b;
}

ParamVector disk_init(Vec2 center, double radius, int order, BcKind bc) {
    ParamVector p;
    p.center = center;
    p.a0 = radius;
    p.ac.assign(order, 0.0);
    p.bs.assign(order, 0.0);
    p.bc = bc;
    return p;
}

namespace {

Scene scene_from_params(const ParamVector& p, const PhaselessDataset& d, bool include_ball) {
    Scene s;
    s.kind = p.kind;
    s.k = d.k;
    s.d0 = d.d0;
    s.has_ball = include_ball;
    s.ball = d.ball;
    s.ball_n0 = d.ball_n0;
    s.polygon = d.polygon;
    if (p.kind == SceneKind::Obstacle) {
        BoundaryCondition bc = (p.bc == BcKind::Dirichlet)
                                   ? BoundaryCondition::dirichlet()
                                   : BoundaryCondition::impedance(p.lambda);
        s.obstacles.push_back({p.boundary(), bc});
    } else {
        s.media.push_back({p.boundary(), Cplx{p.index, 0.0}});
    }
    return s;
}

std::vector<double> flatten(const ParamVector& p) {
    std::vector<double> x;
    if (p.fit_shape) {
        x = {p.center.x, p.center.y, p.a0};
        x.insert(x.end(), p.ac.begin(), p.ac.end());
        x.insert(x.end(), p.bs.begin(), p.bs.end());
    }
    if (p.kind == SceneKind::Obstacle && p.fit_lambda) {
        x.push_back(p.lambda.real());
        x.push_back(p.lambda.imag());
    }
    if (p.kind == SceneKind::Medium && p.fit_index) x.push_back(p.index);
    return x;
}

ParamVector unflatten(const ParamVector& shape, const std::vector<double>& x) {
    ParamVector p = shape;
    size_t q = 0;
    if (shape.fit_shape) {
        p.center = {x[0], x[1]};
        p.a0 = x[2];
        q = 3;
        for (auto& v : p.ac) v = x[q++];
        for (auto& v : p.bs) v = x[q++];
    }
    if (p.kind == SceneKind::Obstacle && p.fit_lambda) {
        p.lambda = {x[q], x[q + 1]};
        q += 2;
    }
    if (p.kind == SceneKind::Medium && p.fit_index) p.index = x[q++];
    return p;
}

// Feasibility projection: admissible impedance, capped magnitude, positive
// mean radius.
void project(std::vector<double>& x, const ParamVector& shape, const InversionOptions& opt) {
    size_t q = 0;
    if (shape.fit_shape) {
        x[2] = std::max(x[2], 0.05);
        q = 3 + shape.ac.size() + shape.bs.size();
    }
    if (shape.kind == SceneKind::Obstacle && shape.fit_lambda) {
        x[q + 1] = std::max(x[q + 1], 0.0); // Im lambda >= 0
        double mag = std::hypot(x[q], x[q + 1]);
        if (mag > opt.lambda_cap) {
            x[q] *= opt.lambda_cap / mag;
            x[q + 1] *= opt.lambda_cap / mag;
        }
    }
    if (shape.kind == SceneKind::Medium && shape.fit_index) {
        x[q] = std::max(x[q], 1e-3); // Re n_D > 0
    }
}

} // namespace

ObjectiveResult objective(const ParamVector& p, const PhaselessDataset& data,
                          const ObjectiveConfig& cfg) {
    const int I = data.ni(), J = data.nj();
    if (I == 0 || J == 0) throw ArgumentError("objective: empty dataset");
    double wb = cfg.wb >= 0.0 ? cfg.wb : 1.0 / std::sqrt(double(I) * J);
    double wc = cfg.wc >= 0.0 ? cfg.wc : 1.0 / std::sqrt(double(I) * J);

    Scene s = scene_from_params(p, data, cfg.include_ball);
    if (p.boundary().min_radius() <= 1e-3)
        throw NumericalError("objective: boundary radius not positive");

    std::unique_ptr<ForwardProvider> fwd;
    try {
        fwd = make_provider(s, cfg.forward);
    } catch (const ValidationError& e) {
        throw NumericalError(std::string("objective: forward model rejected parameters: ") +
                             e.what());
    }

    auto uinf = fwd->far_field(IncidentField::plane_wave(data.d0), data.directions);
    ObjectiveResult r;
    const int nb = (cfg.wb != 0.0) ? I * J : 0;
    const int nc = (cfg.wc != 0.0) ? I * J : 0;
    r.residuals.resize(I + nb + nc);
    for (int i = 0; i < I; ++i) {
        double ri = cfg.wa * (std::abs(uinf[i]) - data.a_mod[i]);
        r.residuals[i] = ri;
        r.ja += 0.5 * ri * ri;
    }
    if (nb || nc) {
        for (int j = 0; j < J; ++j) {
            auto vinf = fwd->far_field(IncidentField::point_source(data.sources[j].z),
                                       data.directions);
            for (int i = 0; i < I; ++i) {
                if (nb) {
                    double rb = wb * (std::abs(vinf[i]) - data.b_mod[data.idx(i, j)]);
                    r.residuals[I + (size_t)i * J + j] = rb;
                    r.jb += 0.5 * rb * rb;
                }
                if (nc) {
                    double rc =
                        wc * (std::abs(uinf[i] + vinf[i]) - data.c_mod[data.idx(i, j)]);
                    r.residuals[I + nb + (size_t)i * J + j] = rc;
                    r.jc += 0.5 * rc * rc;
                }
            }
        }
    }
    r.j = r.ja + r.jb + r.jc;
    return r;
}

namespace {

struct LmProblem {
    const PhaselessDataset& data;
    const ParamVector& shape;
    const InversionOptions& opt;
    int n_tik = 0;

    // residual vector including the high-order Tikhonov rows, or empty on
    // forward failure (rejected step)
    bool eval(const std::vector<double>& x, Eigen::VectorXd& r, double& j) const {
        ParamVector p = unflatten(shape, x);
        ObjectiveResult obj;
        try {
            obj = objective(p, data, opt.obj);
        } catch (const NumericalError&) {
            return false;
        }
        int base = (int)obj.residuals.size();
        r.resize(base + n_tik);
        r.head(base) = obj.residuals;
        int q = base;
        if (shape.fit_shape) {
            for (size_t m = 0; m < shape.ac.size(); ++m)
                if ((int)m + 1 > opt.tikhonov_free) r[q++] = opt.tikhonov * x[3 + m];
            for (size_t m = 0; m < shape.bs.size(); ++m)
                if ((int)m + 1 > opt.tikhonov_free)
                    r[q++] = opt.tikhonov * x[3 + shape.ac.size() + m];
            if (opt.gauge_weight > 0.0) {
                if (!shape.ac.empty()) r[q++] = opt.gauge_weight * x[3];
                if (!shape.bs.empty()) r[q++] = opt.gauge_weight * x[3 + shape.ac.size()];
            }
        }
        j = 0.5 * r.squaredNorm();
        return true;
    }

    std::vector<double> fd_steps(const std::vector<double>& x) const {
        std::vector<double> h(x.size());
        size_t n_geom = shape.fit_shape ? 3 + shape.ac.size() + shape.bs.size() : 0;
        for (size_t i = 0; i < x.size(); ++i) {
            h[i] = opt.fd_rel * (1.0 + std::fabs(x[i]));
            if (shape.kind == SceneKind::Medium && i < n_geom)
                h[i] = std::max(h[i], opt.medium_geom_step);
        }
        return h;
    }
};

InversionResult lm_minimize(const LmProblem& prob, const std::vector<double>& x0) {
    const auto t0 = std::chrono::steady_clock::now();
    InversionResult res;
    std::vector<double> x = x0;
    project(x, prob.shape, prob.opt);

    Eigen::VectorXd r;
    double j;
    if (!prob.eval(x, r, j)) {
        res.message = "initial point rejected by the forward model";
        res.j_final = 1e300;
        return res;
    }
    const int np = (int)x.size();
    double mu = -1.0, nu = 2.0;
    int iter = 0;
    res.history.push_back({0, j, true, 0.0});

    for (; iter < prob.opt.max_iter; ++iter) {
        // central-difference Jacobian, columns independent
        auto h = prob.fd_steps(x);
        Eigen::MatrixXd jac(r.size(), np);
        std::vector<int> bad(np, 0);
        parallel_for(np, [&](int c) {
            auto xp = x, xm = x;
            xp[c] += h[c];
            xm[c] -= h[c];
            Eigen::VectorXd rp, rm;
            double jp, jm;
            if (!prob.eval(xp, rp, jp) || !prob.eval(xm, rm, jm)) {
                bad[c] = 1;
                return;
            }
            jac.col(c) = (rp - rm) / (2.0 * h[c]);
        });
        for (int c = 0; c < np; ++c)
            if (bad[c]) jac.col(c).setZero();

        Eigen::VectorXd g = jac.transpose() * r;
        if (g.lpNorm<Eigen::Infinity>() < prob.opt.gtol) {
            res.converged = true;
            res.message = "gradient below tolerance";
            break;
        }
        Eigen::MatrixXd a = jac.transpose() * jac;
        if (mu < 0.0) mu = prob.opt.lm_tau * a.diagonal().maxCoeff();

        Eigen::MatrixXd am = a;
        am.diagonal() += mu * a.diagonal().cwiseMax(1e-12);
        Eigen::VectorXd step = am.ldlt().solve(-g);

        double xnorm = 0.0;
        for (double v : x) xnorm += v * v;
        if (step.norm() < prob.opt.xtol * (1.0 + std::sqrt(xnorm))) {
            res.converged = true;
            res.message = "step below tolerance";
            break;
        }

        auto xt = x;
        for (int c = 0; c < np; ++c) xt[c] += step[c];
        project(xt, prob.shape, prob.opt);

        Eigen::VectorXd rt;
        double jt;
        bool ok = prob.eval(xt, rt, jt);
        double predicted = -step.dot(g) - 0.5 * (jac * step).squaredNorm();
        predicted = std::max(predicted, 1e-300);
        double rho = ok ? (j - jt) / predicted : -1.0;
        if (ok && rho > 0.0 && jt <= j) {
            x = xt;
            r = rt;
            j = jt;
            mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3.0));
            nu = 2.0;
            res.history.push_back({iter + 1, j, true, mu});
        } else {
            mu *= nu;
            nu *= 2.0;
            res.history.push_back({iter + 1, j, false, mu});
            if (mu > 1e16) {
                res.message = "damping exhausted";
                break;
            }
        }
    }
    if (iter >= prob.opt.max_iter) res.message = "iteration cap reached";

    res.best = unflatten(prob.shape, x);
    res.iterations = iter;
    // report the data-misfit split at the solution
    try {
        auto obj = objective(res.best, prob.data, prob.opt.obj);
        res.ja = obj.ja;
        res.jb = obj.jb;
        res.jc = obj.jc;
    } catch (const NumericalError&) {
    }
    res.j_final = j;
    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return res;
}

} // namespace

InversionResult reconstruct(const PhaselessDataset& data, const ParamVector& init,
                            const InversionOptions& opt) {
    LmProblem prob{data, init, opt, 0};
    if (init.fit_shape) {
        for (size_t m = 0; m < init.ac.size(); ++m)
            if ((int)m + 1 > opt.tikhonov_free) ++prob.n_tik;
        for (size_t m = 0; m < init.bs.size(); ++m)
            if ((int)m + 1 > opt.tikhonov_free) ++prob.n_tik;
        if (opt.gauge_weight > 0.0) {
            if (!init.ac.empty()) ++prob.n_tik;
            if (!init.bs.empty()) ++prob.n_tik;
        }
    }

    std::vector<std::vector<double>> starts;
    starts.push_back(flatten(init));
    if (opt.multi_start > 1) {
        std::mt19937_64 rng(opt.seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int s = 1; s < opt.multi_start; ++s) {
            auto x = flatten(init);
            if (init.fit_shape) {
                x[0] += u(rng);
                x[1] += u(rng);
            }
            starts.push_back(x);
        }
    }

    InversionResult best;
    best.j_final = 1e300;
    for (auto& x0 : starts) {
        auto r = lm_minimize(prob, x0);
        if (r.j_final < best.j_final) best = std::move(r);
    }
    return best;
}

BcClassification classify_bc(const PhaselessDataset& data, const ParamVector& shape_init,
                             const InversionOptions& opt) {
    ParamVector dir_init = shape_init;
    dir_init.bc = BcKind::Dirichlet;
    dir_init.fit_lambda = false;

    ParamVector imp_init = shape_init;
    imp_init.bc = BcKind::Impedance;
    imp_init.fit_lambda = true;
    if (imp_init.lambda == Cplx{0.0, 0.0}) imp_init.lambda = {1.0, 0.2};

    BcClassification out;
    out.dirichlet_fit = reconstruct(data, dir_init, opt);
    out.impedance_fit = reconstruct(data, imp_init, opt);
    out.j_dirichlet = out.dirichlet_fit.j_final;
    out.j_impedance = out.impedance_fit.j_final;
    if (out.j_dirichlet == 0.0 && out.j_impedance == 0.0) {
        out.ratio = 1.0;
    } else {
        double lo = std::min(out.j_dirichlet, out.j_impedance);
        double hi = std::max(out.j_dirichlet, out.j_impedance);
        out.ratio = hi / std::max(lo, 1e-300);
    }
    out.determined = out.ratio >= 10.0;
    if (out.j_dirichlet <= out.j_impedance) {
        out.label = BoundaryCondition::dirichlet();
    } else {
        out.label = BoundaryCondition::impedance(out.impedance_fit.best.lambda);
    }
    return out;
}

std::vector<AmbiguityRow> ambiguity_scan(const PhaselessDataset& data, const Scene& truth,
                                         const std::vector<Vec2>& shifts,
                                         const ForwardOptions& fwd) {
    // reference plane-wave moduli of the ball-free truth
    Scene bare = truth.without_ball();
    auto ref_provider = make_provider(bare, fwd);
    auto ref =
        ref_provider->far_field(IncidentField::plane_wave(data.d0), data.directions);

    std::vector<AmbiguityRow> rows;
    for (Vec2 h : shifts) {
        AmbiguityRow row;
        row.h = h;

        Scene shifted_bare = bare;
        for (auto& c : shifted_bare.obstacles) c.boundary = translate(c.boundary, h);
        for (auto& c : shifted_bare.media) c.region = translate(c.region, h);
        auto p = make_provider(shifted_bare, fwd);
        auto f = p->far_field(IncidentField::plane_wave(data.d0), data.directions);
        double jp = 0.0;
        for (size_t i = 0; i < f.size(); ++i) {
            double r = std::abs(f[i]) - std::abs(ref[i]);
            jp += 0.5 * r * r;
        }
        row.j_plane_only = jp;

        // full triple with the (unshifted) ball, shifted scatterer
        Scene shifted = truth;
        for (auto& c : shifted.obstacles) c.boundary = translate(c.boundary, h);
        for (auto& c : shifted.media) c.region = translate(c.region, h);
        auto pt = make_provider(shifted, fwd);
        auto uinf = pt->far_field(IncidentField::plane_wave(data.d0), data.directions);
        const int I = data.ni(), J = data.nj();
        double wb = 1.0 / std::sqrt(double(I) * J);
        double jt = 0.0;
        for (int i = 0; i < I; ++i) {
            double r = std::abs(uinf[i]) - data.a_mod[i];
            jt += 0.5 * r * r;
        }
        for (int j = 0; j < J; ++j) {
            auto vinf = pt->far_field(IncidentField::point_source(data.sources[j].z),
                                      data.directions);
            for (int i = 0; i < I; ++i) {
                double rb = wb * (std::abs(vinf[i]) - data.b_mod[data.idx(i, j)]);
                double rc = wb * (std::abs(uinf[i] + vinf[i]) - data.c_mod[data.idx(i, j)]);
                jt += 0.5 * (rb * rb + rc * rc);
            }
        }
        row.j_triple = jt;
        rows.push_back(row);
    }
    return rows;
}

} // namespace refscat
