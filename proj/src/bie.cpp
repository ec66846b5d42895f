#include "refscat/bie.hpp"

#include <cmath>

#include "refscat/errors.hpp"
#include "refscat/scene_io.hpp"
#include "refscat/specfun.hpp"

namespace refscat {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

namespace {
constexpr double euler_gamma = 0.57721566490153286060651209008240243;
}

std::vector<double> kress_log_weights(int m) {
    if (m < 4 || m % 2) throw ArgumentError("kress_log_weights: m must be even and >= 4");
    std::vector<double> r(m);
    for (int d = 0; d < m; ++d) {
        double acc = 0.0;
        for (int p = 1; p < m / 2; ++p) acc += std::cos(2.0 * pi * p * d / m) / p;
        r[d] = -(4.0 * pi / m) * acc - (4.0 * pi / (m * m)) * ((d % 2) ? -1.0 : 1.0);
    }
    return r;
}

Eigen::MatrixXd trig_diff_matrix(int m) {
    if (m < 4 || m % 2) throw ArgumentError("trig_diff_matrix: m must be even and >= 4");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            double t = pi * (i - j) / m;
            d(i, j) = 0.5 * (((i - j) % 2) ? -1.0 : 1.0) / std::tan(t);
        }
    }
    return d;
}

namespace {

struct BodyGeom {
    const BieBody& b;
    double h; // parameter spacing 2 pi / m
};

// Smooth kernels with the y-side jacobian folded in; valid for x != y.
struct KernelEval {
    Cplx S, K, Kp, T;
};

KernelEval smooth_kernels(double k, Vec2 x, Vec2 nu_x, Vec2 y, Vec2 nn_y, double jac_y,
                          bool need_prime) {
    Vec2 dxy = x - y;
    double r = dxy.norm();
    Cplx h0, h1;
    cyl_hankel1_01(k * r, h0, h1);
    KernelEval out;
    out.S = (iu / 4.0) * h0 * jac_y;
    out.K = (iu * k / 4.0) * h1 * dxy.dot(nn_y) / r;
    if (need_prime) {
        double px = dxy.dot(nu_x), py = dxy.dot(nn_y);
        out.Kp = -(iu * k / 4.0) * h1 * px / r * jac_y;
        out.T = (iu * k / 4.0) *
                ((k * h0 - 2.0 * h1 / r) * px * py / (r * r) + h1 * nu_x.dot(nn_y) / r);
    }
    return out;
}

double log_factor(double ti, double tj) {
    double s = std::sin((ti - tj) / 2.0);
    return std::log(4.0 * s * s);
}

} // namespace

SelfOperators build_self_operators(const StarBoundary& bnd, int m, double k) {
    BieBody body;
    body.boundary = bnd;
    body.bc = BoundaryCondition::dirichlet();
    body.sample = sample_boundary(bnd, m);
    body.nn.resize(m);
    body.xpp.resize(m);
    for (int i = 0; i < m; ++i) {
        body.nn[i] = body.sample.normals[i] * body.sample.jacobians[i];
        body.xpp[i] = bnd.second(body.sample.params[i]);
    }

    const double h = 2.0 * pi / m;
    auto R = kress_log_weights(m);
    const auto& sm = body.sample;

    CMat S(m, m), K(m, m), Snn(m, m), Shat(m, m);
    for (int i = 0; i < m; ++i) {
        Vec2 x = sm.nodes[i];
        Vec2 nu = sm.normals[i];
        double ji = sm.jacobians[i];
        for (int j = 0; j < m; ++j) {
            double jj = sm.jacobians[j];
            if (i == j) {
                double aS = -jj / (4.0 * pi);
                Cplx bS = (iu / 4.0 - euler_gamma / (2.0 * pi) -
                           std::log(k * ji / 2.0) / (2.0 * pi)) *
                          ji;
                S(i, i) = R[0] * aS + h * bS;
                Cplx bK = body.xpp[i].dot(body.nn[i]) / (4.0 * pi * ji * ji);
                K(i, i) = h * bK; // the log coefficient vanishes on the diagonal
                double aN = -k * k * jj / (4.0 * pi); // nu.nn/ji = ji on the diagonal
                Cplx bN = k * k *
                          (iu / 4.0 - euler_gamma / (2.0 * pi) -
                           std::log(k * ji / 2.0) / (2.0 * pi)) *
                          ji;
                Snn(i, i) = R[0] * aN + h * bN;
                double aH = -1.0 / (4.0 * pi);
                Cplx bH = iu / 4.0 - euler_gamma / (2.0 * pi) - std::log(k * ji / 2.0) / (2.0 * pi);
                Shat(i, i) = R[0] * aH + h * bH;
                continue;
            }
            Vec2 y = sm.nodes[j];
            Vec2 dxy = x - y;
            double r = dxy.norm();
            Cplx h0, h1;
            cyl_hankel1_01(k * r, h0, h1);
            double L = log_factor(sm.params[i], sm.params[j]);
            double j0 = h0.real(), j1 = h1.real();

            Cplx valS = (iu / 4.0) * h0 * jj;
            double aS = -j0 * jj / (4.0 * pi);
            S(i, j) = R[(i - j + m) % m] * aS + h * (valS - aS * L);

            double g = dxy.dot(body.nn[j]);
            Cplx valK = (iu * k / 4.0) * h1 * g / r;
            double aK = -(k / (4.0 * pi)) * j1 * g / r;
            K(i, j) = R[(i - j + m) % m] * aK + h * (valK - aK * L);

            double nn_dot = nu.dot(body.nn[j]);
            Cplx valN = k * k * (iu / 4.0) * h0 * nn_dot;
            double aN = -k * k * j0 * nn_dot / (4.0 * pi);
            Snn(i, j) = R[(i - j + m) % m] * aN + h * (valN - aN * L);

            Cplx valH = (iu / 4.0) * h0;
            double aH = -j0 / (4.0 * pi);
            Shat(i, j) = R[(i - j + m) % m] * aH + h * (valH - aH * L);
        }
    }

    // K' shares K's diagonal; off-diagonal from the x-side kernel.
    CMat Kp(m, m);
    for (int i = 0; i < m; ++i) {
        Vec2 x = sm.nodes[i];
        Vec2 nu = sm.normals[i];
        for (int j = 0; j < m; ++j) {
            if (i == j) {
                Kp(i, i) = K(i, i);
                continue;
            }
            Vec2 y = sm.nodes[j];
            Vec2 dxy = x - y;
            double r = dxy.norm();
            Cplx h0, h1;
            cyl_hankel1_01(k * r, h0, h1);
            double L = log_factor(sm.params[i], sm.params[j]);
            double gp = dxy.dot(nu);
            double jj = sm.jacobians[j];
            Cplx val = -(iu * k / 4.0) * h1 * gp / r * jj;
            double aKp = (k / (4.0 * pi)) * h1.real() * gp / r * jj;
            Kp(i, j) = R[(i - j + m) % m] * aKp + h * (val - aKp * L);
        }
    }

    // Maue: T = diag(1/J) D Shat D + k^2 S_{nu.nu}
    Eigen::MatrixXd D = trig_diff_matrix(m);
    CMat T = D.cast<Cplx>() * Shat * D.cast<Cplx>();
    for (int i = 0; i < m; ++i) T.row(i) /= sm.jacobians[i];
    T += Snn;

    return {std::move(S), std::move(K), std::move(Kp), std::move(T)};
}

SystemOperator SystemOperator::assemble(const Scene& scene, int nodes_per_body, bool strict) {
    if (scene.kind != SceneKind::Obstacle)
        throw ArgumentError("SystemOperator::assemble: obstacle scenes only");
    auto report = validate_scene(scene);
    if (!report.pass) {
        std::string why;
        for (auto& c : report.checks)
            if (!c.pass) why += (why.empty() ? "" : ", ") + c.name;
        throw ValidationError("SystemOperator::assemble: scene failed validation: " + why);
    }

    SystemOperator op;
    op.k_ = scene.k;
    op.eta_ = scene.k;
    op.fingerprint_ = scene_fingerprint(scene);

    std::vector<std::pair<StarBoundary, BoundaryCondition>> specs;
    for (auto& c : scene.obstacles) specs.push_back({c.boundary, c.bc});
    if (scene.has_ball)
        specs.push_back({make_circle(scene.ball.center, scene.ball.radius),
                         BoundaryCondition::dirichlet()});
    if (specs.empty()) throw ArgumentError("SystemOperator::assemble: empty scene");

    const int m = nodes_per_body;
    int total = 0;
    for (auto& [bnd, bc] : specs) {
        BieBody body;
        body.boundary = bnd;
        body.bc = bc;
        body.sample = sample_boundary(bnd, m);
        body.nn.resize(m);
        body.xpp.resize(m);
        double length = 0.0;
        for (int i = 0; i < m; ++i) {
            body.nn[i] = body.sample.normals[i] * body.sample.jacobians[i];
            body.xpp[i] = bnd.second(body.sample.params[i]);
            length += body.sample.jacobians[i] * (2.0 * pi / m);
        }
        int needed = (int)std::ceil(10.0 * length * scene.k / (2.0 * pi));
        if (m < needed) {
            std::string w = "body resolution " + std::to_string(m) + " below heuristic " +
                            std::to_string(needed);
            if (strict) throw NumericalError("SystemOperator::assemble: " + w + " (strict mode)");
            op.warnings_.push_back(w);
        }
        body.offset = total;
        total += m;
        op.bodies_.push_back(std::move(body));
    }

    const double k = op.k_, eta = op.eta_, h = 2.0 * pi / m;
    op.mat_ = CMat::Zero(total, total);

    for (size_t ai = 0; ai < op.bodies_.size(); ++ai) {
        const BieBody& A = op.bodies_[ai];
        const bool imp = A.bc.kind == BcKind::Impedance;
        const Cplx lam = A.bc.lambda;
        for (size_t bi = 0; bi < op.bodies_.size(); ++bi) {
            const BieBody& B = op.bodies_[bi];
            if (ai == bi) {
                auto ops = build_self_operators(A.boundary, m, k);
                CMat trace_dir =
                    ops.S + iu * eta * (ops.K + 0.5 * CMat::Identity(m, m));
                CMat block;
                if (!imp) {
                    block = trace_dir;
                } else {
                    block = (ops.Kp - 0.5 * CMat::Identity(m, m)) + iu * eta * ops.T +
                            lam * trace_dir;
                }
                op.mat_.block(A.offset, A.offset, m, m) = block;
            } else {
                for (int i = 0; i < m; ++i) {
                    Vec2 x = A.sample.nodes[i];
                    Vec2 nu = A.sample.normals[i];
                    for (int j = 0; j < m; ++j) {
                        auto kv = smooth_kernels(k, x, nu, B.sample.nodes[j], B.nn[j],
                                                 B.sample.jacobians[j], imp);
                        Cplx dir_trace = kv.S + iu * eta * kv.K;
                        Cplx entry = imp ? (kv.Kp + iu * eta * kv.T + lam * dir_trace) : dir_trace;
                        op.mat_(A.offset + i, B.offset + j) = h * entry;
                    }
                }
            }
        }
    }

    op.lu_ = Eigen::PartialPivLU<CMat>(op.mat_);
    return op;
}

DensitySolution solve(const std::shared_ptr<const SystemOperator>& op, const IncidentField& inc) {
    return solve_combination(op, {inc}, {Cplx{1.0, 0.0}});
}

DensitySolution solve_combination(const std::shared_ptr<const SystemOperator>& op,
                                  const std::vector<IncidentField>& incs,
                                  const std::vector<Cplx>& coeffs) {
    if (incs.size() != coeffs.size())
        throw ArgumentError("solve_combination: incident/coefficient count mismatch");
    const double k = op->k();
    CVec rhs = CVec::Zero(op->size());
    for (auto& body : op->bodies()) {
        const int m = body.sample.size();
        for (int i = 0; i < m; ++i) {
            Vec2 x = body.sample.nodes[i];
            Cplx val = 0.0;
            for (size_t q = 0; q < incs.size(); ++q) {
                if (incs[q].kind == IncidentField::Kind::PointSource) {
                    if (point_inside(body.boundary, incs[q].location))
                        throw DomainError("solve: point source inside a body");
                }
                Cplx ui = incident_value(incs[q], k, x);
                if (body.bc.kind == BcKind::Dirichlet) {
                    val += coeffs[q] * ui;
                } else {
                    Cplx dui = incident_grad_dot(incs[q], k, x, body.sample.normals[i]);
                    val += coeffs[q] * (dui + body.bc.lambda * ui);
                }
            }
            rhs[body.offset + i] = -val;
        }
    }
    DensitySolution sol;
    sol.op = op;
    sol.incident = incs.empty() ? IncidentField{} : incs[0];
    sol.density = op->lu().solve(rhs);
    double rhs_norm = rhs.norm();
    if (rhs_norm > 0.0) {
        sol.residual = (op->matrix() * sol.density - rhs).norm() / rhs_norm;
        if (sol.residual > 1e-10) {
            double rc = op->lu().rcond();
            throw NumericalError("solve: discrete residual " + std::to_string(sol.residual) +
                                 " above 1e-10 (rcond ~ " + std::to_string(rc) + ")");
        }
    }
    return sol;
}

std::vector<Cplx> far_field(const DensitySolution& sol, const std::vector<Vec2>& directions) {
    const SystemOperator& op = *sol.op;
    const double k = op.k(), eta = op.eta();
    const Cplx c2 = far_field_constant_2d(k);
    std::vector<Cplx> out(directions.size(), Cplx{0.0, 0.0});
    for (size_t q = 0; q < directions.size(); ++q) {
        Vec2 xh = directions[q];
        if (std::fabs(xh.norm() - 1.0) > 1e-10)
            throw ArgumentError("far_field: directions must be unit vectors");
        Cplx acc = 0.0;
        for (auto& body : op.bodies()) {
            const int m = body.sample.size();
            const double h = 2.0 * pi / m;
            for (int j = 0; j < m; ++j) {
                Cplx phase = std::exp(-iu * k * xh.dot(body.sample.nodes[j]));
                Cplx kernel = (1.0 + eta * k * xh.dot(body.sample.normals[j])) * phase;
                acc += kernel * sol.density[body.offset + j] * body.sample.jacobians[j] * h;
            }
        }
        out[q] = c2 * acc;
    }
    return out;
}

std::vector<Cplx> near_field(const DensitySolution& sol, const std::vector<Vec2>& points) {
    const SystemOperator& op = *sol.op;
    const double k = op.k(), eta = op.eta();
    std::vector<Cplx> out(points.size(), Cplx{0.0, 0.0});
    for (size_t q = 0; q < points.size(); ++q) {
        Vec2 x = points[q];
        for (auto& body : op.bodies()) {
            const int m = body.sample.size();
            const double h = 2.0 * pi / m;
            double local = 0.0;
            for (int j = 0; j < m; ++j)
                local = std::max(local, body.sample.jacobians[j]);
            double min_dist = 1e300;
            for (int j = 0; j < m; ++j)
                min_dist = std::min(min_dist, (x - body.sample.nodes[j]).norm());
            if (min_dist < 3.0 * local * h)
                throw AccuracyError("near_field: point within 3 node spacings of a boundary");
            Cplx acc = 0.0;
            for (int j = 0; j < m; ++j) {
                auto kv = smooth_kernels(k, x, {0.0, 0.0}, body.sample.nodes[j], body.nn[j],
                                         body.sample.jacobians[j], false);
                acc += (kv.S + iu * eta * kv.K) * sol.density[body.offset + j];
            }
            out[q] += h * acc;
        }
    }
    return out;
}

} // namespace refscat
