#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "refscat/errors.hpp"
#include "refscat/inversion.hpp"

using namespace refscat;

namespace {

Scene obstacle_truth(Vec2 center, double radius, BoundaryCondition bc) {
    Scene s;
    s.kind = SceneKind::Obstacle;
    s.k = 1.0;
    s.obstacles.push_back({make_circle(center, radius), bc});
    s.ball.center = {-2.6, 0.0};
    s.ball.radius = 0.4;
    s.polygon.vertices = {{2.2, -0.7}, {3.6, -0.7}, {3.6, 0.7}, {2.2, 0.7}};
    return s;
}

ForwardOptions fast_fwd() {
    ForwardOptions f;
    f.nodes_per_body = 40;
    return f;
}

PhaselessDataset make_data(const Scene& truth, int ndirs, int per_edge,
                           const ForwardOptions& fwd, double delta = 0.0,
                           std::uint64_t seed = 1) {
    auto p = make_provider(truth, fwd);
    return synth_dataset(*p, truth.d0, direction_grid(ndirs), sample_polygon(truth.polygon, per_edge),
                         delta, seed);
}

} // namespace

TEST_CASE("objective vanishes at the truth for noiseless data") {
    Scene truth = obstacle_truth({0.3, -0.2}, 0.7, BoundaryCondition::dirichlet());
    auto data = make_data(truth, 16, 1, fast_fwd());
    ParamVector p = disk_init({0.3, -0.2}, 0.7, 0);
    ObjectiveConfig cfg;
    cfg.forward = fast_fwd();
    auto r = objective(p, data, cfg);
    CHECK(r.j < 1e-16);
    CHECK(r.ja + r.jb + r.jc == r.j);
}

TEST_CASE("objective is large at a shifted truth on the full triple") {
    Scene truth = obstacle_truth({0.3, -0.2}, 0.7, BoundaryCondition::dirichlet());
    auto data = make_data(truth, 16, 1, fast_fwd());
    ParamVector p = disk_init({0.8, -0.2}, 0.7, 0); // h = (0.5, 0)
    ObjectiveConfig cfg;
    cfg.forward = fast_fwd();
    auto r = objective(p, data, cfg);
    CHECK(r.j > 1e-4);
}

TEST_CASE("ambiguity scan: plane-wave-only objective is flat, the triple is not") {
    Scene truth = obstacle_truth({0.0, 0.0}, 0.8, BoundaryCondition::dirichlet());
    auto data = make_data(truth, 16, 1, fast_fwd());
    std::vector<Vec2> shifts = {{0.0, 0.0}, {0.5, 0.0}, {0.1, 0.25}};
    auto rows = ambiguity_scan(data, truth, shifts, fast_fwd());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].j_plane_only < 1e-16);
    CHECK(rows[0].j_triple < 1e-16);
    for (size_t q = 1; q < rows.size(); ++q) {
        CHECK(rows[q].j_plane_only < 1e-12);
        CHECK(rows[q].j_triple >= 1e3 * std::max(rows[q].j_plane_only, 1e-14));
    }
}

TEST_CASE("finite-difference gradient agrees with directional differences") {
    Scene truth = obstacle_truth({0.0, 0.0}, 0.8, BoundaryCondition::dirichlet());
    auto data = make_data(truth, 8, 1, fast_fwd());
    ParamVector p = disk_init({0.15, 0.1}, 0.9, 1);
    p.ac = {0.05};
    p.bs = {-0.03};
    ObjectiveConfig cfg;
    cfg.forward = fast_fwd();

    auto study = objective(p, data, cfg);
    auto flat = [&](const ParamVector& q) { return objective(q, data, cfg).j; };
    // column for the center-x parameter via the same FD scheme the optimizer
    // uses, against a directional difference of the scalar objective
    double h = 1e-6 * (1.0 + std::fabs(p.center.x));
    ParamVector pp = p, pm = p;
    pp.center.x += h;
    pm.center.x -= h;
    auto rp = objective(pp, data, cfg).residuals;
    auto rm = objective(pm, data, cfg).residuals;
    Eigen::VectorXd col = (rp - rm) / (2.0 * h);
    double g_from_jac = col.dot(study.residuals);
    double g_direct = (flat(pp) - flat(pm)) / (2.0 * h);
    CHECK(std::fabs(g_from_jac - g_direct) < 1e-5 * std::max(std::fabs(g_direct), 1e-12));
}

TEST_CASE("disk reconstruction from noiseless data") {
    Scene truth = obstacle_truth({0.3, -0.2}, 0.7, BoundaryCondition::dirichlet());
    auto data = make_data(truth, 16, 1, fast_fwd());
    InversionOptions opt;
    opt.obj.forward = fast_fwd();
    opt.max_iter = 40;
    auto res = reconstruct(data, disk_init({0.0, 0.0}, 1.0, 0), opt);
    CHECK((res.best.center - Vec2{0.3, -0.2}).norm() < 1e-3);
    CHECK(std::fabs(res.best.a0 - 0.7) < 1e-3);
    // accepted-step history is non-increasing
    double last = 1e300;
    for (auto& e : res.history) {
        if (!e.accepted) continue;
        CHECK(e.j <= last * (1.0 + 1e-12));
        last = e.j;
    }
}

TEST_CASE("noisy disk reconstruction stays near the truth") {
    Scene truth = obstacle_truth({0.3, -0.2}, 0.7, BoundaryCondition::dirichlet());
    auto data = make_data(truth, 16, 1, fast_fwd(), 0.01, 42);
    InversionOptions opt;
    opt.obj.forward = fast_fwd();
    opt.max_iter = 40;
    auto res = reconstruct(data, disk_init({0.0, 0.0}, 1.0, 0), opt);
    CHECK((res.best.center - Vec2{0.3, -0.2}).norm() < 5e-2);
}

TEST_CASE("boundary-condition classification on a Neumann truth") {
    Scene truth = obstacle_truth({0.1, 0.0}, 0.8, BoundaryCondition::neumann());
    auto data = make_data(truth, 12, 1, fast_fwd());
    InversionOptions opt;
    opt.obj.forward = fast_fwd();
    opt.max_iter = 30;
    auto cls = classify_bc(data, disk_init({0.0, 0.0}, 1.0, 0), opt);
    CHECK(cls.label.kind == BcKind::Impedance);
    CHECK(std::abs(cls.label.lambda) < 1e-2); // the sound-hard degeneracy
    CHECK(cls.determined);
}

TEST_CASE("medium contrast recovery on a penetrable disk") {
    Scene truth;
    truth.kind = SceneKind::Medium;
    truth.k = 1.0;
    truth.media.push_back({make_circle({0.0, 0.0}, 0.5), Cplx{1.5, 0.0}});
    truth.ball.center = {2.2, 0.0};
    truth.ball.radius = 0.45;
    truth.ball_n0 = 2.0;
    truth.polygon.vertices = {{0.6, 2.2}, {1.8, 2.2}, {1.8, 3.4}, {0.6, 3.4}};
    ForwardOptions fwd;
    fwd.medium_resolution = 48;
    auto data = make_data(truth, 12, 1, fwd);

    ParamVector init;
    init.kind = SceneKind::Medium;
    init.center = {0.0, 0.0};
    init.a0 = 0.5;
    init.index = 1.2;
    init.fit_index = true;
    init.fit_shape = false; // region known, contrast is the unknown
    InversionOptions opt;
    opt.obj.forward = fwd;
    opt.max_iter = 25;
    auto res = reconstruct(data, init, opt);
    CHECK(std::fabs(res.best.index - 1.5) < 1e-2);
}

TEST_CASE("invalid parameters are rejected as numerical errors") {
    Scene truth = obstacle_truth({0.3, -0.2}, 0.7, BoundaryCondition::dirichlet());
    auto data = make_data(truth, 8, 1, fast_fwd());
    ParamVector bad = disk_init({-2.6, 0.0}, 0.7, 0); // overlaps the ball
    ObjectiveConfig cfg;
    cfg.forward = fast_fwd();
    CHECK_THROWS_AS(objective(bad, data, cfg), NumericalError);
}
