#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "refscat/bie.hpp"
#include "refscat/errors.hpp"
#include "refscat/series.hpp"
#include "refscat/specfun.hpp"

using namespace refscat;

namespace {

Scene single_body_scene(const StarBoundary& b, BoundaryCondition bc, double k) {
    Scene s;
    s.kind = SceneKind::Obstacle;
    s.k = k;
    s.obstacles.push_back({b, bc});
    s.has_ball = false;
    return s;
}

StarBoundary kite_boundary(Vec2 c = {0.0, 0.0}) {
    StarBoundary b;
    b.center = c;
    b.a0 = 1.0;
    b.ac = {0.0, 0.25};
    b.bs = {0.0, 0.0, 0.1};
    return b;
}

double far_field_rel_err(const std::vector<Cplx>& got, const std::vector<Cplx>& want) {
    double scale = 0.0, err = 0.0;
    for (auto& w : want) scale = std::max(scale, std::abs(w));
    for (size_t i = 0; i < got.size(); ++i) err = std::max(err, std::abs(got[i] - want[i]));
    return err / scale;
}

} // namespace

TEST_CASE("kress log weights integrate the known Fourier pairs") {
    // int_0^{2pi} ln(4 sin^2((t-s)/2)) cos(p s) ds = -(2 pi / p) cos(p t)
    const int m = 32;
    auto R = kress_log_weights(m);
    for (int p : {1, 2, 5, 9}) {
        for (int i : {0, 3, 11}) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += R[(i - j + m) % m] * std::cos(2.0 * pi * p * j / m);
            double want = -(2.0 * pi / p) * std::cos(2.0 * pi * p * i / m);
            CHECK(std::fabs(acc - want) < 1e-12);
        }
    }
    // constant integrates to zero
    double z = 0.0;
    for (int j = 0; j < m; ++j) z += R[j];
    CHECK(std::fabs(z) < 1e-12);
}

TEST_CASE("trig differentiation matrix is exact on band-limited modes") {
    const int m = 24;
    auto D = trig_diff_matrix(m);
    Eigen::VectorXd f(m), want(m);
    for (int i = 0; i < m; ++i) {
        double t = 2.0 * pi * i / m;
        f[i] = std::sin(3.0 * t) + 0.5 * std::cos(7.0 * t);
        want[i] = 3.0 * std::cos(3.0 * t) - 3.5 * std::sin(7.0 * t);
    }
    Eigen::VectorXd got = D * f;
    CHECK((got - want).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("boundary operator symbols on the unit circle") {
    // S e^{int} = (i pi / 2) J_n(k) H_n(k) e^{int}
    // (K + I/2) e^{int} = (i pi k / 2) J_n'(k) H_n(k) e^{int}
    // (K' - I/2) e^{int} = (i pi k / 2) J_n(k) H_n'(k) e^{int} - e^{int}... via
    //   dS/dnu|_+ = K' - I/2 => K' e^{int} = ((i pi k/2) J_n H_n' + 1/2) e^{int}
    // T e^{int} = (i pi k^2 / 2) J_n'(k) H_n'(k) e^{int}
    const int m = 64;
    const double k = 1.3;
    auto ops = build_self_operators(make_circle({0.0, 0.0}, 1.0), m, k);
    for (int n : {0, 1, 2, 5}) {
        Eigen::VectorXcd e(m);
        for (int i = 0; i < m; ++i) e[i] = std::exp(iu * double(n) * (2.0 * pi * i / m));
        double jn = cyl_bessel_j(n, k), yn = cyl_bessel_y(n, k);
        Cplx hn{jn, yn};
        Cplx jp = cyl_bessel_deriv(BesselKind::FirstKind, n, k);
        Cplx hp = cyl_bessel_deriv(BesselKind::HankelFirst, n, k);

        Cplx sS = (iu * pi / 2.0) * jn * hn;
        Cplx sK = (iu * pi * k / 2.0) * jp * hn - 0.5;
        Cplx sKp = (iu * pi * k / 2.0) * jn * hp + 0.5;
        Cplx sT = (iu * pi * k * k / 2.0) * jp * hp;

        CAPTURE(n);
        CHECK((ops.S * e - sS * e).lpNorm<Eigen::Infinity>() < 1e-10);
        CHECK((ops.K * e - sK * e).lpNorm<Eigen::Infinity>() < 1e-10);
        CHECK((ops.Kp * e - sKp * e).lpNorm<Eigen::Infinity>() < 1e-10);
        CHECK((ops.T * e - sT * e).lpNorm<Eigen::Infinity>() < 1e-9);
    }
}

TEST_CASE("single Dirichlet disk reproduces the series far field") {
    double k = 1.0;
    auto scene = single_body_scene(make_circle({0.0, 0.0}, 1.0), BoundaryCondition::dirichlet(), k);
    auto op = std::make_shared<SystemOperator>(SystemOperator::assemble(scene, 64));
    auto sol = solve(op, IncidentField::plane_wave({1, 0}));
    auto dirs = direction_grid(32);
    auto got = far_field(sol, dirs);
    auto ser = solve_disk(1.0, {0, 0}, BoundaryCondition::dirichlet(),
                          IncidentField::plane_wave({1, 0}), k, 40);
    auto want = eval_far(ser, dirs);
    CHECK(far_field_rel_err(got, want) < 1e-8);
}

TEST_CASE("Neumann and impedance disks reproduce the series far field") {
    double k = 1.0;
    auto dirs = direction_grid(32);
    for (auto bc : {BoundaryCondition::neumann(), BoundaryCondition::impedance({1.0, 0.5})}) {
        auto scene = single_body_scene(make_circle({0.0, 0.0}, 1.0), bc, k);
        auto op = std::make_shared<SystemOperator>(SystemOperator::assemble(scene, 64));
        auto sol = solve(op, IncidentField::plane_wave({1, 0}));
        auto got = far_field(sol, dirs);
        auto ser = solve_disk(1.0, {0, 0}, bc, IncidentField::plane_wave({1, 0}), k, 40);
        auto want = eval_far(ser, dirs);
        CAPTURE((int)bc.kind);
        CHECK(far_field_rel_err(got, want) < 1e-6);
    }
}

TEST_CASE("spectral convergence: 64 -> 128 nodes gains three orders") {
    double k = 5.0;
    auto dirs = direction_grid(16);
    auto ser = solve_disk(1.0, {0, 0}, BoundaryCondition::dirichlet(),
                          IncidentField::plane_wave({1, 0}), k, 50);
    auto want = eval_far(ser, dirs);
    auto scene = single_body_scene(make_circle({0.0, 0.0}, 1.0), BoundaryCondition::dirichlet(), k);
    auto op64 = std::make_shared<SystemOperator>(SystemOperator::assemble(scene, 64));
    auto op128 = std::make_shared<SystemOperator>(SystemOperator::assemble(scene, 128));
    double e64 = far_field_rel_err(far_field(solve(op64, IncidentField::plane_wave({1, 0})), dirs),
                                   want);
    double e128 = far_field_rel_err(
        far_field(solve(op128, IncidentField::plane_wave({1, 0})), dirs), want);
    CHECK(e128 < std::max(e64 / 1e3, 1e-12));
}

TEST_CASE("two far-separated disks approach the superposition of singles") {
    double k = 1.0;
    auto dirs = direction_grid(16);
    double prev = 1e300;
    for (double sep : {10.0, 20.0, 40.0}) {
        Scene s;
        s.kind = SceneKind::Obstacle;
        s.k = k;
        s.has_ball = false;
        s.obstacles.push_back({make_circle({0.0, 0.0}, 1.0), BoundaryCondition::dirichlet()});
        s.obstacles.push_back({make_circle({sep, 0.0}, 1.0), BoundaryCondition::dirichlet()});
        auto op = std::make_shared<SystemOperator>(SystemOperator::assemble(s, 64));
        auto got = far_field(solve(op, IncidentField::plane_wave({0, 1})), dirs);
        auto s1 = eval_far(solve_disk(1.0, {0.0, 0.0}, BoundaryCondition::dirichlet(),
                                      IncidentField::plane_wave({0, 1}), k, 40),
                           dirs);
        auto s2 = eval_far(solve_disk(1.0, {sep, 0.0}, BoundaryCondition::dirichlet(),
                                      IncidentField::plane_wave({0, 1}), k, 40),
                           dirs);
        std::vector<Cplx> sum(dirs.size());
        for (size_t i = 0; i < dirs.size(); ++i) sum[i] = s1[i] + s2[i];
        double err = far_field_rel_err(got, sum);
        CHECK(err < prev);
        CHECK(err < 0.8 / std::sqrt(sep)); // secondary excitation decays like 1/sqrt(k r) in 2D
        prev = err;
    }
}

TEST_CASE("overlapping bodies fail the precondition") {
    Scene s;
    s.kind = SceneKind::Obstacle;
    s.k = 1.0;
    s.has_ball = false;
    s.obstacles.push_back({make_circle({0.0, 0.0}, 1.0), BoundaryCondition::dirichlet()});
    s.obstacles.push_back({make_circle({1.0, 0.0}, 1.0), BoundaryCondition::dirichlet()});
    CHECK_THROWS_AS(SystemOperator::assemble(s, 32), ValidationError);
}

TEST_CASE("solve is linear in the incident data") {
    auto scene = single_body_scene(kite_boundary(), BoundaryCondition::dirichlet(), 1.0);
    auto op = std::make_shared<SystemOperator>(SystemOperator::assemble(scene, 96));
    auto u = IncidentField::plane_wave({1, 0});
    auto v = IncidentField::point_source({3.0, 1.5});
    Cplx alpha{0.7, -0.2}, beta{1.1, 0.4};
    auto su = solve(op, u), sv = solve(op, v);
    auto sc = solve_combination(op, {u, v}, {alpha, beta});
    Eigen::VectorXcd want = alpha * su.density + beta * sv.density;
    CHECK((sc.density - want).lpNorm<Eigen::Infinity>() <
          1e-12 * want.lpNorm<Eigen::Infinity>());
    // zero incident combination gives a zero density
    auto sz = solve_combination(op, {u}, {Cplx{0.0, 0.0}});
    CHECK(sz.density.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("total field vanishes at Dirichlet boundary probes") {
    double k = 1.0;
    auto kb = kite_boundary();
    auto scene = single_body_scene(kb, BoundaryCondition::dirichlet(), k);
    auto op = std::make_shared<SystemOperator>(SystemOperator::assemble(scene, 128));
    auto inc = IncidentField::plane_wave(unit_dir(0.3));
    auto sol = solve(op, inc);
    // probe on a slightly inflated copy of the curve, outside the 3-spacing
    // exclusion band via a denser solve
    StarBoundary probe = kb;
    probe.a0 += 0.35;
    auto ps = sample_boundary(probe, 16);
    auto us = near_field(sol, ps.nodes);
    // compare against the series-free oracle: re-evaluating the boundary
    // condition residual via a fine re-solve is circular, so instead check
    // far-field agreement with a 256-node solve
    auto op2 = std::make_shared<SystemOperator>(SystemOperator::assemble(scene, 256));
    auto sol2 = solve(op2, inc);
    auto us2 = near_field(sol2, ps.nodes);
    for (size_t i = 0; i < ps.nodes.size(); ++i) CHECK(std::abs(us[i] - us2[i]) < 1e-9);
    // and the genuine boundary-condition residual through the fine solution
    auto bs = sample_boundary(kb, 8);
    std::vector<Vec2> just_out(bs.nodes.size());
    for (size_t i = 0; i < bs.nodes.size(); ++i)
        just_out[i] = bs.nodes[i] + bs.normals[i] * 0.12;
    auto uso = near_field(sol2, just_out);
    // total field should be small near the sound-soft boundary (continuity)
    for (size_t i = 0; i < just_out.size(); ++i) {
        Cplx total = uso[i] + incident_value(inc, k, just_out[i]);
        CHECK(std::abs(total) < 0.35); // O(dist) away from zero trace
    }
}

TEST_CASE("reciprocity on the kite") {
    double k = 1.0;
    auto scene = single_body_scene(kite_boundary(), BoundaryCondition::dirichlet(), k);
    auto op = std::make_shared<SystemOperator>(SystemOperator::assemble(scene, 128));
    auto dirs = direction_grid(8);
    double worst = 0.0;
    for (auto& d : dirs) {
        auto f = far_field(solve(op, IncidentField::plane_wave(d)), dirs);
        for (size_t q = 0; q < dirs.size(); ++q) {
            auto g = far_field(solve(op, IncidentField::plane_wave(-dirs[q])), {-d});
            worst = std::max(worst, std::abs(f[q] - g[0]));
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("translation of the kite: modulus invariant, phase factor exact") {
    double k = 1.0;
    Vec2 h{0.5, 0.25};
    Vec2 d = unit_dir(0.9);
    auto dirs = direction_grid(64);
    auto base = single_body_scene(kite_boundary(), BoundaryCondition::dirichlet(), k);
    auto shifted = single_body_scene(kite_boundary(h), BoundaryCondition::dirichlet(), k);
    auto f0 = far_field(solve(std::make_shared<SystemOperator>(SystemOperator::assemble(base, 96)),
                              IncidentField::plane_wave(d)),
                        dirs);
    auto fh = far_field(
        solve(std::make_shared<SystemOperator>(SystemOperator::assemble(shifted, 96)),
              IncidentField::plane_wave(d)),
        dirs);
    for (size_t i = 0; i < dirs.size(); ++i) {
        CHECK(std::fabs(std::abs(fh[i]) - std::abs(f0[i])) < 1e-7);
        Cplx phase = std::exp(iu * k * h.dot(d - dirs[i]));
        CHECK(std::abs(fh[i] - phase * f0[i]) < 1e-7);
    }
}

TEST_CASE("swapping body order leaves far fields unchanged") {
    double k = 1.0;
    Scene a, b;
    a.kind = b.kind = SceneKind::Obstacle;
    a.k = b.k = k;
    a.has_ball = b.has_ball = false;
    auto c1 = ObstacleComponent{kite_boundary(), BoundaryCondition::dirichlet()};
    auto c2 = ObstacleComponent{make_circle({3.0, 0.5}, 0.6), BoundaryCondition::impedance({1, 1})};
    a.obstacles = {c1, c2};
    b.obstacles = {c2, c1};
    auto dirs = direction_grid(16);
    auto fa = far_field(solve(std::make_shared<SystemOperator>(SystemOperator::assemble(a, 80)),
                              IncidentField::plane_wave({1, 0})),
                        dirs);
    auto fb = far_field(solve(std::make_shared<SystemOperator>(SystemOperator::assemble(b, 80)),
                              IncidentField::plane_wave({1, 0})),
                        dirs);
    for (size_t i = 0; i < dirs.size(); ++i) CHECK(std::abs(fa[i] - fb[i]) < 1e-12);
}

TEST_CASE("Sommerfeld decay of the near field") {
    auto scene = single_body_scene(make_circle({0.0, 0.0}, 1.0), BoundaryCondition::dirichlet(), 1.0);
    auto op = std::make_shared<SystemOperator>(SystemOperator::assemble(scene, 64));
    auto sol = solve(op, IncidentField::plane_wave({1, 0}));
    Vec2 xh = unit_dir(1.1);
    double a100 = std::abs(near_field(sol, {100.0 * xh})[0]);
    double a1000 = std::abs(near_field(sol, {1000.0 * xh})[0]);
    CHECK(std::fabs(a100 / a1000 - std::sqrt(10.0)) < 0.05 * std::sqrt(10.0));
}

TEST_CASE("near-field exclusion band and zero density") {
    auto scene = single_body_scene(make_circle({0.0, 0.0}, 1.0), BoundaryCondition::dirichlet(), 1.0);
    auto op = std::make_shared<SystemOperator>(SystemOperator::assemble(scene, 64));
    auto sol = solve(op, IncidentField::plane_wave({1, 0}));
    CHECK_THROWS_AS(near_field(sol, {{1.01, 0.0}}), AccuracyError);
    DensitySolution zero = sol;
    zero.density.setZero();
    CHECK(std::abs(near_field(zero, {{5.0, 0.0}})[0]) == 0.0);
}

TEST_CASE("strict resolution heuristic") {
    auto scene = single_body_scene(make_circle({0.0, 0.0}, 1.0), BoundaryCondition::dirichlet(), 8.0);
    // circumference 2pi, wavelength 2pi/8 -> needs ~80 nodes
    CHECK_THROWS_AS(SystemOperator::assemble(scene, 32, true), NumericalError);
    auto op = SystemOperator::assemble(scene, 32, false);
    CHECK(op.warnings().size() == 1);
}
