#include "refscat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "refscat/dataset_io.hpp"
#include "refscat/errors.hpp"
#include "refscat/series.hpp"
#include "refscat/specfun.hpp"

namespace refscat {

namespace {

Scene translate_scene(const Scene& s, Vec2 h) {
    Scene out = s;
    for (auto& c : out.obstacles) c.boundary = translate(c.boundary, h);
    for (auto& c : out.media) c.region = translate(c.region, h);
    out.ball.center = out.ball.center + h;
    for (auto& v : out.polygon.vertices) v = v + h;
    return out;
}

std::unique_ptr<ForwardProvider> provider_for(const Scene& s, const ForwardOptions& opt,
                                              bool use_series) {
    return use_series ? make_series_provider(s) : make_provider(s, opt);
}

} // namespace

StarBoundary corpus_kite(Vec2 center) {
    StarBoundary b;
    b.center = center;
    b.a0 = 1.0;
    b.ac = {0.0, 0.25};
    b.bs = {0.0, 0.0, 0.1};
    return b;
}

Scene corpus_disk_scene(double k, BoundaryCondition bc) {
    Scene s;
    s.kind = SceneKind::Obstacle;
    s.k = k;
    s.obstacles.push_back({make_circle({0.0, 0.0}, 1.0), bc});
    s.has_ball = false;
    return s;
}

Scene corpus_kite_scene(double k, bool with_ball) {
    Scene s;
    s.kind = SceneKind::Obstacle;
    s.k = k;
    s.obstacles.push_back({corpus_kite(), BoundaryCondition::dirichlet()});
    s.has_ball = with_ball;
    if (with_ball) {
        s.ball.center = {-2.8, 0.0};
        s.ball.radius = 0.4;
    }
    s.polygon.vertices = {{2.4, -0.7}, {3.8, -0.7}, {3.8, 0.7}, {2.4, 0.7}};
    return s;
}

Scene corpus_medium_scene(double k) {
    Scene s;
    s.kind = SceneKind::Medium;
    s.k = k;
    s.media.push_back({make_circle({0.0, 0.0}, 0.5), Cplx{1.5, 0.0}});
    s.ball.center = {2.2, 0.0};
    s.ball.radius = 0.45;
    s.ball_n0 = 2.0;
    s.polygon.vertices = {{0.6, 2.2}, {1.8, 2.2}, {1.8, 3.4}, {0.6, 3.4}};
    return s;
}

CheckReport check_translation_invariance(const Scene& scene, Vec2 h, Vec2 d, int ndirs,
                                         const ForwardOptions& opt, double tol, bool use_series) {
    CheckReport rep;
    rep.name = "translation_invariance";
    rep.tolerance = tol;
    std::ostringstream gd;
    gd << ndirs << " dirs, h = (" << h.x << ", " << h.y << ")";
    rep.grid_desc = gd.str();

    auto dirs = direction_grid(ndirs);
    auto base = provider_for(scene, opt, use_series);
    auto shifted = provider_for(translate_scene(scene, h), opt, use_series);
    auto f0 = base->far_field(IncidentField::plane_wave(d), dirs);
    auto fh = shifted->far_field(IncidentField::plane_wave(d), dirs);

    double mod_err = 0.0, phase_err = 0.0, scale = 0.0;
    for (int q = 0; q < ndirs; ++q) {
        scale = std::max(scale, std::abs(f0[q]));
        mod_err = std::max(mod_err, std::fabs(std::abs(fh[q]) - std::abs(f0[q])));
        Cplx factor = std::exp(iu * scene.k * h.dot(d - dirs[q]));
        phase_err = std::max(phase_err, std::abs(fh[q] - factor * f0[q]));
    }
    rep.max_abs_err = std::max(mod_err, phase_err);
    rep.max_rel_err = rep.max_abs_err / scale;
    rep.note = "modulus err " + fmt17(mod_err) + ", phase-relation err " + fmt17(phase_err);
    rep.pass = rep.max_abs_err <= tol;
    return rep;
}

CheckReport check_reciprocity(const Scene& scene, int ndirs, const ForwardOptions& opt,
                              double tol, bool use_series) {
    if (ndirs % 2) throw ArgumentError("check_reciprocity: grid must be negation-closed");
    CheckReport rep;
    rep.name = "reciprocity";
    rep.tolerance = tol;
    rep.grid_desc = std::to_string(ndirs) + " incident x observation directions";

    auto dirs = direction_grid(ndirs);
    auto fwd = provider_for(scene, opt, use_series);
    std::vector<std::vector<Cplx>> f(ndirs);
    for (int p = 0; p < ndirs; ++p)
        f[p] = fwd->far_field(IncidentField::plane_wave(dirs[p]), dirs);

    double err = 0.0, scale = 0.0;
    const int half = ndirs / 2;
    for (int p = 0; p < ndirs; ++p) {
        for (int q = 0; q < ndirs; ++q) {
            scale = std::max(scale, std::abs(f[p][q]));
            // u_inf(xhat_q, d_p) vs u_inf(-d_p, -xhat_q)
            err = std::max(err,
                           std::abs(f[p][q] - f[(q + half) % ndirs][(p + half) % ndirs]));
        }
    }
    rep.max_abs_err = err;
    rep.max_rel_err = err / scale;
    rep.pass = err <= tol;
    return rep;
}

CheckReport check_mixed_reciprocity_2d(const Scene& scene, const std::vector<Vec2>& sources,
                                       int ndirs, const ForwardOptions& opt, double tol,
                                       bool use_series) {
    CheckReport rep;
    rep.name = "mixed_reciprocity_2d";
    rep.tolerance = tol;
    rep.grid_desc = std::to_string(sources.size()) + " sources x " + std::to_string(ndirs) +
                    " directions";
    auto dirs = direction_grid(ndirs);
    auto fwd = provider_for(scene, opt, use_series);

    const int J = (int)sources.size();
    std::vector<std::vector<Cplx>> vinf(J);
    for (int j = 0; j < J; ++j)
        vinf[j] = fwd->far_field(IncidentField::point_source(sources[j]), dirs);
    std::vector<std::vector<Cplx>> us(ndirs); // us[q][j] = u^s(z_j, -xhat_q)
    for (int q = 0; q < ndirs; ++q)
        us[q] = fwd->scattered_field(IncidentField::plane_wave(-dirs[q]), sources);

    Cplx num = 0.0;
    double den = 0.0;
    for (int j = 0; j < J; ++j) {
        for (int q = 0; q < ndirs; ++q) {
            num += std::conj(vinf[j][q]) * us[q][j];
            den += std::norm(vinf[j][q]);
        }
    }
    Cplx c2 = num / den;

    double res2 = 0.0, uscale2 = 0.0, spread = 0.0;
    for (int j = 0; j < J; ++j) {
        for (int q = 0; q < ndirs; ++q) {
            res2 += std::norm(c2 * vinf[j][q] - us[q][j]);
            uscale2 += std::norm(us[q][j]);
            if (std::abs(vinf[j][q]) > 1e-8)
                spread = std::max(spread, std::abs(us[q][j] / vinf[j][q] - c2) / std::abs(c2));
        }
    }
    rep.fitted.push_back({"c2", c2});
    rep.max_abs_err = std::sqrt(res2);
    rep.max_rel_err = std::sqrt(res2 / uscale2);
    rep.note = "per-pair constant spread " + fmt17(spread);
    rep.pass = rep.max_rel_err <= tol;
    return rep;
}

CheckReport check_mixed_reciprocity_3d(double a, double k, int nsrc, int ndirs, double tol) {
    CheckReport rep;
    rep.name = "mixed_reciprocity_3d";
    rep.tolerance = tol;
    rep.grid_desc = std::to_string(nsrc) + " sources x " + std::to_string(ndirs) + " directions";

    auto fib_points = [](int n, double radius, double offset) {
        std::vector<Vec3> pts(n);
        for (int i = 0; i < n; ++i) {
            double z = -1.0 + 2.0 * (i + 0.5) / n;
            double r = std::sqrt(1.0 - z * z);
            double phi = 2.0 * pi * i * 0.6180339887498949 + offset;
            pts[i] = Vec3{r * std::cos(phi), r * std::sin(phi), z} * radius;
        }
        return pts;
    };
    auto sources = fib_points(nsrc, 3.0 * a, 0.0);
    auto dirs = fib_points(ndirs, 1.0, 0.35);

    const int N = 55;
    double err = 0.0;
    for (auto& z : sources) {
        auto ps = solve_sphere(a, {0, 0, 0}, IncidentField3::point_source(z), k, N);
        auto vinf = eval_far(ps, dirs);
        for (int q = 0; q < ndirs; ++q) {
            auto pw = solve_sphere(a, {0, 0, 0}, IncidentField3::plane_wave(-dirs[q]), k, N);
            auto usz = eval_near(pw, {z});
            err = std::max(err, std::abs(4.0 * pi * vinf[q] - usz[0]));
        }
    }
    rep.max_abs_err = err;
    rep.max_rel_err = err;
    rep.pass = err <= tol;
    return rep;
}

CheckReport check_ball_gauge_integral(double k, double n0, double R, int dimension, double tol) {
    if (R <= 0.0) throw ArgumentError("check_ball_gauge_integral: R must be positive");
    CheckReport rep;
    rep.name = dimension == 3 ? "ball_gauge_integral_3d" : "ball_gauge_integral_2d";
    rep.tolerance = tol;
    const double kappa = k * (n0 + 1.0);
    std::ostringstream gd;
    gd << "k = " << k << ", n0 = " << n0 << ", R = " << R << ", kappa R = " << kappa * R;
    rep.grid_desc = gd.str();

    // Bessel-free quadrature of Re int_B e^{i kappa x.d} dx (Simpson in every
    // variable; trigonometric integrands only)
    auto simpson = [](auto f, double lo, double hi, int n) {
        double h = (hi - lo) / n, acc = f(lo) + f(hi);
        for (int i = 1; i < n; ++i) acc += f(lo + i * h) * ((i % 2) ? 4.0 : 2.0);
        return acc * h / 3.0;
    };
    double quad, closed;
    if (dimension == 2) {
        auto ring = [&](double rho) {
            auto g = [&](double th) { return std::cos(kappa * rho * std::cos(th)); };
            return rho * simpson(g, 0.0, 2.0 * pi, 2048);
        };
        quad = simpson(ring, 0.0, R, 4096);
        closed = (kappa == 0.0) ? pi * R * R : 2.0 * pi * R * cyl_bessel_j(1, kappa * R) / kappa;
    } else {
        auto shell = [&](double rho) {
            auto g = [&](double t) { return std::cos(kappa * rho * t); };
            return rho * rho * simpson(g, -1.0, 1.0, 2048);
        };
        quad = 2.0 * pi * simpson(shell, 0.0, R, 4096);
        double x = kappa * R;
        if (x < 1e-3) {
            // sin x - x cos x = x^3/3 - x^5/30 + ...; avoids cancellation
            closed = 4.0 * pi * R * R * R * (1.0 / 3.0 - x * x / 30.0 + x * x * x * x / 840.0);
        } else {
            closed = 4.0 * pi * (std::sin(x) - x * std::cos(x)) / (kappa * kappa * kappa);
        }
    }
    rep.fitted.push_back({"integral", Cplx{closed, 0.0}});
    rep.max_abs_err = std::fabs(quad - closed);
    rep.max_rel_err = rep.max_abs_err / std::max(std::fabs(closed), 1e-300);
    const bool rule = R < pi / (2.0 * k * (n0 + 1.0));
    const bool positive = closed > 0.0 && quad > 0.0;
    rep.note = std::string("radius rule ") + (rule ? "satisfied" : "violated") + ", integral " +
               (positive ? "positive" : "not positive");
    // the rule is sufficient for positivity; nothing is claimed outside it
    rep.pass = rep.max_rel_err <= tol && (!rule || positive);
    return rep;
}

CheckReport cross_validate(ForwardProvider& ref, ForwardProvider& probe, const IncidentField& inc,
                           int ndirs, double tol, const std::string& name) {
    if (ref.fingerprint() != probe.fingerprint())
        throw ArgumentError("cross_validate: providers describe different scenes");
    CheckReport rep;
    rep.name = name;
    rep.tolerance = tol;
    rep.grid_desc = std::to_string(ndirs) + " directions";
    auto dirs = direction_grid(ndirs);
    auto a = ref.far_field(inc, dirs);
    auto b = probe.far_field(inc, dirs);
    double scale = 0.0, err = 0.0;
    for (int q = 0; q < ndirs; ++q) {
        scale = std::max(scale, std::abs(a[q]));
        err = std::max(err, std::abs(a[q] - b[q]));
    }
    rep.max_abs_err = err;
    rep.max_rel_err = err / scale;
    rep.pass = rep.max_rel_err <= tol;
    return rep;
}

std::vector<CheckReport> run_verify_suite(const ForwardOptions& opt) {
    std::vector<CheckReport> out;

    // translation invariance: series disk and BIE kite, both shifts
    for (Vec2 h : {Vec2{1.0, 0.0}, Vec2{0.5, 0.25}}) {
        auto r1 = check_translation_invariance(corpus_disk_scene(1.0, BoundaryCondition::dirichlet()),
                                               h, {1.0, 0.0}, 64, opt, 1e-7, true);
        r1.name += "_series_disk";
        out.push_back(r1);
        ForwardOptions kite_opt = opt;
        kite_opt.nodes_per_body = std::max(opt.nodes_per_body, 96);
        auto r2 = check_translation_invariance(corpus_kite_scene(1.0, false), h, {1.0, 0.0}, 64,
                                               kite_opt, 1e-7);
        r2.name += "_bie_kite";
        out.push_back(r2);
    }

    // mixed reciprocity
    out.push_back(check_mixed_reciprocity_3d(1.0, 1.0, 8, 8, 1e-9));
    std::vector<Vec2> disk_sources = {{3.0, 0.4}, {-2.6, 1.0}, {0.5, 3.1}, {2.2, -2.0}};
    auto d2 = check_mixed_reciprocity_2d(corpus_disk_scene(1.0, BoundaryCondition::dirichlet()),
                                         disk_sources, 8, opt, 1e-8, true);
    d2.name += "_series_disk";
    out.push_back(d2);
    ForwardOptions kite_opt = opt;
    kite_opt.nodes_per_body = std::max(opt.nodes_per_body, 128);
    std::vector<Vec2> kite_sources = {{3.2, 0.4}, {-3.0, 1.0}, {0.5, 3.3}, {2.4, -2.4}};
    auto k2 = check_mixed_reciprocity_2d(corpus_kite_scene(1.0, false), kite_sources, 8, kite_opt,
                                         1e-6);
    k2.name += "_bie_kite";
    // constancy across scatterers: the kite constant must match the disk fit
    Cplx c2_disk = d2.fitted[0].second, c2_kite = k2.fitted[0].second;
    double transfer = std::abs(c2_kite - c2_disk) / std::abs(c2_disk);
    k2.note += ", transfer vs disk " + fmt17(transfer);
    k2.pass = k2.pass && transfer <= 1e-6;
    out.push_back(k2);

    // reciprocity
    auto rs = check_reciprocity(corpus_disk_scene(1.0, BoundaryCondition::dirichlet()), 16, opt,
                                1e-12, true);
    rs.name += "_series_disk";
    out.push_back(rs);
    auto rb = check_reciprocity(corpus_kite_scene(1.0, false), 16, kite_opt, 1e-8);
    rb.name += "_bie_kite";
    out.push_back(rb);

    // solver cross-validation at ka in {1, 5}
    for (double k : {1.0, 5.0}) {
        ForwardOptions cv = opt;
        cv.nodes_per_body = 64;
        for (auto [bc, label] :
             {std::pair{BoundaryCondition::dirichlet(), std::string("dirichlet")},
              std::pair{BoundaryCondition::neumann(), std::string("neumann")},
              std::pair{BoundaryCondition::impedance({1.0, 0.5}), std::string("impedance")}}) {
            Scene s = corpus_disk_scene(k, bc);
            auto ref = make_series_provider(s);
            auto probe = make_provider(s, cv);
            out.push_back(cross_validate(*ref, *probe, IncidentField::plane_wave({1.0, 0.0}), 16,
                                         1e-6,
                                         "cross_validate_" + label + "_ka" +
                                             std::to_string((int)k)));
        }
    }
    {
        Scene s;
        s.kind = SceneKind::Medium;
        s.k = 1.0;
        s.media.push_back({make_circle({0.0, 0.0}, 0.5), Cplx{4.0, 0.0}});
        s.has_ball = false;
        auto ref = make_series_provider(s);
        ForwardOptions mv = opt;
        mv.medium_resolution = 128;
        auto probe = make_provider(s, mv);
        out.push_back(cross_validate(*ref, *probe, IncidentField::plane_wave({1.0, 0.0}), 16, 1e-3,
                                     "cross_validate_medium_ls"));
    }

    // ball gauge integral: inside the regime, the violation case, both dims
    out.push_back(check_ball_gauge_integral(1.0, 2.0, 0.5, 2, 1e-10));
    out.push_back(check_ball_gauge_integral(1.0, 2.0, 0.5, 3, 1e-10));
    out.push_back(check_ball_gauge_integral(1.0, 2.0, 0.5 * pi, 2, 1e-10)); // kappa R = 3 pi / 2
    out.push_back(check_ball_gauge_integral(1.0, 2.0, 0.5 * pi, 3, 1e-10));
    return out;
}

void write_check_reports(const std::string& dir, const std::vector<CheckReport>& reports) {
    std::ostringstream csv;
    csv << "name,max_abs_err,max_rel_err,tolerance,pass\n";
    nlohmann::json detail = nlohmann::json::array();
    for (auto& r : reports) {
        csv << r.name << ',' << fmt17(r.max_abs_err) << ',' << fmt17(r.max_rel_err) << ','
            << fmt17(r.tolerance) << ',' << (r.pass ? 1 : 0) << '\n';
        nlohmann::json j;
        j["name"] = r.name;
        j["max_abs_err"] = r.max_abs_err;
        j["max_rel_err"] = r.max_rel_err;
        j["tolerance"] = r.tolerance;
        j["pass"] = r.pass;
        j["grid"] = r.grid_desc;
        if (!r.note.empty()) j["note"] = r.note;
        for (auto& [name, val] : r.fitted) j["fitted"][name] = {val.real(), val.imag()};
        detail.push_back(j);
    }
    write_text_atomic(dir + "/checks.csv", csv.str());
    write_text_atomic(dir + "/checks.json", detail.dump(2) + "\n");
}

} // namespace refscat
