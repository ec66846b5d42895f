#ifndef REFSCAT_VERIFY_HPP
#define REFSCAT_VERIFY_HPP

#include <string>
#include <utility>
#include <vector>

#include "refscat/provider.hpp"
#include "refscat/types.hpp"

namespace refscat {

// Numerical checks of every identity the uniqueness arguments lean on.
// Tolerances are inputs, fixed before any computation runs.

struct CheckReport {
    std::string name;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string grid_desc;
    std::string note;
    std::vector<std::pair<std::string, Cplx>> fitted;
};

// |u_inf_{D^h}| vs |u_inf_D| and the phase relation
// u_inf_{D^h} = e^{ikh.(d - xhat)} u_inf_D, max over ndirs directions.
CheckReport check_translation_invariance(const Scene& scene, Vec2 h, Vec2 d, int ndirs,
                                         const ForwardOptions& opt, double tol,
                                         bool use_series = false);

// u_inf(xhat, d) = u_inf(-d, -xhat) over a negation-closed grid.
CheckReport check_reciprocity(const Scene& scene, int ndirs, const ForwardOptions& opt,
                              double tol, bool use_series = false);

// 2D: fit the constant c2 in c2 v_inf(xhat, z) = u^s(z, -xhat) over all
// (source, direction) pairs; reports the fit residual and the spread of the
// per-pair constants.  c2 lands in fitted["c2"].
CheckReport check_mixed_reciprocity_2d(const Scene& scene, const std::vector<Vec2>& sources,
                                       int ndirs, const ForwardOptions& opt, double tol,
                                       bool use_series = false);

// 3D sound-soft sphere: max |4 pi v_inf(xhat, z) - u^s(z, -xhat)|.
CheckReport check_mixed_reciprocity_3d(double a, double k, int nsrc, int ndirs, double tol);

// Re int_B e^{i k (n0+1) x.d} dx by Bessel-free quadrature and by closed form;
// positivity must hold whenever R < pi / (2 k (n0 + 1)).
CheckReport check_ball_gauge_integral(double k, double n0, double R, int dimension, double tol);

// Far-field discrepancy between two providers for the same scene.
CheckReport cross_validate(ForwardProvider& ref, ForwardProvider& probe, const IncidentField& inc,
                           int ndirs, double tol, const std::string& name);

// The bundled corpus run behind `verify --suite all`.
std::vector<CheckReport> run_verify_suite(const ForwardOptions& opt);

// checks.csv (one row per check) + checks.json (full detail) under dir.
void write_check_reports(const std::string& dir, const std::vector<CheckReport>& reports);

// Corpus scenes shared by the suite, the CLI demos, and the tests.
Scene corpus_disk_scene(double k, BoundaryCondition bc);
Scene corpus_kite_scene(double k, bool with_ball);
Scene corpus_medium_scene(double k);
StarBoundary corpus_kite(Vec2 center = {0.0, 0.0});

} // namespace refscat

#endif
