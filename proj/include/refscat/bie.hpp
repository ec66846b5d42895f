#ifndef REFSCAT_BIE_HPP
#define REFSCAT_BIE_HPP

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "refscat/geom.hpp"
#include "refscat/series.hpp"
#include "refscat/types.hpp"

namespace refscat {

// Nystrom discretization of the combined-field equation for exterior
// scattering by disjoint smooth bodies.  Every body is represented through
// the same ansatz u^s = (S + i eta D) phi with coupling eta = k; the boundary
// trace per body supplies the Dirichlet or impedance equation.  Diagonal
// blocks use the Kress log-singularity quadrature, cross-body blocks the
// plain periodic trapezoid; the hypersingular part of the impedance trace is
// regularized through the Maue identity with spectral differentiation.

struct BieBody {
    StarBoundary boundary;
    BoundaryCondition bc;
    BoundarySample sample;
    std::vector<Vec2> nn;  // non-unit outward normal (x2', -x1'), |nn| = jacobian
    std::vector<Vec2> xpp; // x''(t)
    int offset = 0;
};

class SystemOperator {
  public:
    // Obstacle scene; the reference ball joins as a sound-soft body.
    static SystemOperator assemble(const Scene& scene, int nodes_per_body, bool strict = true);

    const std::vector<BieBody>& bodies() const { return bodies_; }
    double k() const { return k_; }
    double eta() const { return eta_; }
    int size() const { return (int)mat_.rows(); }
    const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu() const { return lu_; }
    const Eigen::MatrixXcd& matrix() const { return mat_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    const std::string& fingerprint() const { return fingerprint_; }

  private:
    std::vector<BieBody> bodies_;
    double k_ = 1.0, eta_ = 1.0;
    Eigen::MatrixXcd mat_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    std::vector<std::string> warnings_;
    std::string fingerprint_;
};

struct DensitySolution {
    std::shared_ptr<const SystemOperator> op;
    Eigen::VectorXcd density;
    IncidentField incident;
    double residual = 0.0; // relative residual of the discrete system
};

DensitySolution solve(const std::shared_ptr<const SystemOperator>& op, const IncidentField& inc);
// Right-hand sides combine linearly; used for superposed incidence.
DensitySolution solve_combination(const std::shared_ptr<const SystemOperator>& op,
                                  const std::vector<IncidentField>& incs,
                                  const std::vector<Cplx>& coeffs);

std::vector<Cplx> far_field(const DensitySolution& sol, const std::vector<Vec2>& directions);
std::vector<Cplx> near_field(const DensitySolution& sol, const std::vector<Vec2>& points);

// Diagonal-block boundary operators for one body; exposed for the symbol
// tests on the unit circle.
struct SelfOperators {
    Eigen::MatrixXcd S, K, Kp, T;
};
SelfOperators build_self_operators(const StarBoundary& b, int m, double k);

// Quadrature weights R_j for the ln(4 sin^2((t - t_j)/2)) factor, m nodes.
std::vector<double> kress_log_weights(int m);
// Differentiation matrix of the trigonometric interpolant, m even.
Eigen::MatrixXd trig_diff_matrix(int m);

} // namespace refscat

#endif
