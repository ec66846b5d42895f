#ifndef REFSCAT_RETRIEVAL_HPP
#define REFSCAT_RETRIEVAL_HPP

#include <vector>

#include "refscat/phaseless.hpp"
#include "refscat/types.hpp"

namespace refscat {

// Computable pieces of the phase-branch analysis: candidate relative phases
// theta_ij = +-arccos(cos theta_ij) chained along each polygon edge, and the
// gauge / conjugate-branch gaps between far-field grids.

struct PhaseField {
    int ni = 0, nj = 0;
    std::vector<double> theta;           // I x J, meaningful where resolved
    std::vector<std::uint8_t> resolved;  // entry carries a usable phase
    std::vector<std::uint8_t> ambiguous; // both sign choices exceeded the jump tolerance
    std::vector<double> edge_residual;   // per (direction, edge): max accepted jump
    std::vector<std::uint8_t> direction_ok; // >= one edge chain resolved for this direction
    int n_edges = 0;

    size_t idx(int i, int j) const { return (size_t)i * nj + j; }
    size_t eidx(int i, int e) const { return (size_t)i * n_edges + e; }
};

PhaseField unwrap_sign(const CrossField& c, double jump_tol);

struct GaugeResult {
    double gap = 0.0;
    double eta = 0.0; // best angle, F2 ~ e^{i eta} F1
};

// min over eta of ||F1 - e^{-i eta} F2||, attained at eta = -arg<F1, F2>;
// equals sqrt(||F1||^2 + ||F2||^2 - 2 |<F1, F2>|) but is evaluated at the
// optimal angle for full precision on gauge-equivalent grids.
GaugeResult gauge_gap(const std::vector<Cplx>& f1, const std::vector<Cplx>& f2);

// gauge gap against the conjugated grid; strictly positive when no unimodular
// factor maps conj(F2) onto F1.
double conjugate_gap(const std::vector<Cplx>& f1, const std::vector<Cplx>& f2);

} // namespace refscat

#endif
