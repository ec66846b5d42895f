#ifndef REFSCAT_MEDIUM_HPP
#define REFSCAT_MEDIUM_HPP

#include <vector>

#include "refscat/geom.hpp"
#include "refscat/types.hpp"

namespace refscat {

// Uniform Cartesian rasterization of the contrast m(x) = n(x) - 1 over a
// bounding box of D u B; m = 0 outside the scatterers.
struct ContrastGrid {
    double k = 1.0;
    Vec2 origin{0.0, 0.0}; // lower-left corner of the box
    double h = 0.1;        // cell size
    int nx = 0, ny = 0;
    std::vector<Cplx> m; // row-major: index = iy * nx + ix

    Vec2 cell_center(int ix, int iy) const {
        return {origin.x + (ix + 0.5) * h, origin.y + (iy + 0.5) * h};
    }
    size_t idx(int ix, int iy) const { return (size_t)iy * nx + ix; }
};

struct LsOptions {
    double rtol = 1e-8;
    int max_iter = 2000;
    int restart = 50;
};

struct LsSolution {
    std::vector<Cplx> total; // total field u on the grid
    IncidentField incident;
    double residual = 0.0;
    int iterations = 0;
};

// resolution = cell count along the longer box side.
ContrastGrid assemble_ls(const Scene& scene, int resolution);

LsSolution solve_ls(const ContrastGrid& grid, const IncidentField& inc, const LsOptions& opt = {});

std::vector<Cplx> medium_far_field(const ContrastGrid& grid, const LsSolution& sol,
                                   const std::vector<Vec2>& directions);
// Scattered field at exterior points (away from the support of m).
std::vector<Cplx> medium_scattered_field(const ContrastGrid& grid, const LsSolution& sol,
                                         const std::vector<Vec2>& points);

// One application of the volume potential: k^2 int G(x,y) m(y) f(y) dy on the
// grid; exposed for the Born-approximation checks.
std::vector<Cplx> apply_volume_potential(const ContrastGrid& grid, const std::vector<Cplx>& f);

} // namespace refscat

#endif
