#ifndef REFSCAT_PHASELESS_HPP
#define REFSCAT_PHASELESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "refscat/geom.hpp"
#include "refscat/provider.hpp"
#include "refscat/types.hpp"

namespace refscat {

struct NoiseDescriptor {
    double delta = 0.0;
    std::uint64_t seed = 0;
};

// The modulus-only data triple: |u_inf(xhat_i, d0)|, |v_inf(xhat_i, z_j)| and
// |u_inf + v_inf| for the superposed incidence, plus acquisition metadata.
struct PhaselessDataset {
    double k = 1.0;
    Vec2 d0{1.0, 0.0};
    std::vector<Vec2> directions;     // I
    std::vector<SourcePoint> sources; // J
    std::vector<double> a_mod;        // I
    std::vector<double> b_mod;        // I x J, row-major in i
    std::vector<double> c_mod;        // I x J
    NoiseDescriptor noise;
    std::string scene_fingerprint;
    SceneKind scene_kind = SceneKind::Obstacle;
    ReferenceBall ball; // the known calibration body
    double ball_n0 = 2.0;
    SourcePolygon polygon;

    int ni() const { return (int)directions.size(); }
    int nj() const { return (int)sources.size(); }
    size_t idx(int i, int j) const { return (size_t)i * sources.size() + j; }

    // Largest violation of |A - B| <= C <= A + B (0 for clean data).
    double max_triangle_violation() const;
};

// Real cross term and masked phase cosine extracted from the moduli.
struct CrossField {
    int ni = 0, nj = 0;
    std::vector<double> re;        // I x J: Re{u_inf conj(v_inf)}
    std::vector<double> cosine;    // I x J, valid where mask != 0
    std::vector<std::uint8_t> mask;
    double max_clip = 0.0;         // largest |cos| excess over 1 before clipping
    std::vector<SourcePoint> sources; // copied layout for the unwrapping stage

    size_t idx(int i, int j) const { return (size_t)i * nj + j; }
};

PhaselessDataset synth_dataset(ForwardProvider& fwd, Vec2 d0, const std::vector<Vec2>& directions,
                               const std::vector<SourcePoint>& sources, double delta,
                               std::uint64_t seed);

CrossField extract_real_cross(const PhaselessDataset& d);
// eps <= 0 selects the scale-free default 1e-6 * max modulus.
CrossField extract_cosine(const PhaselessDataset& d, double eps = -1.0);

} // namespace refscat

#endif
