#include "refscat/phaseless.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "refscat/errors.hpp"

namespace refscat {

namespace {

// Uniform in [-1, 1] from the raw engine stream; fixed mapping so that a seed
// pins the dataset bytes on any platform.
double next_xi(std::mt19937_64& rng) {
    return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

} // namespace

double PhaselessDataset::max_triangle_violation() const {
    double worst = 0.0;
    for (int i = 0; i < ni(); ++i) {
        for (int j = 0; j < nj(); ++j) {
            double a = a_mod[i], b = b_mod[idx(i, j)], c = c_mod[idx(i, j)];
            worst = std::max(worst, std::fabs(a - b) - c);
            worst = std::max(worst, c - (a + b));
        }
    }
    return std::max(worst, 0.0);
}

PhaselessDataset synth_dataset(ForwardProvider& fwd, Vec2 d0, const std::vector<Vec2>& directions,
                               const std::vector<SourcePoint>& sources, double delta,
                               std::uint64_t seed) {
    if (delta < 0.0) throw ArgumentError("synth_dataset: noise level must be nonnegative");
    if (!fwd.scene().has_ball)
        throw ValidationError("synth_dataset: scene must include the reference ball");
    if (directions.empty() || sources.empty())
        throw ArgumentError("synth_dataset: need at least one direction and one source");

    PhaselessDataset d;
    d.k = fwd.scene().k;
    d.d0 = d0.normalized();
    d.directions = directions;
    d.sources = sources;
    d.noise = {delta, seed};
    d.scene_fingerprint = fwd.fingerprint();
    d.scene_kind = fwd.scene().kind;
    d.ball = fwd.scene().ball;
    d.ball_n0 = fwd.scene().ball_n0;
    d.polygon = fwd.scene().polygon;

    const int I = (int)directions.size(), J = (int)sources.size();
    auto uinf = fwd.far_field(IncidentField::plane_wave(d.d0), directions);
    std::vector<std::vector<Cplx>> vinf(J);
    for (int j = 0; j < J; ++j)
        vinf[j] = fwd.far_field(IncidentField::point_source(sources[j].z), directions);

    d.a_mod.resize(I);
    d.b_mod.resize((size_t)I * J);
    d.c_mod.resize((size_t)I * J);
    for (int i = 0; i < I; ++i) d.a_mod[i] = std::abs(uinf[i]);
    for (int i = 0; i < I; ++i) {
        for (int j = 0; j < J; ++j) {
            d.b_mod[d.idx(i, j)] = std::abs(vinf[j][i]);
            d.c_mod[d.idx(i, j)] = std::abs(uinf[i] + vinf[j][i]); // superposition via linearity
        }
    }

    if (delta > 0.0) {
        std::mt19937_64 rng(seed);
        for (auto& v : d.a_mod) v *= 1.0 + delta * next_xi(rng);
        for (auto& v : d.b_mod) v *= 1.0 + delta * next_xi(rng);
        for (auto& v : d.c_mod) v *= 1.0 + delta * next_xi(rng);
    }
    return d;
}

CrossField extract_real_cross(const PhaselessDataset& d) {
    CrossField c;
    c.ni = d.ni();
    c.nj = d.nj();
    c.sources = d.sources;
    c.re.resize((size_t)c.ni * c.nj);
    c.mask.assign(c.re.size(), 1);
    c.cosine.assign(c.re.size(), 0.0);
    for (int i = 0; i < c.ni; ++i) {
        for (int j = 0; j < c.nj; ++j) {
            double a = d.a_mod[i], b = d.b_mod[d.idx(i, j)], cc = d.c_mod[d.idx(i, j)];
            c.re[c.idx(i, j)] = 0.5 * (cc * cc - a * a - b * b);
        }
    }
    return c;
}

CrossField extract_cosine(const PhaselessDataset& d, double eps) {
    CrossField c = extract_real_cross(d);
    if (eps <= 0.0) {
        double mx = 0.0;
        for (double v : d.a_mod) mx = std::max(mx, v);
        for (double v : d.b_mod) mx = std::max(mx, v);
        eps = 1e-6 * mx;
    }
    c.mask.assign(c.re.size(), 0);
    for (int i = 0; i < c.ni; ++i) {
        for (int j = 0; j < c.nj; ++j) {
            double a = d.a_mod[i], b = d.b_mod[d.idx(i, j)];
            if (a <= eps || b <= eps) continue;
            double cosv = c.re[c.idx(i, j)] / (a * b);
            if (std::fabs(cosv) > 1.0) {
                c.max_clip = std::max(c.max_clip, std::fabs(cosv) - 1.0);
                cosv = std::copysign(1.0, cosv);
            }
            c.cosine[c.idx(i, j)] = cosv;
            c.mask[c.idx(i, j)] = 1;
        }
    }
    return c;
}

} // namespace refscat
