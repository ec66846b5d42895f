#include "refscat/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "refscat/errors.hpp"

namespace refscat {

PhaseField unwrap_sign(const CrossField& c, double jump_tol) {
    if (jump_tol < 0.0) throw ArgumentError("unwrap_sign: jump tolerance must be nonnegative");
    PhaseField p;
    p.ni = c.ni;
    p.nj = c.nj;
    p.theta.assign((size_t)c.ni * c.nj, 0.0);
    p.resolved.assign(p.theta.size(), 0);
    p.ambiguous.assign(p.theta.size(), 0);
    p.direction_ok.assign(c.ni, 0);

    // group source indices by edge, ordered along the edge
    std::map<int, std::vector<int>> edges;
    for (int j = 0; j < c.nj; ++j) edges[c.sources[j].edge].push_back(j);
    for (auto& [e, js] : edges)
        std::sort(js.begin(), js.end(),
                  [&](int a, int b) { return c.sources[a].frac < c.sources[b].frac; });
    p.n_edges = (int)edges.size();
    p.edge_residual.assign((size_t)c.ni * p.n_edges, 0.0);

    int resolved_dirs = 0;
    for (int i = 0; i < c.ni; ++i) {
        bool any_chain = false;
        int e_ord = 0;
        for (auto& [e, js] : edges) {
            int unmasked = 0;
            for (int j : js)
                if (c.mask[c.idx(i, j)]) ++unmasked;
            if (unmasked < 2) {
                ++e_ord;
                continue; // chain too short to resolve signs
            }
            double prev = 0.0;
            bool have_prev = false;
            double worst = 0.0;
            for (int j : js) {
                if (!c.mask[c.idx(i, j)]) continue;
                double base = std::acos(std::clamp(c.cosine[c.idx(i, j)], -1.0, 1.0));
                double th;
                if (!have_prev) {
                    th = base; // positive branch anchors the chain
                    have_prev = true;
                } else {
                    double jp = std::fabs(base - prev);
                    double jm = std::fabs(-base - prev);
                    th = (jp <= jm) ? base : -base;
                    double jump = std::min(jp, jm);
                    worst = std::max(worst, jump);
                    if (jump > jump_tol) p.ambiguous[p.idx(i, j)] = 1;
                }
                p.theta[p.idx(i, j)] = th;
                p.resolved[p.idx(i, j)] = 1;
                prev = th;
            }
            p.edge_residual[p.eidx(i, e_ord)] = worst;
            any_chain = true;
            ++e_ord;
        }
        p.direction_ok[i] = any_chain ? 1 : 0;
        if (any_chain) ++resolved_dirs;
    }
    if (resolved_dirs == 0)
        throw NumericalError("unwrap_sign: no direction has a resolvable chain");
    return p;
}

GaugeResult gauge_gap(const std::vector<Cplx>& f1, const std::vector<Cplx>& f2) {
    if (f1.size() != f2.size() || f1.empty())
        throw ArgumentError("gauge_gap: grids must be congruent and nonempty");
    Cplx inner = 0.0;
    for (size_t i = 0; i < f1.size(); ++i) inner += f1[i] * std::conj(f2[i]);
    GaugeResult r;
    r.eta = (std::abs(inner) > 0.0) ? -std::arg(inner) : 0.0;
    // evaluate the misfit at the optimal angle directly; the normed form
    // sqrt(|F1|^2 + |F2|^2 - 2|inner|) loses half the digits to cancellation
    // when the grids are gauge-equivalent
    Cplx rot = std::exp(Cplx{0.0, -r.eta});
    double g2 = 0.0;
    for (size_t i = 0; i < f1.size(); ++i) g2 += std::norm(f1[i] - rot * f2[i]);
    r.gap = std::sqrt(g2);
    return r;
}

double conjugate_gap(const std::vector<Cplx>& f1, const std::vector<Cplx>& f2) {
    std::vector<Cplx> conj2(f2.size());
    for (size_t i = 0; i < f2.size(); ++i) conj2[i] = std::conj(f2[i]);
    return gauge_gap(f1, conj2).gap;
}

} // namespace refscat
