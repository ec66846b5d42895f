#ifndef REFSCAT_PROVIDER_HPP
#define REFSCAT_PROVIDER_HPP

#include <memory>
#include <vector>

#include "refscat/geom.hpp"
#include "refscat/medium.hpp"
#include "refscat/types.hpp"

namespace refscat {

struct ForwardOptions {
    int nodes_per_body = 64;
    bool strict = true;
    int medium_resolution = 64;
    LsOptions ls;
    int series_order = 0; // 0 = default truncation
};

// Uniform front end over the forward solvers: complex far fields and
// scattered near fields for one fixed scene, any incident field.
class ForwardProvider {
  public:
    virtual ~ForwardProvider() = default;
    virtual std::vector<Cplx> far_field(const IncidentField& inc,
                                        const std::vector<Vec2>& directions) = 0;
    virtual std::vector<Cplx> scattered_field(const IncidentField& inc,
                                              const std::vector<Vec2>& points) = 0;
    virtual const Scene& scene() const = 0;
    virtual const std::string& fingerprint() const = 0;
};

// BIE-backed (obstacle scenes) or Lippmann-Schwinger-backed (medium scenes).
std::unique_ptr<ForwardProvider> make_provider(const Scene& s, const ForwardOptions& opt = {});

// Modal solver for single-disk scenes (one circular component, no ball, or a
// single penetrable disk); cross-validation reference.
std::unique_ptr<ForwardProvider> make_series_provider(const Scene& s, int order = 0);

} // namespace refscat

#endif
