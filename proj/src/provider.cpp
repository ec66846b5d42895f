#include "refscat/provider.hpp"

#include <map>

#include "refscat/bie.hpp"
#include "refscat/errors.hpp"
#include "refscat/scene_io.hpp"
#include "refscat/series.hpp"

namespace refscat {

namespace {

class BieProvider final : public ForwardProvider {
  public:
    BieProvider(const Scene& s, const ForwardOptions& opt)
        : scene_(s),
          op_(std::make_shared<SystemOperator>(
              SystemOperator::assemble(s, opt.nodes_per_body, opt.strict))),
          fingerprint_(op_->fingerprint()) {}

    std::vector<Cplx> far_field(const IncidentField& inc,
                                const std::vector<Vec2>& dirs) override {
        return refscat::far_field(solve(op_, inc), dirs);
    }
    std::vector<Cplx> scattered_field(const IncidentField& inc,
                                      const std::vector<Vec2>& pts) override {
        return refscat::near_field(solve(op_, inc), pts);
    }
    const Scene& scene() const override { return scene_; }
    const std::string& fingerprint() const override { return fingerprint_; }

  private:
    Scene scene_;
    std::shared_ptr<const SystemOperator> op_;
    std::string fingerprint_;
};

class MediumProvider final : public ForwardProvider {
  public:
    MediumProvider(const Scene& s, const ForwardOptions& opt)
        : scene_(s),
          grid_(assemble_ls(s, opt.medium_resolution)),
          ls_(opt.ls),
          fingerprint_(scene_fingerprint(s)) {}

    std::vector<Cplx> far_field(const IncidentField& inc,
                                const std::vector<Vec2>& dirs) override {
        return medium_far_field(grid_, solved(inc), dirs);
    }
    std::vector<Cplx> scattered_field(const IncidentField& inc,
                                      const std::vector<Vec2>& pts) override {
        return medium_scattered_field(grid_, solved(inc), pts);
    }
    const Scene& scene() const override { return scene_; }
    const std::string& fingerprint() const override { return fingerprint_; }

  private:
    const LsSolution& solved(const IncidentField& inc) {
        auto key = std::make_tuple((int)inc.kind, inc.direction.x, inc.direction.y,
                                   inc.location.x, inc.location.y);
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, solve_ls(grid_, inc, ls_)).first;
        return it->second;
    }

    Scene scene_;
    ContrastGrid grid_;
    LsOptions ls_;
    std::string fingerprint_;
    std::map<std::tuple<int, double, double, double, double>, LsSolution> cache_;
};

class SeriesProvider final : public ForwardProvider {
  public:
    SeriesProvider(const Scene& s, int order) : scene_(s), fingerprint_(scene_fingerprint(s)) {
        if (s.has_ball)
            throw ArgumentError("series provider: single-body scenes only (no ball)");
        if (s.kind == SceneKind::Obstacle) {
            if (s.obstacles.size() != 1 || s.obstacles[0].boundary.order() != 0)
                throw ArgumentError("series provider: exactly one circular component required");
            a_ = s.obstacles[0].boundary.a0;
            center_ = s.obstacles[0].boundary.center;
            bc_ = s.obstacles[0].bc;
            penetrable_ = false;
        } else {
            if (s.media.size() != 1 || s.media[0].region.order() != 0)
                throw ArgumentError("series provider: exactly one circular region required");
            if (s.media[0].index.imag() != 0.0)
                throw ArgumentError("series provider: real interior index required");
            a_ = s.media[0].region.a0;
            center_ = s.media[0].region.center;
            index_ = s.media[0].index.real();
            penetrable_ = true;
        }
        order_ = order > 0 ? order : default_truncation(s.k * a_) + 20;
    }

    std::vector<Cplx> far_field(const IncidentField& inc,
                                const std::vector<Vec2>& dirs) override {
        return eval_far(solve(inc), dirs);
    }
    std::vector<Cplx> scattered_field(const IncidentField& inc,
                                      const std::vector<Vec2>& pts) override {
        return eval_near(solve(inc), pts);
    }
    const Scene& scene() const override { return scene_; }
    const std::string& fingerprint() const override { return fingerprint_; }

  private:
    DiskSeries solve(const IncidentField& inc) const {
        if (penetrable_)
            return solve_penetrable_disk(a_, center_, index_, inc, scene_.k, order_);
        return solve_disk(a_, center_, bc_, inc, scene_.k, order_);
    }

    Scene scene_;
    std::string fingerprint_;
    Vec2 center_;
    double a_ = 1.0, index_ = 1.0;
    BoundaryCondition bc_;
    bool penetrable_ = false;
    int order_ = 0;
};

} // namespace

std::unique_ptr<ForwardProvider> make_provider(const Scene& s, const ForwardOptions& opt) {
    if (s.kind == SceneKind::Obstacle) return std::make_unique<BieProvider>(s, opt);
    return std::make_unique<MediumProvider>(s, opt);
}

std::unique_ptr<ForwardProvider> make_series_provider(const Scene& s, int order) {
    return std::make_unique<SeriesProvider>(s, order);
}

} // namespace refscat
