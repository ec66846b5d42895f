#include "refscat/scene_io.hpp"

#include <set>

#include "refscat/errors.hpp"

namespace refscat {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::set<std::string>& required, const std::string& path) {
    if (!j.is_object()) throw ValidationError(path + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ValidationError(path + ": unknown key '" + it.key() + "'");
    }
    for (auto& k : required) {
        if (!j.count(k)) throw ValidationError(path + ": missing key '" + k + "'");
    }
}

double get_num(const json& j, const std::string& key, const std::string& path) {
    if (!j.at(key).is_number()) throw ValidationError(path + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

Vec2 get_vec2(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError(path + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Cplx get_cplx(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ValidationError(path + ": expected a number or [re, im]");
}

json vec2_json(Vec2 v) { return json::array({v.x, v.y}); }
json cplx_json(Cplx c) { return json::array({c.real(), c.imag()}); }

json boundary_to_json(const StarBoundary& b) {
    json j;
    j["center"] = vec2_json(b.center);
    j["a0"] = b.a0;
    if (!b.ac.empty()) j["a"] = b.ac;
    if (!b.bs.empty()) j["b"] = b.bs;
    return j;
}

StarBoundary boundary_from_json(const json& j, const std::string& path) {
    require_keys(j, {"center", "a0", "a", "b"}, {"center", "a0"}, path);
    StarBoundary b;
    b.center = get_vec2(j.at("center"), path + ".center");
    b.a0 = get_num(j, "a0", path);
    if (j.count("a")) b.ac = j.at("a").get<std::vector<double>>();
    if (j.count("b")) b.bs = j.at("b").get<std::vector<double>>();
    return b;
}

} // namespace

json scene_to_json(const Scene& s) {
    json j;
    j["kind"] = (s.kind == SceneKind::Obstacle) ? "obstacle" : "medium";
    j["k"] = s.k;
    j["d0"] = vec2_json(s.d0);
    json comps = json::array();
    if (s.kind == SceneKind::Obstacle) {
        for (auto& c : s.obstacles) {
            json jc;
            jc["boundary"] = boundary_to_json(c.boundary);
            if (c.bc.kind == BcKind::Dirichlet) {
                jc["bc"] = {{"type", "dirichlet"}};
            } else {
                jc["bc"] = {{"type", "impedance"}, {"lambda", cplx_json(c.bc.lambda)}};
            }
            comps.push_back(jc);
        }
    } else {
        for (auto& c : s.media) {
            json jc;
            jc["boundary"] = boundary_to_json(c.region);
            jc["index"] = cplx_json(c.index);
            comps.push_back(jc);
        }
    }
    j["components"] = comps;
    if (s.has_ball) {
        json jb;
        jb["center"] = vec2_json(s.ball.center);
        jb["radius"] = s.ball.radius;
        if (s.kind == SceneKind::Medium) jb["n0"] = s.ball_n0;
        j["ball"] = jb;
    }
    if (!s.polygon.vertices.empty()) {
        json verts = json::array();
        for (auto v : s.polygon.vertices) verts.push_back(vec2_json(v));
        j["polygon"] = {{"vertices", verts}};
    }
    return j;
}

Scene scene_from_json(const json& j) {
    require_keys(j, {"kind", "k", "d0", "components", "ball", "polygon"},
                 {"kind", "k", "components"}, "scene");
    Scene s;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "obstacle") s.kind = SceneKind::Obstacle;
    else if (kind == "medium") s.kind = SceneKind::Medium;
    else throw ValidationError("scene.kind: expected 'obstacle' or 'medium'");
    s.k = get_num(j, "k", "scene");
    if (j.count("d0")) s.d0 = get_vec2(j.at("d0"), "scene.d0").normalized();

    int idx = 0;
    for (auto& jc : j.at("components")) {
        std::string path = "scene.components[" + std::to_string(idx++) + "]";
        if (s.kind == SceneKind::Obstacle) {
            require_keys(jc, {"boundary", "bc"}, {"boundary"}, path);
            ObstacleComponent c;
            c.boundary = boundary_from_json(jc.at("boundary"), path + ".boundary");
            if (jc.count("bc")) {
                const json& jb = jc.at("bc");
                require_keys(jb, {"type", "lambda"}, {"type"}, path + ".bc");
                std::string t = jb.at("type").get<std::string>();
                if (t == "dirichlet") c.bc = BoundaryCondition::dirichlet();
                else if (t == "neumann") c.bc = BoundaryCondition::neumann();
                else if (t == "impedance")
                    c.bc = BoundaryCondition::impedance(
                        jb.count("lambda") ? get_cplx(jb.at("lambda"), path + ".bc.lambda")
                                           : Cplx{0.0, 0.0});
                else throw ValidationError(path + ".bc.type: unknown type '" + t + "'");
            }
            s.obstacles.push_back(c);
        } else {
            require_keys(jc, {"boundary", "index"}, {"boundary", "index"}, path);
            MediumComponent c;
            c.region = boundary_from_json(jc.at("boundary"), path + ".boundary");
            c.index = get_cplx(jc.at("index"), path + ".index");
            s.media.push_back(c);
        }
    }

    s.has_ball = j.count("ball") > 0;
    if (s.has_ball) {
        const json& jb = j.at("ball");
        require_keys(jb, {"center", "radius", "n0"}, {"center", "radius"}, "scene.ball");
        s.ball.center = get_vec2(jb.at("center"), "scene.ball.center");
        s.ball.radius = get_num(jb, "radius", "scene.ball");
        if (jb.count("n0")) {
            if (s.kind == SceneKind::Obstacle)
                throw ValidationError("scene.ball: n0 is only meaningful for medium scenes");
            s.ball_n0 = get_num(jb, "n0", "scene.ball");
        }
    }

    if (j.count("polygon")) {
        const json& jp = j.at("polygon");
        require_keys(jp, {"vertices"}, {"vertices"}, "scene.polygon");
        for (auto& jv : jp.at("vertices"))
            s.polygon.vertices.push_back(get_vec2(jv, "scene.polygon.vertices[]"));
    }
    return s;
}

std::string fnv1a_hex(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

std::string scene_fingerprint(const Scene& s) { return fnv1a_hex(scene_to_json(s).dump()); }

} // namespace refscat
