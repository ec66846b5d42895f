#include "refscat/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "refscat/dataset_io.hpp"
#include "refscat/errors.hpp"
#include "refscat/inversion.hpp"
#include "refscat/scene_io.hpp"
#include "refscat/verify.hpp"

namespace refscat {

namespace {

using nlohmann::json;

constexpr const char* version = "0.1.0";
constexpr int exit_ok = 0, exit_validation = 2, exit_numerical = 3, exit_usage = 4;

const char* usage_text =
    "usage: refscat <synth|invert|verify|demo-ambiguity|check-scene> [options] [--key value ...]\n"
    "  synth          --config FILE [--out DIR]      write a phaseless dataset\n"
    "  invert         --config FILE --data DIR [--out DIR]\n"
    "  verify         [--config FILE] [--out DIR] [--suite all]\n"
    "  demo-ambiguity --config FILE [--out DIR]      objective landscape table\n"
    "  check-scene    --config FILE                  validate and report\n"
    "Config keys may be overridden with dot paths, e.g. --noise.delta 0.01\n";

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
    if (!j.is_object()) throw ValidationError(path + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError(path + ": unknown key '" + it.key() + "'");
}

struct RunConfig {
    json raw;
    Scene scene;
    bool has_scene = false;
    int directions = 64;
    int per_edge = 2;
    double delta = 0.0;
    std::uint64_t seed = 1;
    ForwardOptions forward;
    InversionOptions inversion;
    std::string bc_mode = "classify"; // dirichlet | impedance | classify
    json init;                        // inversion starting point
    std::vector<Vec2> shifts;
    std::string output = "runs/out";
};

RunConfig parse_config(const json& j) {
    check_keys(j, {"scene", "grids", "noise", "forward", "inversion", "shifts", "output"},
               "config");
    RunConfig c;
    c.raw = j;
    if (j.count("scene")) {
        c.scene = scene_from_json(j.at("scene"));
        c.has_scene = true;
    }
    if (j.count("grids")) {
        check_keys(j.at("grids"), {"directions", "per_edge"}, "config.grids");
        c.directions = j.at("grids").value("directions", 64);
        c.per_edge = j.at("grids").value("per_edge", 2);
    }
    if (j.count("noise")) {
        check_keys(j.at("noise"), {"delta", "seed"}, "config.noise");
        c.delta = j.at("noise").value("delta", 0.0);
        c.seed = j.at("noise").value("seed", (std::uint64_t)1);
    }
    if (j.count("forward")) {
        const json& f = j.at("forward");
        check_keys(f, {"nodes_per_body", "strict", "medium_resolution", "ls_rtol"},
                   "config.forward");
        c.forward.nodes_per_body = f.value("nodes_per_body", 64);
        c.forward.strict = f.value("strict", true);
        c.forward.medium_resolution = f.value("medium_resolution", 64);
        c.forward.ls.rtol = f.value("ls_rtol", 1e-8);
    }
    if (j.count("inversion")) {
        const json& v = j.at("inversion");
        check_keys(v,
                   {"order", "bc", "max_iter", "multi_start", "seed", "init", "tikhonov",
                    "tikhonov_free", "lambda_cap", "weights"},
                   "config.inversion");
        c.inversion.max_iter = v.value("max_iter", 80);
        c.inversion.multi_start = v.value("multi_start", 5);
        c.inversion.seed = v.value("seed", (std::uint64_t)1);
        c.inversion.tikhonov = v.value("tikhonov", 1e-3);
        c.inversion.tikhonov_free = v.value("tikhonov_free", 2);
        c.inversion.lambda_cap = v.value("lambda_cap", 20.0);
        c.bc_mode = v.value("bc", std::string("classify"));
        if (c.bc_mode != "dirichlet" && c.bc_mode != "impedance" && c.bc_mode != "classify")
            throw ValidationError("config.inversion.bc: expected dirichlet|impedance|classify");
        if (v.count("weights")) {
            check_keys(v.at("weights"), {"a", "b", "c"}, "config.inversion.weights");
            c.inversion.obj.wa = v.at("weights").value("a", 1.0);
            c.inversion.obj.wb = v.at("weights").value("b", -1.0);
            c.inversion.obj.wc = v.at("weights").value("c", -1.0);
        }
        if (v.count("init")) {
            check_keys(v.at("init"),
                       {"center", "radius", "order", "lambda", "index", "fit_index", "fit_shape"},
                       "config.inversion.init");
            c.init = v.at("init");
        }
        if (v.count("order")) c.init["order"] = v.at("order");
    }
    c.inversion.obj.forward = c.forward;
    if (j.count("shifts")) {
        for (auto& s : j.at("shifts"))
            c.shifts.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
    }
    if (j.count("output")) c.output = j.at("output").get<std::string>();
    return c;
}

ParamVector init_from_config(const RunConfig& cfg, const PhaselessDataset& data) {
    ParamVector p;
    p.kind = data.scene_kind;
    int order = 0;
    if (!cfg.init.is_null()) {
        order = cfg.init.value("order", 0);
        if (cfg.init.count("center"))
            p.center = {cfg.init.at("center").at(0).get<double>(),
                        cfg.init.at("center").at(1).get<double>()};
        p.a0 = cfg.init.value("radius", 1.0);
        if (cfg.init.count("lambda"))
            p.lambda = {cfg.init.at("lambda").at(0).get<double>(),
                        cfg.init.at("lambda").at(1).get<double>()};
        p.index = cfg.init.value("index", 1.5);
        p.fit_index = cfg.init.value("fit_index", data.scene_kind == SceneKind::Medium);
        p.fit_shape = cfg.init.value("fit_shape", true);
    } else {
        p.fit_index = data.scene_kind == SceneKind::Medium;
    }
    p.ac.assign(order, 0.0);
    p.bs.assign(order, 0.0);
    return p;
}

void write_manifest(const std::string& dir, const std::string& subcommand, const json& config,
                    const std::vector<std::string>& inputs) {
    json m;
    m["tool"] = "refscat";
    m["version"] = version;
    m["subcommand"] = subcommand;
    m["config_hash"] = fnv1a_hex(config.dump());
    m["config"] = config;
    m["inputs"] = inputs;
    write_text_atomic(dir + "/manifest.json", m.dump(2) + "\n");
}

json param_json(const ParamVector& p) {
    json out;
    out["kind"] = p.kind == SceneKind::Obstacle ? "obstacle" : "medium";
    out["center"] = {p.center.x, p.center.y};
    out["a0"] = p.a0;
    out["a"] = p.ac;
    out["b"] = p.bs;
    if (p.kind == SceneKind::Obstacle) {
        out["bc"] = p.bc == BcKind::Dirichlet ? "dirichlet" : "impedance";
        if (p.bc == BcKind::Impedance) out["lambda"] = {p.lambda.real(), p.lambda.imag()};
    } else {
        out["index"] = p.index;
    }
    return out;
}

json result_json(const InversionResult& r) {
    json out;
    out["params"] = param_json(r.best);
    out["j_final"] = r.j_final;
    out["block_residuals"] = {{"a", r.ja}, {"b", r.jb}, {"c", r.jc}};
    out["converged"] = r.converged;
    out["iterations"] = r.iterations;
    out["wall_ms"] = r.wall_ms;
    out["message"] = r.message;
    return out;
}

void write_inversion_outputs(const std::string& dir, const InversionResult& r) {
    std::ostringstream hist;
    hist << "iter,j,accepted,mu\n";
    for (auto& e : r.history)
        hist << e.iter << ',' << fmt17(e.j) << ',' << (e.accepted ? 1 : 0) << ',' << fmt17(e.mu)
             << '\n';
    write_text_atomic(dir + "/residual_history.csv", hist.str());

    std::ostringstream bnd;
    bnd << "t,x,y\n";
    StarBoundary b = r.best.boundary();
    for (int i = 0; i <= 256; ++i) {
        double t = 2.0 * pi * i / 256;
        Vec2 p = b.point(t);
        bnd << fmt17(t) << ',' << fmt17(p.x) << ',' << fmt17(p.y) << '\n';
    }
    write_text_atomic(dir + "/boundary.csv", bnd.str());
}

int cmd_synth(const RunConfig& cfg, const std::string& out) {
    if (!cfg.has_scene) throw ValidationError("synth: config must carry a scene");
    auto report = validate_scene(cfg.scene);
    if (!report.pass) {
        for (auto& c : report.checks)
            if (!c.pass) std::cerr << "check failed: " << c.name << " " << c.detail << "\n";
        return exit_validation;
    }
    auto fwd = make_provider(cfg.scene, cfg.forward);
    auto data = synth_dataset(*fwd, cfg.scene.d0, direction_grid(cfg.directions),
                              sample_polygon(cfg.scene.polygon, cfg.per_edge), cfg.delta,
                              cfg.seed);
    write_dataset(out, data);
    write_manifest(out, "synth", cfg.raw, {});
    std::cout << "dataset written to " << out << " (" << data.ni() << " directions, " << data.nj()
              << " sources)\n";
    return exit_ok;
}

int cmd_invert(const RunConfig& cfg, const std::string& data_dir, const std::string& out) {
    auto data = read_dataset(data_dir);
    InversionOptions opt = cfg.inversion;
    ParamVector init = init_from_config(cfg, data);

    json result;
    if (data.scene_kind == SceneKind::Medium || cfg.bc_mode != "classify") {
        if (cfg.bc_mode == "impedance" && data.scene_kind == SceneKind::Obstacle) {
            init.bc = BcKind::Impedance;
            init.fit_lambda = true;
            if (init.lambda == Cplx{0.0, 0.0}) init.lambda = {1.0, 0.2};
        }
        auto r = reconstruct(data, init, opt);
        result = result_json(r);
        write_inversion_outputs(out, r);
    } else {
        auto cls = classify_bc(data, init, opt);
        const InversionResult& best =
            cls.label.kind == BcKind::Dirichlet ? cls.dirichlet_fit : cls.impedance_fit;
        result = result_json(best);
        result["classification"] = {
            {"label", cls.label.kind == BcKind::Dirichlet ? "dirichlet" : "impedance"},
            {"j_dirichlet", cls.j_dirichlet},
            {"j_impedance", cls.j_impedance},
            {"ratio", cls.ratio},
            {"determined", cls.determined}};
        if (cls.label.kind == BcKind::Impedance)
            result["classification"]["lambda"] = {cls.label.lambda.real(),
                                                  cls.label.lambda.imag()};
        write_inversion_outputs(out, best);
    }
    write_text_atomic(out + "/result.json", result.dump(2) + "\n");
    write_manifest(out, "invert", cfg.raw, {data_dir});
    std::cout << "inversion result written to " << out << "\n";
    return exit_ok;
}

int cmd_verify(const RunConfig& cfg, const std::string& out, const std::string& suite) {
    if (suite != "all") throw ValidationError("verify: unknown suite '" + suite + "'");
    auto reports = run_verify_suite(cfg.forward);
    std::filesystem::create_directories(out);
    write_check_reports(out, reports);
    write_manifest(out, "verify", cfg.raw, {});
    bool all = true;
    for (auto& r : reports) {
        std::cout << (r.pass ? "pass" : "FAIL") << "  " << r.name << "  max_rel_err "
                  << fmt17(r.max_rel_err) << "  tol " << fmt17(r.tolerance) << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "all checks passed\n" : "some checks FAILED\n");
    return all ? exit_ok : exit_numerical;
}

int cmd_demo_ambiguity(const RunConfig& cfg, const std::string& out) {
    if (!cfg.has_scene) throw ValidationError("demo-ambiguity: config must carry a scene");
    auto report = validate_scene(cfg.scene);
    if (!report.pass) return exit_validation;
    auto fwd = make_provider(cfg.scene, cfg.forward);
    auto data = synth_dataset(*fwd, cfg.scene.d0, direction_grid(cfg.directions),
                              sample_polygon(cfg.scene.polygon, cfg.per_edge), 0.0, cfg.seed);
    std::vector<Vec2> shifts = cfg.shifts;
    if (shifts.empty())
        shifts = {{0.0, 0.0}, {0.1, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {0.0, 0.5}, {0.25, 0.25}};
    auto rows = ambiguity_scan(data, cfg.scene, shifts, cfg.forward);
    std::ostringstream csv;
    csv << "h_x,h_y,j_plane_only,j_triple\n";
    for (auto& r : rows)
        csv << fmt17(r.h.x) << ',' << fmt17(r.h.y) << ',' << fmt17(r.j_plane_only) << ','
            << fmt17(r.j_triple) << '\n';
    std::filesystem::create_directories(out);
    write_text_atomic(out + "/ambiguity.csv", csv.str());
    write_manifest(out, "demo-ambiguity", cfg.raw, {});
    std::cout << csv.str();
    return exit_ok;
}

int cmd_check_scene(const RunConfig& cfg) {
    if (!cfg.has_scene) throw ValidationError("check-scene: config must carry a scene");
    auto report = validate_scene(cfg.scene);
    for (auto& c : report.checks)
        std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.name
                  << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
    std::cout << (report.pass ? "scene valid\n" : "scene INVALID\n");
    return report.pass ? exit_ok : exit_validation;
}

// Dot-path overrides: --a.b.c value sets config["a"]["b"]["c"].
void apply_overrides(json& config, const std::vector<std::string>& extras) {
    if (extras.size() % 2)
        throw ArgumentError("overrides must come in --key value pairs");
    for (size_t q = 0; q < extras.size(); q += 2) {
        std::string key = extras[q];
        if (key.rfind("--", 0) != 0) throw ArgumentError("expected --key, got '" + key + "'");
        key = key.substr(2);
        json* node = &config;
        size_t pos = 0;
        while (true) {
            size_t dot = key.find('.', pos);
            std::string part = key.substr(pos, dot - pos);
            if (dot == std::string::npos) {
                json val;
                try {
                    val = json::parse(extras[q + 1]);
                } catch (...) {
                    val = extras[q + 1]; // plain string
                }
                (*node)[part] = val;
                break;
            }
            node = &(*node)[part];
            pos = dot + 1;
        }
    }
}

} // namespace

int cli_run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) {
        std::cerr << usage_text;
        return exit_usage;
    }
    std::string sub = args[0];
    std::string config_path, data_dir, out_override, suite = "all";
    std::vector<std::string> extras;
    for (size_t q = 1; q < args.size(); ++q) {
        if (args[q] == "--config" && q + 1 < args.size()) config_path = args[++q];
        else if (args[q] == "--data" && q + 1 < args.size()) data_dir = args[++q];
        else if (args[q] == "--out" && q + 1 < args.size()) out_override = args[++q];
        else if (args[q] == "--suite" && q + 1 < args.size()) suite = args[++q];
        else if (args[q] == "--help" || args[q] == "-h") {
            std::cout << usage_text;
            return exit_ok;
        } else {
            extras.push_back(args[q]);
        }
    }

    try {
        json raw = json::object();
        if (!config_path.empty()) {
            try {
                raw = json::parse(read_text(config_path));
            } catch (const json::parse_error& e) {
                std::cerr << "config parse error: " << e.what() << "\n";
                return exit_validation;
            }
        }
        try {
            apply_overrides(raw, extras);
        } catch (const ArgumentError& e) {
            std::cerr << e.what() << "\n" << usage_text;
            return exit_usage;
        }
        RunConfig cfg = parse_config(raw);
        std::string out = out_override.empty() ? cfg.output : out_override;

        if (sub == "synth") return cmd_synth(cfg, out);
        if (sub == "invert") {
            if (data_dir.empty()) {
                std::cerr << "invert: --data DIR is required\n";
                return exit_usage;
            }
            return cmd_invert(cfg, data_dir, out);
        }
        if (sub == "verify") return cmd_verify(cfg, out, suite);
        if (sub == "demo-ambiguity") return cmd_demo_ambiguity(cfg, out);
        if (sub == "check-scene") return cmd_check_scene(cfg);
        std::cerr << "unknown subcommand '" << sub << "'\n" << usage_text;
        return exit_usage;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return exit_validation;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return exit_validation;
    } catch (const ArgumentError& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return exit_usage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}

} // namespace refscat
