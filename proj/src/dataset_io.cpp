#include "refscat/dataset_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "refscat/errors.hpp"

namespace refscat {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, p);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_dataset(const std::string& dir, const PhaselessDataset& d) {
    json meta;
    meta["format"] = "refscat-phaseless-v1";
    meta["k"] = d.k;
    meta["d0"] = {d.d0.x, d.d0.y};
    meta["kind"] = d.scene_kind == SceneKind::Obstacle ? "obstacle" : "medium";
    meta["ball"] = {{"center", {d.ball.center.x, d.ball.center.y}}, {"radius", d.ball.radius}};
    if (d.scene_kind == SceneKind::Medium) meta["ball"]["n0"] = d.ball_n0;
    json verts = json::array();
    for (auto v : d.polygon.vertices) verts.push_back({v.x, v.y});
    meta["polygon"] = {{"vertices", verts}};
    meta["noise"] = {{"delta", d.noise.delta}, {"seed", d.noise.seed}};
    meta["counts"] = {{"directions", d.ni()}, {"sources", d.nj()}};
    meta["scene_fingerprint"] = d.scene_fingerprint;

    std::ostringstream a;
    a << "i,xhat_x,xhat_y,modulus\n";
    for (int i = 0; i < d.ni(); ++i)
        a << i << ',' << fmt17(d.directions[i].x) << ',' << fmt17(d.directions[i].y) << ','
          << fmt17(d.a_mod[i]) << '\n';

    auto grid_csv = [&](const std::vector<double>& mod) {
        std::ostringstream os;
        os << "i,j,xhat_x,xhat_y,z_x,z_y,edge,modulus\n";
        for (int i = 0; i < d.ni(); ++i) {
            for (int j = 0; j < d.nj(); ++j) {
                os << i << ',' << j << ',' << fmt17(d.directions[i].x) << ','
                   << fmt17(d.directions[i].y) << ',' << fmt17(d.sources[j].z.x) << ','
                   << fmt17(d.sources[j].z.y) << ',' << d.sources[j].edge << ','
                   << fmt17(mod[d.idx(i, j)]) << '\n';
            }
        }
        return os.str();
    };

    fs::create_directories(dir);
    write_text_atomic(dir + "/dataset.json", meta.dump(2) + "\n");
    write_text_atomic(dir + "/a.csv", a.str());
    write_text_atomic(dir + "/b.csv", grid_csv(d.b_mod));
    write_text_atomic(dir + "/c.csv", grid_csv(d.c_mod));
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

PhaselessDataset read_dataset(const std::string& dir) {
    json meta = json::parse(read_text(dir + "/dataset.json"));
    if (meta.value("format", "") != "refscat-phaseless-v1")
        throw ValidationError("read_dataset: unknown format tag");
    PhaselessDataset d;
    d.k = meta.at("k").get<double>();
    d.d0 = {meta.at("d0")[0].get<double>(), meta.at("d0")[1].get<double>()};
    d.scene_kind = meta.at("kind").get<std::string>() == "medium" ? SceneKind::Medium
                                                                  : SceneKind::Obstacle;
    d.ball.center = {meta.at("ball").at("center")[0].get<double>(),
                     meta.at("ball").at("center")[1].get<double>()};
    d.ball.radius = meta.at("ball").at("radius").get<double>();
    if (meta.at("ball").count("n0")) d.ball_n0 = meta.at("ball").at("n0").get<double>();
    for (auto& v : meta.at("polygon").at("vertices"))
        d.polygon.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    d.noise.delta = meta.at("noise").at("delta").get<double>();
    d.noise.seed = meta.at("noise").at("seed").get<std::uint64_t>();
    d.scene_fingerprint = meta.at("scene_fingerprint").get<std::string>();
    const int I = meta.at("counts").at("directions").get<int>();
    const int J = meta.at("counts").at("sources").get<int>();

    d.directions.resize(I);
    d.sources.resize(J);
    d.a_mod.resize(I);
    d.b_mod.resize((size_t)I * J);
    d.c_mod.resize((size_t)I * J);

    {
        std::istringstream in(read_text(dir + "/a.csv"));
        std::string line;
        std::getline(in, line); // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto f = split(line, ',');
            int i = std::stoi(f[0]);
            d.directions[i] = {std::stod(f[1]), std::stod(f[2])};
            d.a_mod[i] = std::stod(f[3]);
        }
    }
    auto read_grid = [&](const std::string& path, std::vector<double>& mod) {
        std::istringstream in(read_text(path));
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto f = split(line, ',');
            int i = std::stoi(f[0]), j = std::stoi(f[1]);
            d.sources[j].z = {std::stod(f[4]), std::stod(f[5])};
            d.sources[j].edge = std::stoi(f[6]);
            mod[d.idx(i, j)] = std::stod(f[7]);
        }
    };
    read_grid(dir + "/b.csv", d.b_mod);
    read_grid(dir + "/c.csv", d.c_mod);
    // the edge fraction is not a file column; recover it from the polygon
    const auto& verts = d.polygon.vertices;
    if (!verts.empty()) {
        for (auto& sp : d.sources) {
            Vec2 a = verts[sp.edge % verts.size()];
            Vec2 b = verts[(sp.edge + 1) % verts.size()];
            Vec2 e = b - a;
            sp.frac = (sp.z - a).dot(e) / e.dot(e);
        }
    }
    return d;
}

} // namespace refscat
