#include "tropinit/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tropinit {

namespace {

using nlohmann::json;

void check_version(const json& j, const char* what) {
    if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": not a JSON object");
    if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
        j["format_version"].get<int>() != 1)
        throw std::invalid_argument(std::string(what) + ": missing or unsupported format_version");
}

const char* act_name(Act a) {
    switch (a) {
        case Act::logistic: return "logistic";
        case Act::identity: return "identity";
        case Act::relu: return "relu";
    }
    return "logistic";
}

Act act_from(const std::string& s) {
    if (s == "logistic") return Act::logistic;
    if (s == "identity") return Act::identity;
    if (s == "relu") return Act::relu;
    throw std::invalid_argument("spec: unknown activation '" + s + "'");
}

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat mat_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("spec: weight matrix must be a nonempty array");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
            throw std::invalid_argument("spec: ragged weight matrix");
        for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

json component_to_json(const ConvexComponent& c) {
    json facets = json::array();
    for (const auto& f : c.facets) facets.push_back({{"u", f.u}, {"h", f.h}});
    return {{"dim", c.dim}, {"bounded", c.bounded}, {"facets", std::move(facets)}};
}

ConvexComponent component_from_json(const json& j) {
    ConvexComponent c;
    c.dim = j.at("dim").get<int>();
    c.bounded = j.value("bounded", true);
    for (const auto& f : j.at("facets"))
        c.facets.push_back({f.at("u").get<std::vector<double>>(), f.at("h").get<double>()});
    return c;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

json spec_to_json(const NetworkSpec& spec) {
    json layers = json::array();
    for (const auto& layer : spec.layers)
        layers.push_back({{"w", mat_to_json(layer.W)},
                          {"b", layer.b},
                          {"act", act_name(layer.act)},
                          {"k", layer.k}});
    json prov = {{"kind", spec.provenance.kind},
                 {"kappa", spec.provenance.kappa},
                 {"lambda", spec.provenance.lambda},
                 {"eta", spec.provenance.eta},
                 {"delta", spec.provenance.delta},
                 {"basis_k", spec.provenance.basis_k}};
    if (!spec.provenance.components.empty()) {
        json comps = json::array();
        for (const auto& c : spec.provenance.components) comps.push_back(component_to_json(c));
        prov["components"] = std::move(comps);
    }
    if (!spec.provenance.balls.empty()) {
        json balls = json::array();
        for (const auto& b : spec.provenance.balls) balls.push_back({{"c", b.c}, {"r", b.r}});
        prov["balls"] = std::move(balls);
    }
    if (!spec.provenance.sides.empty()) prov["sides"] = spec.provenance.sides;
    if (!spec.provenance.centers.empty()) prov["centers"] = spec.provenance.centers;
    return {{"format_version", 1},
            {"layers", std::move(layers)},
            {"head", {{"tau", spec.head.tau}, {"alpha", spec.head.alpha}}},
            {"provenance", std::move(prov)},
            {"warnings", spec.warnings}};
}

NetworkSpec spec_from_json(const json& j) {
    check_version(j, "spec");
    NetworkSpec spec;
    if (!j.contains("layers") || !j["layers"].is_array() || j["layers"].empty())
        throw std::invalid_argument("spec: needs a nonempty layers array");
    for (const auto& lj : j["layers"]) {
        Layer layer;
        layer.W = mat_from_json(lj.at("w"));
        layer.b = lj.at("b").get<std::vector<double>>();
        if (static_cast<int>(layer.b.size()) != layer.W.rows)
            throw std::invalid_argument("spec: bias length does not match weight rows");
        layer.act = act_from(lj.at("act").get<std::string>());
        layer.k = lj.value("k", 1.0);
        spec.layers.push_back(std::move(layer));
    }
    int width = spec.layers.front().W.cols;
    for (const auto& layer : spec.layers) {
        if (layer.W.cols != width) throw std::invalid_argument("spec: layer shapes do not chain");
        width = layer.W.rows;
    }
    const auto& h = j.at("head");
    spec.head.tau = h.at("tau").get<double>();
    spec.head.alpha = h.value("alpha", 1.0);
    if (j.contains("provenance")) {
        const auto& p = j["provenance"];
        spec.provenance.kind = p.value("kind", "");
        spec.provenance.kappa = p.value("kappa", 0.0);
        spec.provenance.lambda = p.value("lambda", 0.0);
        spec.provenance.eta = p.value("eta", 0.0);
        spec.provenance.delta = p.value("delta", 0.0);
        spec.provenance.basis_k = p.value("basis_k", 0.0);
        if (p.contains("components"))
            for (const auto& c : p["components"])
                spec.provenance.components.push_back(component_from_json(c));
        if (p.contains("balls"))
            for (const auto& b : p["balls"])
                spec.provenance.balls.push_back(
                    {b.at("c").get<std::vector<double>>(), b.at("r").get<double>()});
        if (p.contains("sides")) spec.provenance.sides = p["sides"].get<std::vector<int>>();
        if (p.contains("centers")) spec.provenance.centers = p["centers"].get<std::vector<double>>();
    }
    if (j.contains("warnings")) spec.warnings = j["warnings"].get<std::vector<std::string>>();
    return spec;
}

json poly_to_json(const TropicalPolynomial& f) {
    json ms = json::array();
    for (const auto& m : f.monomials()) ms.push_back({{"u", m.u}, {"c", m.c}});
    return {{"format_version", 1}, {"dim", f.dim()}, {"monomials", std::move(ms)}};
}

TropicalPolynomial poly_from_json(const json& j) {
    check_version(j, "tropical polynomial");
    const int dim = j.at("dim").get<int>();
    std::vector<Monomial> ms;
    for (const auto& mj : j.at("monomials")) {
        Monomial m;
        for (const auto& u : mj.at("u")) {
            if (!u.is_number_integer())
                throw std::invalid_argument("tropical polynomial: exponents must be integers");
            m.u.push_back(u.get<int>());
        }
        m.c = mj.at("c").get<double>();
        ms.push_back(std::move(m));
    }
    return TropicalPolynomial(dim, std::move(ms));
}

json cover_to_json(const BallCover& cover) {
    json balls = json::array();
    for (const auto& b : cover.balls) balls.push_back({{"c", b.c}, {"r", b.r}});
    return {{"format_version", 1}, {"dim", cover.dim}, {"balls", std::move(balls)}};
}

BallCover cover_from_json(const json& j) {
    check_version(j, "ball cover");
    BallCover cover;
    cover.dim = j.at("dim").get<int>();
    for (const auto& b : j.at("balls")) {
        Ball ball{b.at("c").get<std::vector<double>>(), b.at("r").get<double>()};
        if (static_cast<int>(ball.c.size()) != cover.dim)
            throw std::invalid_argument("ball cover: center dimension mismatch");
        if (!(ball.r > 0.0)) throw std::invalid_argument("ball cover: radii must be positive");
        cover.balls.push_back(std::move(ball));
    }
    if (cover.balls.empty()) throw std::invalid_argument("ball cover: no balls");
    return cover;
}

std::vector<Vec2> vertices_from_json(const json& j) {
    check_version(j, "polygon");
    std::vector<Vec2> out;
    for (const auto& v : j.at("vertices")) {
        if (!v.is_array() || v.size() != 2)
            throw std::invalid_argument("polygon: vertices must be [x, y] pairs");
        out.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return out;
}

std::vector<std::vector<Vec2>> components_from_json(const json& j) {
    check_version(j, "union");
    std::vector<std::vector<Vec2>> out;
    for (const auto& c : j.at("components")) {
        std::vector<Vec2> verts;
        for (const auto& v : c.at("vertices")) {
            if (!v.is_array() || v.size() != 2)
                throw std::invalid_argument("union: vertices must be [x, y] pairs");
            verts.push_back({v[0].get<double>(), v[1].get<double>()});
        }
        out.push_back(std::move(verts));
    }
    if (out.empty()) throw std::invalid_argument("union: no components");
    return out;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return j;
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << j.dump(2) << '\n';
}

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty dataset file");
    const auto header = split_csv_line(line);
    const int d = static_cast<int>(header.size()) - 1;
    if (d < 1 || header.back() != "y")
        throw std::invalid_argument(path + ": expected header x1,...,xd,y");
    for (int i = 0; i < d; ++i)
        if (header[i] != "x" + std::to_string(i + 1))
            throw std::invalid_argument(path + ": expected header x1,...,xd,y");

    std::vector<double> flat, ys;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != d + 1)
            throw std::invalid_argument(path + ": wrong column count on line " +
                                        std::to_string(lineno));
        try {
            for (int i = 0; i < d; ++i) flat.push_back(std::stod(cells[i]));
            const double y = std::stod(cells[d]);
            if (y != 0.0 && y != 1.0)
                throw std::invalid_argument(path + ": label not in {0,1} on line " +
                                            std::to_string(lineno));
            ys.push_back(y);
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument(path + ": bad number on line " + std::to_string(lineno));
        }
    }
    if (ys.empty()) throw std::invalid_argument(path + ": dataset has no rows");
    Dataset ds;
    ds.X = Mat(static_cast<int>(ys.size()), d);
    ds.X.a = std::move(flat);
    ds.y = std::move(ys);
    return ds;
}

void write_dataset_csv(const std::string& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    for (int i = 0; i < ds.X.cols; ++i) out << "x" << i + 1 << ",";
    out << "y\n";
    char buf[32];
    for (int i = 0; i < ds.X.rows; ++i) {
        for (int j = 0; j < ds.X.cols; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.X(i, j));
            out << buf << ",";
        }
        out << (ds.y[i] == 1.0 ? "1" : "0") << "\n";
    }
}

void write_curve_csv(const std::string& path, const LossCurve& curve) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    bool has_val = false;
    for (const auto& p : curve.points) has_val = has_val || p.val_bce.has_value();
    out << (has_val ? "epoch,train_bce,val_bce\n" : "epoch,train_bce\n");
    char buf[32];
    for (const auto& p : curve.points) {
        out << p.epoch << ",";
        std::snprintf(buf, sizeof buf, "%.9g", p.train_bce);
        out << buf;
        if (has_val) {
            out << ",";
            std::snprintf(buf, sizeof buf, "%.9g", p.val_bce.value_or(std::nan("")));
            out << buf;
        }
        out << "\n";
    }
}

std::vector<Segment> marching_squares(const Mat& vals, const Box& window, double level) {
    if (vals.rows < 2 || vals.cols < 2)
        throw std::invalid_argument("marching_squares: grid must be at least 2x2");
    const double dx = window.width() / vals.cols;
    const double dy = window.height() / vals.rows;
    auto px = [&](int cx) { return window.x0 + (cx + 0.5) * dx; };
    auto py = [&](int cy) { return window.y1 - (cy + 0.5) * dy; };
    auto lerp = [&](double va, double vb) { return va == vb ? 0.5 : (level - va) / (vb - va); };

    std::vector<Segment> segs;
    for (int cy = 0; cy + 1 < vals.rows; ++cy)
        for (int cx = 0; cx + 1 < vals.cols; ++cx) {
            const double a = vals(cy, cx), b = vals(cy, cx + 1);      // top corners
            const double c = vals(cy + 1, cx + 1), d = vals(cy + 1, cx);  // bottom corners
            const int mask = (a >= level ? 1 : 0) | (b >= level ? 2 : 0) | (c >= level ? 4 : 0) |
                             (d >= level ? 8 : 0);
            if (mask == 0 || mask == 15) continue;
            const Vec2 top{px(cx) + lerp(a, b) * dx, py(cy)};
            const Vec2 right{px(cx + 1), py(cy) - lerp(b, c) * dy};
            const Vec2 bottom{px(cx) + lerp(d, c) * dx, py(cy + 1)};
            const Vec2 left{px(cx), py(cy) - lerp(a, d) * dy};
            switch (mask) {
                case 1: segs.push_back({left, top}); break;
                case 2: segs.push_back({top, right}); break;
                case 3: segs.push_back({left, right}); break;
                case 4: segs.push_back({right, bottom}); break;
                case 6: segs.push_back({top, bottom}); break;
                case 7: segs.push_back({left, bottom}); break;
                case 8: segs.push_back({bottom, left}); break;
                case 9: segs.push_back({top, bottom}); break;
                case 11: segs.push_back({right, bottom}); break;
                case 12: segs.push_back({right, left}); break;
                case 13: segs.push_back({top, right}); break;
                case 14: segs.push_back({left, top}); break;
                case 5:  // saddles: the center average picks the pairing
                    if ((a + b + c + d) / 4.0 >= level) {
                        segs.push_back({top, right});
                        segs.push_back({left, bottom});
                    } else {
                        segs.push_back({left, top});
                        segs.push_back({right, bottom});
                    }
                    break;
                case 10:
                    if ((a + b + c + d) / 4.0 >= level) {
                        segs.push_back({left, top});
                        segs.push_back({right, bottom});
                    } else {
                        segs.push_back({top, right});
                        segs.push_back({bottom, left});
                    }
                    break;
                default: break;
            }
        }
    return segs;
}

void write_contour_csv(const std::string& path, const std::vector<Segment>& segs) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "x0,y0,x1,y1\n";
    char buf[128];
    for (const auto& s : segs) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", s.a.x, s.a.y, s.b.x, s.b.y);
        out << buf;
    }
}

void write_ppm(const std::string& path, const Mat& vals) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "P6\n" << vals.cols << " " << vals.rows << "\n255\n";
    std::vector<unsigned char> row(static_cast<size_t>(vals.cols) * 3);
    for (int i = 0; i < vals.rows; ++i) {
        for (int j = 0; j < vals.cols; ++j) {
            double v = vals(i, j);
            v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
            const auto g = static_cast<unsigned char>(std::lround(255.0 * v));
            row[3 * j] = row[3 * j + 1] = row[3 * j + 2] = g;
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << content;
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw std::invalid_argument("cannot create directory " + path + ": " + ec.message());
}

}  // namespace tropinit
