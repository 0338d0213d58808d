#include "tropinit/cli.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tropinit/compiler.hpp"
#include "tropinit/geometry.hpp"
#include "tropinit/harness.hpp"
#include "tropinit/io.hpp"
#include "tropinit/metrics.hpp"
#include "tropinit/network.hpp"
#include "tropinit/tropical.hpp"

namespace tropinit {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
    std::vector<double> out;
    for (const std::string& t : split_list(s)) {
        size_t pos = 0;
        double d = 0.0;
        bool ok = !t.empty();
        if (ok) {
            try {
                d = std::stod(t, &pos);
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (!ok || pos != t.size())
            throw std::invalid_argument(std::string(what) + ": bad number '" + t + "'");
        out.push_back(d);
    }
    return out;
}

std::vector<int> parse_ints(const std::string& s, const char* what) {
    std::vector<int> out;
    for (double d : parse_doubles(s, what)) {
        const int v = static_cast<int>(d);
        if (static_cast<double>(v) != d)
            throw std::invalid_argument(std::string(what) + ": expected integers");
        out.push_back(v);
    }
    return out;
}

Box parse_window(const std::string& s) {
    const std::vector<double> v = parse_doubles(s, "--window");
    if (v.size() != 4) throw std::invalid_argument("--window needs x0,x1,y0,y1");
    const Box w{v[0], v[1], v[2], v[3]};
    if (!(w.width() > 0.0) || !(w.height() > 0.0))
        throw std::invalid_argument("--window must satisfy x0 < x1 and y0 < y1");
    return w;
}

json window_json(const Box& w) { return json::array({w.x0, w.x1, w.y0, w.y1}); }

void print_warnings(const NetworkSpec& spec) {
    for (const std::string& w : spec.warnings) std::cerr << "WARNING: " << w << "\n";
}

/// Black-on-white raster of the tropical curve: a pixel is on the curve when
/// the top-two monomial gap is below one pixel diagonal times the gradient
/// spread, so line thickness stays resolution-independent.
Mat curve_raster(const TropicalPolynomial& f, const Box& w, int grid_n) {
    if (grid_n < 2) throw std::invalid_argument("--grid-n must be >= 2");
    if (f.dim() != 2) throw std::invalid_argument("curve rasters need a planar polynomial");
    double spread = 1.0;
    for (const Monomial& mono : f.monomials())
        spread = std::max(spread, std::hypot(mono.u[0], mono.u[1]));
    const double dx = w.width() / grid_n, dy = w.height() / grid_n;
    const double thick = std::hypot(dx, dy) * spread;
    Mat img(grid_n, grid_n);
    std::vector<double> x(2);
    for (int iy = 0; iy < grid_n; ++iy) {
        x[1] = w.y1 - (iy + 0.5) * dy;
        for (int ix = 0; ix < grid_n; ++ix) {
            x[0] = w.x0 + (ix + 0.5) * dx;
            double best = -std::numeric_limits<double>::infinity(), second = best;
            for (const Monomial& mono : f.monomials()) {
                const double v = mono.c + mono.u[0] * x[0] + mono.u[1] * x[1];
                if (v > best) {
                    second = best;
                    best = v;
                } else if (v > second) {
                    second = v;
                }
            }
            img(iy, ix) = (best - second) <= thick ? 0.0 : 1.0;
        }
    }
    return img;
}

/// Apply the keys present in a config document over defaults; flags given on
/// the command line still win afterwards.
void apply_config_json(ExperimentConfig& cfg, const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    if (j.contains("case") && j.at("case").get<std::string>() != cfg.experiment_case)
        throw std::invalid_argument("config case conflicts with --case");
    if (j.contains("window")) {
        const auto w = j.at("window");
        if (!w.is_array() || w.size() != 4)
            throw std::invalid_argument("config window must be [x0,x1,y0,y1]");
        cfg.window = Box{w[0].get<double>(), w[1].get<double>(), w[2].get<double>(),
                         w[3].get<double>()};
        if (!(cfg.window.width() > 0.0) || !(cfg.window.height() > 0.0))
            throw std::invalid_argument("config window is degenerate");
    }
    if (j.contains("train_n")) cfg.train_n = j.at("train_n").get<int>();
    if (j.contains("test_n")) cfg.test_n = j.at("test_n").get<int>();
    if (j.contains("hidden")) cfg.hidden = j.at("hidden").get<std::vector<int>>();
    if (j.contains("inits")) cfg.inits = j.at("inits").get<std::vector<std::string>>();
    if (j.contains("grid_n")) cfg.grid_n = j.at("grid_n").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
    if (j.contains("kappa_hidden")) cfg.kappa_hidden = j.at("kappa_hidden").get<double>();
    if (j.contains("disk_r")) cfg.disk_r = j.at("disk_r").get<double>();
    if (j.contains("c1")) cfg.c1 = {j.at("c1").at(0).get<double>(), j.at("c1").at(1).get<double>()};
    if (j.contains("c2")) cfg.c2 = {j.at("c2").at(0).get<double>(), j.at("c2").at(1).get<double>()};
    if (j.contains("epochs")) cfg.train_cfg.epochs = j.at("epochs").get<int>();
    if (j.contains("batch")) cfg.train_cfg.batch_size = j.at("batch").get<int>();
    if (j.contains("lr")) cfg.train_cfg.learning_rate = j.at("lr").get<double>();
    if (j.contains("early_stop")) {
        const auto& e = j.at("early_stop");
        if (e.is_null()) {
            cfg.train_cfg.early_stop.reset();
        } else {
            cfg.train_cfg.early_stop =
                EarlyStop{e.at("patience").get<int>(), e.at("min_delta").get<double>()};
        }
    }
    if (j.contains("swiss")) {
        const auto& s = j.at("swiss");
        if (s.contains("eps")) cfg.swiss_eps = s.at("eps").get<double>();
        if (s.contains("voxel_ratio")) cfg.swiss_voxel_ratio = s.at("voxel_ratio").get<double>();
        if (s.contains("budget")) cfg.swiss_budget = s.at("budget").get<int>();
        if (s.contains("sides")) cfg.swiss_sides = s.at("sides").get<int>();
        if (s.contains("kappa")) cfg.swiss_kappa = s.at("kappa").get<double>();
        if (s.contains("lambda")) cfg.swiss_lambda = s.at("lambda").get<double>();
        if (s.contains("alpha")) cfg.swiss_alpha = s.at("alpha").get<double>();
        if (s.contains("tau")) cfg.swiss_tau = s.at("tau").get<double>();
        if (s.contains("eta")) cfg.swiss_eta = s.at("eta").get<double>();
        if (s.contains("delta")) cfg.swiss_delta = s.at("delta").get<double>();
        if (s.contains("spiral_a")) cfg.spiral.a = s.at("spiral_a").get<double>();
        if (s.contains("spiral_b")) cfg.spiral.b = s.at("spiral_b").get<double>();
        if (s.contains("spiral_theta0")) cfg.spiral.theta0 = s.at("spiral_theta0").get<double>();
        if (s.contains("spiral_theta1")) cfg.spiral.theta1 = s.at("spiral_theta1").get<double>();
        if (s.contains("spiral_w")) cfg.spiral.w = s.at("spiral_w").get<double>();
    }
}

std::vector<Segment> subdivision_edges(const DualSubdivision& sub) {
    std::vector<Segment> segs;
    for (const auto& cell : sub.cells) {
        for (size_t i = 0; i < cell.size(); ++i) {
            const LatticePoint& a = cell[i];
            const LatticePoint& b = cell[(i + 1) % cell.size()];
            segs.push_back({{static_cast<double>(a.x), static_cast<double>(a.y)},
                            {static_cast<double>(b.x), static_cast<double>(b.y)}});
        }
    }
    return segs;
}

json metrics_json(const MetricsReport& rep) {
    json j{{"format_version", 1},
           {"brier", rep.brier},
           {"tau", rep.tau},
           {"n_pos", rep.n_pos},
           {"n_neg", rep.n_neg}};
    j["auc"] = rep.auc ? json(*rep.auc) : json(nullptr);
    j["iou"] = rep.iou ? json(*rep.iou) : json(nullptr);
    return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"geometry-compiled classifier toolkit"};
    app.require_subcommand(1);

    // ---- trop: tropical polynomial queries ---------------------------------
    auto* trop = app.add_subcommand("trop", "tropical polynomial queries");
    trop->require_subcommand(1);

    struct {
        std::string poly, at;
        double tol = 1e-9;
        bool print = false;
    } te;
    auto* trop_eval_cmd = trop->add_subcommand("eval", "evaluate max-plus form at a point");
    trop_eval_cmd->add_option("--poly", te.poly, "tropical polynomial JSON")->required();
    trop_eval_cmd->add_option("--at", te.at, "comma-separated point coordinates")->required();
    trop_eval_cmd->add_option("--tol", te.tol, "tie tolerance");
    trop_eval_cmd->add_flag("--print-config", te.print, "echo resolved config and exit");
    trop_eval_cmd->callback([&] {
        const json cfg{{"format_version", 1}, {"subcommand", "trop eval"},
                       {"poly", te.poly},     {"at", te.at},
                       {"tol", te.tol}};
        if (te.print) return emit(cfg);
        const TropicalPolynomial f = poly_from_json(load_json(te.poly));
        const std::vector<double> x = parse_doubles(te.at, "--at");
        emit(json{{"format_version", 1},
                  {"value", trop_eval(f, x)},
                  {"on_hypersurface", on_hypersurface(f, x, te.tol)}});
    });

    struct {
        std::string poly;
        double tol = 1e-9;
        bool print = false;
    } tc;
    auto* trop_curve_cmd = trop->add_subcommand("curve", "enumerate the tropical curve");
    trop_curve_cmd->add_option("--poly", tc.poly, "tropical polynomial JSON")->required();
    trop_curve_cmd->add_option("--tol", tc.tol, "tie tolerance");
    trop_curve_cmd->add_flag("--print-config", tc.print, "echo resolved config and exit");
    trop_curve_cmd->callback([&] {
        const json cfg{{"format_version", 1},
                       {"subcommand", "trop curve"},
                       {"poly", tc.poly},
                       {"tol", tc.tol}};
        if (tc.print) return emit(cfg);
        const TropicalCurve curve = trop_curve(poly_from_json(load_json(tc.poly)), tc.tol);
        emit(json{{"format_version", 1},
                  {"vertices", curve.vertices.size()},
                  {"edges", curve.edges.size()},
                  {"rays", curve.rays.size()},
                  {"full_lines", curve.full_lines},
                  {"regions", curve.regions},
                  {"degenerate", curve.degenerate}});
    });

    struct {
        std::string poly, raster, edges, window = "-2,2,-2,2";
        int grid_n = 200;
        bool print = false;
    } td;
    auto* trop_dual_cmd = trop->add_subcommand("dual", "dual subdivision of the Newton polygon");
    trop_dual_cmd->add_option("--poly", td.poly, "tropical polynomial JSON")->required();
    trop_dual_cmd->add_option("--raster", td.raster, "optional curve raster PPM");
    trop_dual_cmd->add_option("--edges", td.edges, "optional subdivision-edge CSV");
    trop_dual_cmd->add_option("--window", td.window, "x0,x1,y0,y1 raster window");
    trop_dual_cmd->add_option("--grid-n", td.grid_n, "raster resolution");
    trop_dual_cmd->add_flag("--print-config", td.print, "echo resolved config and exit");
    trop_dual_cmd->callback([&] {
        const Box w = parse_window(td.window);
        const json cfg{{"format_version", 1}, {"subcommand", "trop dual"},
                       {"poly", td.poly},     {"raster", td.raster},
                       {"edges", td.edges},   {"window", window_json(w)},
                       {"grid_n", td.grid_n}};
        if (td.print) return emit(cfg);
        const TropicalPolynomial f = poly_from_json(load_json(td.poly));
        const DualSubdivision sub = dual_subdivision(f);
        if (!td.raster.empty()) write_ppm(td.raster, curve_raster(f, w, td.grid_n));
        if (!td.edges.empty()) write_contour_csv(td.edges, subdivision_edges(sub));
        emit(json{{"format_version", 1},
                  {"cells", sub.cells.size()},
                  {"interior_edges", sub.interior_edges},
                  {"boundary_edges", sub.boundary_edges},
                  {"used_points", sub.used_points},
                  {"degenerate", sub.degenerate},
                  {"perturbed", sub.perturbed}});
    });

    struct {
        std::string poly, window = "-2,2,-2,2";
        int grid_n = 96;
        bool print = false;
    } tdc;
    auto* trop_check_cmd =
        trop->add_subcommand("duality-check", "curve/subdivision count correspondence");
    trop_check_cmd->add_option("--poly", tdc.poly, "tropical polynomial JSON")->required();
    trop_check_cmd->add_option("--window", tdc.window, "x0,x1,y0,y1 reporting window");
    trop_check_cmd->add_option("--grid-n", tdc.grid_n, "region probe resolution (>= 64)");
    trop_check_cmd->add_flag("--print-config", tdc.print, "echo resolved config and exit");
    trop_check_cmd->callback([&] {
        const Box w = parse_window(tdc.window);
        const json cfg{{"format_version", 1},
                       {"subcommand", "trop duality-check"},
                       {"poly", tdc.poly},
                       {"window", window_json(w)},
                       {"grid_n", tdc.grid_n}};
        if (tdc.print) return emit(cfg);
        const DualityReport rep = duality_report(poly_from_json(load_json(tdc.poly)), w, tdc.grid_n);
        emit(json{{"format_version", 1},
                  {"curve_vertices", rep.curve_vertices},
                  {"curve_edges", rep.curve_edges},
                  {"curve_rays", rep.curve_rays},
                  {"curve_regions", rep.curve_regions},
                  {"cells", rep.cells},
                  {"interior_edges", rep.interior_edges},
                  {"boundary_edges", rep.boundary_edges},
                  {"used_points", rep.used_points},
                  {"degenerate", rep.degenerate},
                  {"all_vertices_in_window", rep.all_vertices_in_window},
                  {"counts_match", rep.counts_match()}});
    });

    // ---- compile: geometry to network specs --------------------------------
    auto* compile = app.add_subcommand("compile", "compile geometry into a network spec");
    compile->require_subcommand(1);

    struct {
        std::string in, out;
        double kappa = 0.0;
        bool print = false;
    } cc;
    auto* compile_convex_cmd = compile->add_subcommand("convex", "one polygon, one gate layer");
    compile_convex_cmd->add_option("--in", cc.in, "polygon JSON {vertices: [[x,y],...]}")->required();
    compile_convex_cmd->add_option("--kappa", cc.kappa, "gate sharpness")->required();
    compile_convex_cmd->add_option("--out", cc.out, "output spec JSON")->required();
    compile_convex_cmd->add_flag("--print-config", cc.print, "echo resolved config and exit");
    compile_convex_cmd->callback([&] {
        const json cfg{{"format_version", 1}, {"subcommand", "compile convex"},
                       {"in", cc.in},         {"out", cc.out},
                       {"kappa", cc.kappa}};
        if (cc.print) return emit(cfg);
        const NetworkSpec spec =
            compile_convex(polygon_facets(vertices_from_json(load_json(cc.in))), cc.kappa);
        print_warnings(spec);
        save_json(cc.out, spec_to_json(spec));
        emit(json{{"format_version", 1}, {"wrote", cc.out}, {"facets", spec.layers[0].W.rows}});
    });

    struct {
        std::string in, out;
        double kappa = 0.0, lambda = 0.0, eta = 0.1, delta = 0.1;
        bool print = false;
    } cu;
    auto* compile_union_cmd = compile->add_subcommand("union", "polygon union, two layers");
    compile_union_cmd->add_option("--in", cu.in, "union JSON {components: [{vertices},...]}")
        ->required();
    compile_union_cmd->add_option("--kappa", cu.kappa, "gate sharpness")->required();
    compile_union_cmd->add_option("--lambda", cu.lambda, "outer squash sharpness (0 = floor)");
    compile_union_cmd->add_option("--eta", cu.eta, "inner tolerance");
    compile_union_cmd->add_option("--delta", cu.delta, "outer tolerance");
    compile_union_cmd->add_option("--out", cu.out, "output spec JSON")->required();
    compile_union_cmd->add_flag("--print-config", cu.print, "echo resolved config and exit");
    compile_union_cmd->callback([&] {
        const json cfg{{"format_version", 1}, {"subcommand", "compile union"},
                       {"in", cu.in},         {"out", cu.out},
                       {"kappa", cu.kappa},   {"lambda", cu.lambda},
                       {"eta", cu.eta},       {"delta", cu.delta}};
        if (cu.print) return emit(cfg);
        std::vector<ConvexComponent> comps;
        for (const auto& verts : components_from_json(load_json(cu.in)))
            comps.push_back(polygon_facets(verts));
        const NetworkSpec spec =
            compile_union(comps, GateParams{cu.kappa, cu.lambda, cu.eta, cu.delta});
        print_warnings(spec);
        save_json(cu.out, spec_to_json(spec));
        emit(json{{"format_version", 1},
                  {"wrote", cu.out},
                  {"components", comps.size()},
                  {"gates", spec.layers[0].W.rows}});
    });

    struct {
        std::string in, out;
        double eps_poly = 0.0, kappa = 0.0, lambda = 0.0, eta = 0.1, delta = 0.1;
        bool print = false;
    } cb;
    auto* compile_cover_cmd = compile->add_subcommand("cover", "ball cover, two layers");
    compile_cover_cmd->add_option("--in", cb.in, "cover JSON {dim, balls: [{c, r},...]}")
        ->required();
    compile_cover_cmd->add_option("--eps-poly", cb.eps_poly, "polytope tolerance")->required();
    compile_cover_cmd->add_option("--kappa", cb.kappa, "gate sharpness")->required();
    compile_cover_cmd->add_option("--lambda", cb.lambda, "outer squash sharpness (0 = floor)");
    compile_cover_cmd->add_option("--eta", cb.eta, "inner tolerance");
    compile_cover_cmd->add_option("--delta", cb.delta, "outer tolerance");
    compile_cover_cmd->add_option("--out", cb.out, "output spec JSON")->required();
    compile_cover_cmd->add_flag("--print-config", cb.print, "echo resolved config and exit");
    compile_cover_cmd->callback([&] {
        const json cfg{{"format_version", 1}, {"subcommand", "compile cover"},
                       {"in", cb.in},         {"out", cb.out},
                       {"eps_poly", cb.eps_poly}, {"kappa", cb.kappa},
                       {"lambda", cb.lambda}, {"eta", cb.eta},
                       {"delta", cb.delta}};
        if (cb.print) return emit(cfg);
        const NetworkSpec spec =
            compile_ball_cover(cover_from_json(load_json(cb.in)), cb.eps_poly,
                               GateParams{cb.kappa, cb.lambda, cb.eta, cb.delta});
        print_warnings(spec);
        save_json(cb.out, spec_to_json(spec));
        emit(json{{"format_version", 1},
                  {"wrote", cb.out},
                  {"balls", spec.provenance.balls.size()},
                  {"gates", spec.layers[0].W.rows}});
    });

    struct {
        std::string data, centers, out, basis = "sigmoid";
        double k = 0.0;
        bool print = false;
    } cl;
    auto* compile_ls_cmd = compile->add_subcommand("ls1d", "least-squares 1-d basis fit");
    compile_ls_cmd->add_option("--data", cl.data, "1-d dataset CSV (x1,y)")->required();
    compile_ls_cmd->add_option("--centers", cl.centers, "comma-separated basis centers")
        ->required();
    compile_ls_cmd->add_option("--k", cl.k, "basis sharpness")->required();
    compile_ls_cmd->add_option("--basis", cl.basis, "sigmoid | relu");
    compile_ls_cmd->add_option("--out", cl.out, "output spec JSON")->required();
    compile_ls_cmd->add_flag("--print-config", cl.print, "echo resolved config and exit");
    compile_ls_cmd->callback([&] {
        const json cfg{{"format_version", 1}, {"subcommand", "compile ls1d"},
                       {"data", cl.data},     {"centers", cl.centers},
                       {"k", cl.k},           {"basis", cl.basis},
                       {"out", cl.out}};
        if (cl.print) return emit(cfg);
        if (cl.basis != "sigmoid" && cl.basis != "relu")
            throw std::invalid_argument("--basis must be sigmoid or relu");
        const Dataset ds = read_dataset_csv(cl.data);
        if (ds.X.cols != 1) throw std::invalid_argument("ls1d expects a 1-d dataset (x1,y)");
        std::vector<double> xs(ds.y.size());
        for (int i = 0; i < ds.X.rows; ++i) xs[static_cast<size_t>(i)] = ds.X(i, 0);
        const Ls1dResult res =
            ls_initializer_1d(xs, ds.y, parse_doubles(cl.centers, "--centers"), cl.k,
                              cl.basis == "relu" ? Basis1d::relu : Basis1d::sigmoid);
        if (!res.ok)
            throw numeric_error("least-squares basis fit is rank-deficient beyond ridge rescue");
        save_json(cl.out, spec_to_json(res.spec));
        emit(json{{"format_version", 1},
                  {"wrote", cl.out},
                  {"cond_estimate", res.cond_estimate},
                  {"ridge", res.ridge},
                  {"alpha", res.alpha}});
    });

    // ---- train --------------------------------------------------------------
    struct {
        std::string spec, data, out, curve;
        int epochs = 80, batch = 512, patience = 0;
        double lr = 3e-3, min_delta = 1e-4;
        uint64_t seed = 0;
        bool print = false;
    } tr;
    auto* train_cmd = app.add_subcommand("train", "mini-batch Adam on BCE");
    train_cmd->add_option("--spec", tr.spec, "input spec JSON")->required();
    train_cmd->add_option("--data", tr.data, "training dataset CSV")->required();
    train_cmd->add_option("--out", tr.out, "trained spec JSON")->required();
    train_cmd->add_option("--curve", tr.curve, "optional loss-curve CSV");
    train_cmd->add_option("--epochs", tr.epochs, "training epochs");
    train_cmd->add_option("--batch", tr.batch, "mini-batch size");
    train_cmd->add_option("--lr", tr.lr, "learning rate");
    train_cmd->add_option("--seed", tr.seed, "shuffle/split seed");
    train_cmd->add_option("--patience", tr.patience, "early-stop patience (0 = off)");
    train_cmd->add_option("--min-delta", tr.min_delta, "early-stop improvement threshold");
    train_cmd->add_flag("--print-config", tr.print, "echo resolved config and exit");
    train_cmd->callback([&] {
        const json cfg{{"format_version", 1}, {"subcommand", "train"},
                       {"spec", tr.spec},     {"data", tr.data},
                       {"out", tr.out},       {"curve", tr.curve},
                       {"epochs", tr.epochs}, {"batch", tr.batch},
                       {"lr", tr.lr},         {"seed", tr.seed},
                       {"patience", tr.patience}, {"min_delta", tr.min_delta}};
        if (tr.print) return emit(cfg);
        TrainConfig t;
        t.epochs = tr.epochs;
        t.batch_size = tr.batch;
        t.learning_rate = tr.lr;
        t.seed = tr.seed;
        if (tr.patience > 0) t.early_stop = EarlyStop{tr.patience, tr.min_delta};
        const TrainResult res =
            train(spec_from_json(load_json(tr.spec)), read_dataset_csv(tr.data), t);
        save_json(tr.out, spec_to_json(res.spec));
        if (!tr.curve.empty()) write_curve_csv(tr.curve, res.curve);
        emit(json{{"format_version", 1},
                  {"wrote", tr.out},
                  {"epochs_run", res.curve.points.size()},
                  {"stopped_epoch", res.curve.stopped_epoch},
                  {"final_train_bce",
                   res.curve.points.empty() ? 0.0 : res.curve.points.back().train_bce}});
    });

    // ---- eval ---------------------------------------------------------------
    struct {
        std::string spec, data, out;
        double tau = 0.5;
        bool print = false;
    } ev;
    auto* eval_cmd = app.add_subcommand("eval", "metrics of a spec on a dataset");
    eval_cmd->add_option("--spec", ev.spec, "spec JSON")->required();
    eval_cmd->add_option("--data", ev.data, "dataset CSV")->required();
    eval_cmd->add_option("--tau", ev.tau, "decision threshold");
    eval_cmd->add_option("--out", ev.out, "optional metrics JSON output");
    eval_cmd->add_flag("--print-config", ev.print, "echo resolved config and exit");
    eval_cmd->callback([&] {
        const json cfg{{"format_version", 1}, {"subcommand", "eval"},
                       {"spec", ev.spec},     {"data", ev.data},
                       {"tau", ev.tau},       {"out", ev.out}};
        if (ev.print) return emit(cfg);
        const NetworkSpec spec = spec_from_json(load_json(ev.spec));
        const Dataset ds = read_dataset_csv(ev.data);
        const json out = metrics_json(metrics_report(forward_probs(spec, ds.X), ds.y, ev.tau));
        if (!ev.out.empty()) save_json(ev.out, out);
        emit(out);
    });

    // ---- render -------------------------------------------------------------
    struct {
        std::string spec, out, contour, window = "-2,2,-2,2";
        int grid_n = 200;
        double tau = 0.5;
        bool print = false;
    } rd;
    auto* render_cmd = app.add_subcommand("render", "decision map raster and contour");
    render_cmd->add_option("--spec", rd.spec, "spec JSON")->required();
    render_cmd->add_option("--out", rd.out, "output PPM")->required();
    render_cmd->add_option("--contour", rd.contour, "optional contour CSV");
    render_cmd->add_option("--window", rd.window, "x0,x1,y0,y1 render window");
    render_cmd->add_option("--grid-n", rd.grid_n, "raster resolution");
    render_cmd->add_option("--tau", rd.tau, "contour level");
    render_cmd->add_flag("--print-config", rd.print, "echo resolved config and exit");
    render_cmd->callback([&] {
        const Box w = parse_window(rd.window);
        const json cfg{{"format_version", 1}, {"subcommand", "render"},
                       {"spec", rd.spec},     {"out", rd.out},
                       {"contour", rd.contour}, {"window", window_json(w)},
                       {"grid_n", rd.grid_n}, {"tau", rd.tau}};
        if (rd.print) return emit(cfg);
        const DecisionMap map =
            render_decision_map(spec_from_json(load_json(rd.spec)), w, rd.grid_n);
        write_ppm(rd.out, map.values);
        if (!rd.contour.empty())
            write_contour_csv(rd.contour, marching_squares(map.values, w, rd.tau));
        emit(json{{"format_version", 1}, {"wrote", rd.out}});
    });

    // ---- experiment -----------------------------------------------------------
    struct {
        std::string exp_case, outdir, hidden, inits, config;
        uint64_t seed = 0;
        int train_n = -1, test_n = -1, grid_n = -1, epochs = -1, batch = -1;
        double lr = -1.0;
        bool print = false;
    } ex;
    auto* exp_cmd = app.add_subcommand("experiment", "initialization-vs-training protocol");
    exp_cmd->add_option("--case", ex.exp_case, "single | double | swiss")->required();
    exp_cmd->add_option("--outdir", ex.outdir, "artifact directory")->required();
    exp_cmd->add_option("--config", ex.config, "config JSON mirroring the experiment fields");
    auto* seed_opt = exp_cmd->add_option("--seed", ex.seed, "base seed");
    exp_cmd->add_option("--train-n", ex.train_n, "training samples");
    exp_cmd->add_option("--test-n", ex.test_n, "test samples");
    exp_cmd->add_option("--grid-n", ex.grid_n, "raster resolution");
    exp_cmd->add_option("--epochs", ex.epochs, "training epochs");
    exp_cmd->add_option("--batch", ex.batch, "mini-batch size");
    exp_cmd->add_option("--lr", ex.lr, "learning rate");
    exp_cmd->add_option("--hidden", ex.hidden, "comma-separated hidden widths");
    exp_cmd->add_option("--inits", ex.inits, "comma-separated init schemes");
    exp_cmd->add_flag("--print-config", ex.print, "echo resolved config and exit");
    exp_cmd->callback([&] {
        ExperimentConfig cfg = default_config(ex.exp_case);
        if (!ex.config.empty()) apply_config_json(cfg, load_json(ex.config));
        if (seed_opt->count() > 0) cfg.seed = ex.seed;
        if (ex.train_n >= 0) cfg.train_n = ex.train_n;
        if (ex.test_n >= 0) cfg.test_n = ex.test_n;
        if (ex.grid_n >= 0) cfg.grid_n = ex.grid_n;
        if (ex.epochs >= 0) cfg.train_cfg.epochs = ex.epochs;
        if (ex.batch >= 0) cfg.train_cfg.batch_size = ex.batch;
        if (ex.lr >= 0.0) cfg.train_cfg.learning_rate = ex.lr;
        if (!ex.hidden.empty()) cfg.hidden = parse_ints(ex.hidden, "--hidden");
        if (!ex.inits.empty()) cfg.inits = split_list(ex.inits);
        const json cj{{"format_version", 1},
                      {"subcommand", "experiment"},
                      {"case", cfg.experiment_case},
                      {"outdir", ex.outdir},
                      {"seed", cfg.seed},
                      {"train_n", cfg.train_n},
                      {"test_n", cfg.test_n},
                      {"grid_n", cfg.grid_n},
                      {"hidden", cfg.hidden},
                      {"inits", cfg.inits},
                      {"window", window_json(cfg.window)},
                      {"tau", cfg.tau},
                      {"kappa_hidden", cfg.kappa_hidden},
                      {"disk_r", cfg.disk_r},
                      {"c1", json::array({cfg.c1.x, cfg.c1.y})},
                      {"c2", json::array({cfg.c2.x, cfg.c2.y})},
                      {"epochs", cfg.train_cfg.epochs},
                      {"batch", cfg.train_cfg.batch_size},
                      {"lr", cfg.train_cfg.learning_rate},
                      {"swiss",
                       {{"eps", cfg.swiss_eps},
                        {"voxel_ratio", cfg.swiss_voxel_ratio},
                        {"budget", cfg.swiss_budget},
                        {"sides", cfg.swiss_sides},
                        {"kappa", cfg.swiss_kappa},
                        {"lambda", cfg.swiss_lambda},
                        {"alpha", cfg.swiss_alpha},
                        {"tau", cfg.swiss_tau},
                        {"eta", cfg.swiss_eta},
                        {"delta", cfg.swiss_delta},
                        {"spiral_a", cfg.spiral.a},
                        {"spiral_b", cfg.spiral.b},
                        {"spiral_theta0", cfg.spiral.theta0},
                        {"spiral_theta1", cfg.spiral.theta1},
                        {"spiral_w", cfg.spiral.w}}}};
        if (ex.print) return emit(cj);
        size_t rows = 0;
        if (cfg.experiment_case == "swiss") {
            run_swiss(cfg, ex.outdir);
            rows = 1;
        } else {
            rows = run_experiment(cfg, ex.outdir).size();
        }
        emit(json{{"format_version", 1}, {"outdir", ex.outdir}, {"rows", rows}});
    });

    // ---- dispatch -------------------------------------------------------------
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.push_back("tropinit");
    for (const std::string& a : args) storage.push_back(a);
    std::vector<const char*> argv;
    argv.reserve(storage.size());
    for (const std::string& s : storage) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ERROR E_FLAG: " << e.what() << "\n";
        return 1;
    } catch (const numeric_error& e) {
        std::cerr << "ERROR E_NUMERIC: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ERROR E_INPUT: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

}  // namespace tropinit
