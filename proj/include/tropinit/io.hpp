#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "tropinit/network.hpp"
#include "tropinit/tropical.hpp"

namespace tropinit {

/// All JSON documents carry "format_version": 1 and reject other versions.

nlohmann::json spec_to_json(const NetworkSpec& spec);
NetworkSpec spec_from_json(const nlohmann::json& j);

nlohmann::json poly_to_json(const TropicalPolynomial& f);
TropicalPolynomial poly_from_json(const nlohmann::json& j);

nlohmann::json cover_to_json(const BallCover& cover);
BallCover cover_from_json(const nlohmann::json& j);

/// Polygon input document: {"format_version": 1, "vertices": [[x, y], ...]}.
std::vector<Vec2> vertices_from_json(const nlohmann::json& j);
/// Union input document: {"format_version": 1, "components": [{"vertices": ...}, ...]}.
std::vector<std::vector<Vec2>> components_from_json(const nlohmann::json& j);

nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

/// Dataset CSV: header x1,...,xd,y with labels in {0,1}.
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Dataset& ds);

/// Loss curve CSV: epoch,train_bce and a val_bce column when present.
void write_curve_csv(const std::string& path, const LossCurve& curve);

struct Segment {
    Vec2 a, b;
};

/// Level-set segments of a probability grid (row 0 = window top, pixel
/// centers), saddles resolved by the cell-center average.
std::vector<Segment> marching_squares(const Mat& vals, const Box& window, double level);

void write_contour_csv(const std::string& path, const std::vector<Segment>& segs);

/// 8-bit grayscale P6 raster of a probability grid (row 0 = image top).
void write_ppm(const std::string& path, const Mat& vals);

void write_text_file(const std::string& path, const std::string& content);
void ensure_dir(const std::string& path);

}  // namespace tropinit
