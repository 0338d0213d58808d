#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tropinit/common.hpp"

namespace tropinit {

/// Closed half-space {x : <u,x> <= h} with unit outward normal.
struct Facet {
    std::vector<double> u;
    double h = 0.0;
};

/// Intersection of half-spaces in R^dim.
struct ConvexComponent {
    std::vector<Facet> facets;
    int dim = 2;
    bool bounded = true;
};

struct Ball {
    std::vector<double> c;
    double r = 0.0;
};

struct BallCover {
    std::vector<Ball> balls;
    int dim = 2;
};

/// Outward facet normals and supports of a strictly convex CCW polygon.
/// Rejects CW order and collinear triples, naming the offending vertex.
ConvexComponent polygon_facets(const std::vector<Vec2>& vertices);

/// Circumscribed m-facet polytope of the ball B(c, r) in dimension d.
/// d=2 uses exact regular angles, d=3 a Fibonacci sphere, d>=4 a seeded
/// uniform sphere sample. Supports are h = <u,c> + r. Requires m >= d+1.
ConvexComponent ball_polytope(const std::vector<double>& c, double r, int m, int d,
                              uint64_t seed = 0);

/// Exact Hausdorff distance r(sec(pi/m) - 1) between a disk of radius r and
/// its circumscribed regular m-gon.
double circumscribed_error(int m, double r);

/// Facet budget meeting a polygonal tolerance: smallest m for d=2 (scan),
/// the (pi r / eps)^((d-1)/2) count for d >= 3. Never below d+1.
int facet_count_for_tolerance(double r, double eps_poly, int d);

/// Symmetric Hausdorff distance between two indicator sets sampled on an
/// inclusive n x n lattice over the window (n >= 32), via exact grid distance
/// transforms. Upper bias is at most one grid diagonal. Returns nullopt when
/// either set is empty on the grid.
std::optional<double> grid_hausdorff(const std::function<bool(Vec2)>& ind_a,
                                     const std::function<bool(Vec2)>& ind_b, const Box& window,
                                     int n);

/// One representative per occupied voxel cell q = floor(p/v), keeping the
/// first point in input order; output follows first occurrence.
std::vector<Vec2> voxel_downsample(const std::vector<Vec2>& points, double v);

/// Greedy k-center selection. start >= 0 picks that index first; start < 0
/// starts at the point farthest from the centroid. Ties always break to the
/// lowest index. Requires 1 <= k <= |points|.
std::vector<int> farthest_point_sampling(const std::vector<Vec2>& points, int k, int start = -1);

/// Voxel thinning (v = eps * voxel_ratio) followed by centroid-started FPS
/// capped at budget; every ball gets radius eps. Empty input -> nullopt.
std::optional<BallCover> ball_cover_from_positives(const std::vector<Vec2>& points, double eps,
                                                   double voxel_ratio, int budget);

}  // namespace tropinit
