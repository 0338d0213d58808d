#pragma once

#include <optional>
#include <vector>

#include "tropinit/common.hpp"

namespace tropinit {

/// One max-plus monomial c + <u, x>; a missing exponent acts as coefficient
/// -infinity, so absence encodes the tropical zero.
struct Monomial {
    std::vector<int> u;
    double c = 0.0;
};

/// Finite max-plus polynomial F(x) = max_k { c_k + <u_k, x> }.
/// Monomials are stored in lexicographic exponent order; duplicate exponents
/// are merged keeping the larger coefficient (max-plus addition).
class TropicalPolynomial {
public:
    TropicalPolynomial(int dim, std::vector<Monomial> monomials);

    int dim() const { return dim_; }
    const std::vector<Monomial>& monomials() const { return ms_; }
    size_t size() const { return ms_.size(); }

private:
    int dim_;
    std::vector<Monomial> ms_;
};

double trop_eval(const TropicalPolynomial& f, const std::vector<double>& x);

/// Difference of two max-plus polynomials U(x) - V(x) (a tropical quotient).
double trop_rational_eval(const TropicalPolynomial& u, const TropicalPolynomial& v,
                          const std::vector<double>& x);

/// True when at least two monomials attain the max at x within tol, i.e. x
/// lies on the non-differentiability locus of F.
bool on_hypersurface(const TropicalPolynomial& f, const std::vector<double>& x, double tol = 1e-9);

struct LatticePoint {
    int x = 0, y = 0;
    bool operator==(const LatticePoint&) const = default;
};

/// Vertices of the convex hull of the exponent set. For dim 2 the result is
/// ordered counter-clockwise (collinear interior points dropped); for higher
/// dimensions it is the unordered vertex set.
std::vector<std::vector<int>> newton_polytope(const TropicalPolynomial& f);

/// Regular subdivision of the Newton polygon induced by lifting each
/// exponent u_k to height c_k and projecting the upper faces of the hull.
struct DualSubdivision {
    std::vector<std::vector<LatticePoint>> cells;  ///< CCW lattice polygons (2-cells)
    std::vector<LatticePoint> newton;              ///< CCW hull of the support
    int interior_edges = 0;                        ///< edges shared by two cells
    int boundary_edges = 0;                        ///< cell edges on the hull boundary
    int used_points = 0;                           ///< distinct cell vertices
    bool degenerate = false;   ///< support not full-dimensional (point/segment)
    bool perturbed = false;    ///< coefficients nudged to restore a consistent tiling
};

DualSubdivision dual_subdivision(const TropicalPolynomial& f);

/// The planar curve Trop(F) as a polyhedral complex, enumerated from the
/// primal side only: vertices from exact pairwise/triple tie systems, 1-cells
/// from per-pair dominance intervals, regions from the 1-cell winner sets.
struct TropicalCurve {
    struct Vertex {
        Vec2 pos;
        std::vector<int> argmax;  ///< monomial indices tied at the max
    };
    struct Edge {
        Vec2 p0, p1;
    };
    struct Ray {
        Vec2 origin, dir;
    };
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;  ///< bounded 1-cells
    std::vector<Ray> rays;    ///< unbounded 1-cells
    int full_lines = 0;       ///< 1-cells unbounded in both directions
    int regions = 0;          ///< connected components of the complement
    std::vector<int> region_winners;  ///< monomial index winning each region
    bool degenerate = false;  ///< a 1-cell interior carries a 3-way tie
};

TropicalCurve trop_curve(const TropicalPolynomial& f, double tol = 1e-9);

/// Side-by-side counts for the curve/subdivision correspondence:
/// vertices ~ 2-cells, bounded edges ~ interior edges, rays ~ used boundary
/// edges, complement regions ~ used lattice points.
struct DualityReport {
    int curve_vertices = 0, curve_edges = 0, curve_rays = 0, curve_regions = 0;
    int cells = 0, interior_edges = 0, boundary_edges = 0, used_points = 0;
    bool degenerate = false;
    bool all_vertices_in_window = true;
    bool counts_match() const {
        return curve_vertices == cells && curve_edges == interior_edges &&
               curve_rays == boundary_edges && curve_regions == used_points;
    }
};

/// The window bounds only the reported in-window flag (and rasters downstream);
/// counts themselves are exact and global. grid_n controls the density of the
/// fallback region probe and must be at least 64.
DualityReport duality_report(const TropicalPolynomial& f, const Box& window, int grid_n);

}  // namespace tropinit
