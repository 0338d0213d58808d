#include "tropinit/tropical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace tropinit {

namespace {

constexpr double kGeomTol = 1e-9;

int64_t icross(LatticePoint o, LatticePoint a, LatticePoint b) {
    return int64_t(a.x - o.x) * (b.y - o.y) - int64_t(a.y - o.y) * (b.x - o.x);
}

/// Strict CCW convex hull of lattice points (collinear interior points dropped).
std::vector<LatticePoint> hull2d(std::vector<LatticePoint> pts) {
    std::sort(pts.begin(), pts.end(), [](LatticePoint a, LatticePoint b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<LatticePoint> h(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && icross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    const size_t t = k + 1;
    for (size_t i = n - 1; i-- > 0;) {  // upper chain
        while (k >= t && icross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

int64_t doubled_area(const std::vector<LatticePoint>& poly) {
    int64_t s = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        s += int64_t(p.x) * q.y - int64_t(p.y) * q.x;
    }
    return s;
}

std::vector<double> values_at(const TropicalPolynomial& f, double x, double y) {
    std::vector<double> v;
    v.reserve(f.size());
    for (const auto& m : f.monomials()) v.push_back(m.c + m.u[0] * x + m.u[1] * y);
    return v;
}

/// Phase-1 simplex feasibility for: sum_l lam_l v_l = target, sum lam = 1,
/// lam >= 0. Bland's rule, small dense tableau; plenty for a few dozen points.
bool in_convex_hull(const std::vector<std::vector<int>>& v, const std::vector<int>& target) {
    const size_t m = v.size();
    if (m == 0) return false;
    const size_t d = target.size();
    const size_t rows = d + 1, cols = m + rows;  // lambdas then artificials
    std::vector<std::vector<double>> t(rows + 1, std::vector<double>(cols + 1, 0.0));
    for (size_t r = 0; r < rows; ++r) {
        double rhs = r < d ? double(target[r]) : 1.0;
        for (size_t j = 0; j < m; ++j) t[r][j] = r < d ? double(v[j][r]) : 1.0;
        if (rhs < 0) {
            for (size_t j = 0; j < m; ++j) t[r][j] = -t[r][j];
            rhs = -rhs;
        }
        t[r][m + r] = 1.0;
        t[r][cols] = rhs;
    }
    std::vector<size_t> basis(rows);
    for (size_t r = 0; r < rows; ++r) {
        basis[r] = m + r;
        for (size_t j = 0; j <= cols; ++j) t[rows][j] -= t[r][j];  // minimize artificial sum
    }
    for (int iter = 0; iter < 20000; ++iter) {
        size_t piv = cols;
        for (size_t j = 0; j < cols; ++j)
            if (t[rows][j] < -1e-9) {
                piv = j;
                break;
            }
        if (piv == cols) break;
        size_t prow = rows;
        double best = std::numeric_limits<double>::infinity();
        for (size_t r = 0; r < rows; ++r) {
            if (t[r][piv] > 1e-12) {
                const double ratio = t[r][cols] / t[r][piv];
                if (prow == rows || ratio < best - 1e-15 ||
                    (std::abs(ratio - best) <= 1e-15 && basis[r] < basis[prow])) {
                    best = ratio;
                    prow = r;
                }
            }
        }
        if (prow == rows) break;
        const double p = t[prow][piv];
        for (size_t j = 0; j <= cols; ++j) t[prow][j] /= p;
        for (size_t r = 0; r <= rows; ++r) {
            if (r == prow) continue;
            const double f = t[r][piv];
            if (f == 0.0) continue;
            for (size_t j = 0; j <= cols; ++j) t[r][j] -= f * t[prow][j];
        }
        basis[prow] = piv;
    }
    return std::abs(t[rows][cols]) <= 1e-7;
}

}  // namespace

TropicalPolynomial::TropicalPolynomial(int dim, std::vector<Monomial> monomials) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("tropical polynomial: dimension must be positive");
    if (monomials.empty()) throw std::invalid_argument("tropical polynomial: needs at least one monomial");
    for (const auto& m : monomials) {
        if (static_cast<int>(m.u.size()) != dim)
            throw std::invalid_argument("tropical polynomial: exponent dimension mismatch");
        if (!std::isfinite(m.c)) throw std::invalid_argument("tropical polynomial: non-finite coefficient");
    }
    std::sort(monomials.begin(), monomials.end(),
              [](const Monomial& a, const Monomial& b) { return a.u < b.u; });
    for (auto& m : monomials) {
        if (!ms_.empty() && ms_.back().u == m.u)
            ms_.back().c = std::max(ms_.back().c, m.c);  // max-plus merge of duplicates
        else
            ms_.push_back(std::move(m));
    }
}

double trop_eval(const TropicalPolynomial& f, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != f.dim())
        throw std::invalid_argument("trop_eval: point dimension mismatch");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& m : f.monomials()) {
        double v = m.c;
        for (int i = 0; i < f.dim(); ++i) v += m.u[i] * x[i];
        best = std::max(best, v);
    }
    return best;
}

double trop_rational_eval(const TropicalPolynomial& u, const TropicalPolynomial& v,
                          const std::vector<double>& x) {
    return trop_eval(u, x) - trop_eval(v, x);
}

bool on_hypersurface(const TropicalPolynomial& f, const std::vector<double>& x, double tol) {
    if (static_cast<int>(x.size()) != f.dim())
        throw std::invalid_argument("on_hypersurface: point dimension mismatch");
    const double vmax = trop_eval(f, x);
    const double eps = tol * std::max(1.0, std::abs(vmax));
    int hits = 0;
    for (const auto& m : f.monomials()) {
        double v = m.c;
        for (int i = 0; i < f.dim(); ++i) v += m.u[i] * x[i];
        if (v >= vmax - eps && ++hits >= 2) return true;
    }
    return false;
}

std::vector<std::vector<int>> newton_polytope(const TropicalPolynomial& f) {
    if (f.dim() == 2) {
        std::vector<LatticePoint> pts;
        pts.reserve(f.size());
        for (const auto& m : f.monomials()) pts.push_back({m.u[0], m.u[1]});
        std::vector<std::vector<int>> out;
        for (const auto& p : hull2d(pts)) out.push_back({p.x, p.y});
        return out;
    }
    // Higher dimensions: just the hull's vertex set, no face structure.
    std::vector<std::vector<int>> out;
    const auto& ms = f.monomials();
    for (size_t k = 0; k < ms.size(); ++k) {
        std::vector<std::vector<int>> others;
        for (size_t l = 0; l < ms.size(); ++l)
            if (l != k) others.push_back(ms[l].u);
        if (!in_convex_hull(others, ms[k].u)) out.push_back(ms[k].u);
    }
    return out;
}

namespace {

DualSubdivision dual_subdivision_impl(const TropicalPolynomial& f, const std::vector<double>& coeff,
                                      bool perturbed) {
    DualSubdivision out;
    out.perturbed = perturbed;
    const auto& ms = f.monomials();
    const size_t m = ms.size();
    std::vector<LatticePoint> exps(m);
    for (size_t k = 0; k < m; ++k) exps[k] = {ms[k].u[0], ms[k].u[1]};
    out.newton = hull2d(exps);

    double scale = 1.0;
    for (double c : coeff) scale = std::max(scale, std::abs(c));
    const double tol = kGeomTol * scale;

    if (out.newton.size() < 3) {
        // Point or segment support: no planar subdivision. Report the 1-d
        // upper-envelope breakpoints as used points and flag the result.
        out.degenerate = true;
        out.cells.push_back(out.newton);
        if (m == 1) {
            out.used_points = 1;
            return out;
        }
        const LatticePoint a = out.newton.front(), b = out.newton.back();
        const double len2 = double(b.x - a.x) * (b.x - a.x) + double(b.y - a.y) * (b.y - a.y);
        auto param = [&](LatticePoint p) {
            return (double(p.x - a.x) * (b.x - a.x) + double(p.y - a.y) * (b.y - a.y)) / len2;
        };
        int used = 0;
        for (size_t k = 0; k < m; ++k) {
            const double tk = param(exps[k]);
            bool vertex = true;
            for (size_t i = 0; i < m && vertex; ++i)
                for (size_t j = i + 1; j < m && vertex; ++j) {
                    if (i == k || j == k) continue;
                    const double ti = param(exps[i]), tj = param(exps[j]);
                    if (std::min(ti, tj) > tk - 1e-12 || std::max(ti, tj) < tk + 1e-12) continue;
                    const double lam = (tk - ti) / (tj - ti);
                    if ((1 - lam) * coeff[i] + lam * coeff[j] >= coeff[k] - tol) vertex = false;
                }
            if (vertex) ++used;
        }
        out.used_points = used;
        return out;
    }

    // If all lifted points share one non-vertical plane, the subdivision is
    // the Newton polygon itself.
    {
        size_t pj = 0, pk = 0;
        int64_t det = 0;
        for (size_t j = 1; j < m && det == 0; ++j)
            for (size_t k = j + 1; k < m; ++k) {
                det = icross(exps[0], exps[j], exps[k]);
                if (det != 0) {
                    pj = j;
                    pk = k;
                    break;
                }
            }
        if (det != 0) {
            const double dj = coeff[pj] - coeff[0], dk = coeff[pk] - coeff[0];
            const double a1 =
                (dj * (exps[pk].y - exps[0].y) - dk * (exps[pj].y - exps[0].y)) / double(det);
            const double a2 =
                (dk * (exps[pj].x - exps[0].x) - dj * (exps[pk].x - exps[0].x)) / double(det);
            const double g = coeff[0] - a1 * exps[0].x - a2 * exps[0].y;
            bool flat = true;
            for (size_t l = 0; l < m && flat; ++l)
                flat = std::abs(coeff[l] - (a1 * exps[l].x + a2 * exps[l].y + g)) <= tol;
            if (flat) {
                out.cells.push_back(out.newton);
                out.used_points = static_cast<int>(out.newton.size());
                out.boundary_edges = static_cast<int>(out.newton.size());
                return out;
            }
        }
    }

    // Enumerate the supporting plane of every non-collinear exponent triple;
    // a plane with all lifted points on or below it carries an upper face,
    // whose cell is the hull of the points lying on the plane.
    std::set<std::vector<size_t>> seen;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            for (size_t k = j + 1; k < m; ++k) {
                const int64_t det = icross(exps[i], exps[j], exps[k]);
                if (det == 0) continue;
                const double dj = coeff[j] - coeff[i], dk = coeff[k] - coeff[i];
                const double a1 =
                    (dj * (exps[k].y - exps[i].y) - dk * (exps[j].y - exps[i].y)) / double(det);
                const double a2 =
                    (dk * (exps[j].x - exps[i].x) - dj * (exps[k].x - exps[i].x)) / double(det);
                const double g = coeff[i] - a1 * exps[i].x - a2 * exps[i].y;
                bool upper = true;
                std::vector<size_t> on;
                for (size_t l = 0; l < m; ++l) {
                    const double gap = coeff[l] - (a1 * exps[l].x + a2 * exps[l].y + g);
                    if (gap > tol) {
                        upper = false;
                        break;
                    }
                    if (gap >= -tol) on.push_back(l);
                }
                if (!upper) continue;
                if (seen.insert(on).second) {
                    std::vector<LatticePoint> cellpts;
                    for (size_t l : on) cellpts.push_back(exps[l]);
                    auto cell = hull2d(cellpts);
                    if (cell.size() >= 3) out.cells.push_back(std::move(cell));
                }
            }

    // Tiling checks: cell areas must sum to the support area and each edge
    // must belong to one or two cells.
    int64_t area = 0;
    for (const auto& c : out.cells) area += doubled_area(c);
    bool consistent = area == doubled_area(out.newton);

    std::map<std::array<int, 4>, int> edge_count;
    std::set<std::pair<int, int>> verts;
    for (const auto& c : out.cells)
        for (size_t i = 0; i < c.size(); ++i) {
            LatticePoint p = c[i], q = c[(i + 1) % c.size()];
            verts.insert({p.x, p.y});
            if (std::pair(q.x, q.y) < std::pair(p.x, p.y)) std::swap(p, q);
            ++edge_count[{p.x, p.y, q.x, q.y}];
        }
    for (const auto& [e, n] : edge_count) {
        (void)e;
        if (n == 1)
            ++out.boundary_edges;
        else if (n == 2)
            ++out.interior_edges;
        else
            consistent = false;
    }
    out.used_points = static_cast<int>(verts.size());

    if (!consistent) {
        if (perturbed) throw numeric_error("dual_subdivision: inconsistent tiling after perturbation");
        // Deterministic index-ordered nudge breaking the coefficient ties
        // behind the ambiguous face structure.
        std::vector<double> c2(coeff);
        for (size_t k = 0; k < m; ++k) c2[k] += 1e-7 * scale * double(k + 1);
        return dual_subdivision_impl(f, c2, true);
    }
    return out;
}

}  // namespace

DualSubdivision dual_subdivision(const TropicalPolynomial& f) {
    if (f.dim() != 2) throw std::invalid_argument("dual_subdivision: planar polynomials only");
    std::vector<double> coeff;
    for (const auto& m : f.monomials()) coeff.push_back(m.c);
    return dual_subdivision_impl(f, coeff, false);
}

TropicalCurve trop_curve(const TropicalPolynomial& f, double tol) {
    if (f.dim() != 2) throw std::invalid_argument("trop_curve: planar polynomials only");
    TropicalCurve out;
    const auto& ms = f.monomials();
    const size_t m = ms.size();
    if (m == 1) {
        out.regions = 1;
        out.region_winners.push_back(0);
        return out;
    }
    double scale = 1.0;
    for (const auto& mm : ms) scale = std::max(scale, std::abs(mm.c));
    const double vtol = 10.0 * tol * scale;

    // Vertices: exact 2x2 tie systems over affinely independent triples,
    // filtered by attainment of the global max.
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            for (size_t k = j + 1; k < m; ++k) {
                const int64_t a11 = ms[i].u[0] - ms[j].u[0], a12 = ms[i].u[1] - ms[j].u[1];
                const int64_t a21 = ms[i].u[0] - ms[k].u[0], a22 = ms[i].u[1] - ms[k].u[1];
                const int64_t det = a11 * a22 - a12 * a21;
                if (det == 0) continue;
                const double b1 = ms[j].c - ms[i].c, b2 = ms[k].c - ms[i].c;
                const double x = (b1 * a22 - b2 * a12) / double(det);
                const double y = (a11 * b2 - a21 * b1) / double(det);
                const auto v = values_at(f, x, y);
                const double vmax = *std::max_element(v.begin(), v.end());
                const double eps = vtol * std::max(1.0, std::abs(vmax));
                if (v[i] < vmax - eps) continue;
                bool fresh = true;
                for (const auto& vert : out.vertices)
                    if (std::abs(vert.pos.x - x) <= 1e-6 && std::abs(vert.pos.y - y) <= 1e-6) {
                        fresh = false;
                        break;
                    }
                if (!fresh) continue;
                TropicalCurve::Vertex vert;
                vert.pos = {x, y};
                for (size_t l = 0; l < m; ++l)
                    if (v[l] >= vmax - eps) vert.argmax.push_back(static_cast<int>(l));
                out.vertices.push_back(std::move(vert));
            }

    // 1-cells: for each pair, intersect the per-monomial dominance
    // constraints along the pair's tie line.
    struct Cell1 {
        int nx, ny;    // gcd-normalized normal with canonical sign
        double dist;   // signed perpendicular offset of the line
        double lo, hi; // parameter interval along rot90 of the unit normal
        size_t i, j;
    };
    std::vector<Cell1> cells;
    const double inf = std::numeric_limits<double>::infinity();
    std::set<size_t> winners;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j) {
            int nx = ms[i].u[0] - ms[j].u[0], ny = ms[i].u[1] - ms[j].u[1];
            double rhs = ms[j].c - ms[i].c;  // line <n,x> = rhs
            if (nx < 0 || (nx == 0 && ny < 0)) {
                nx = -nx;
                ny = -ny;
                rhs = -rhs;
            }
            const double nlen = std::hypot(double(nx), double(ny));
            const Vec2 nhat{nx / nlen, ny / nlen};
            const Vec2 p0 = (rhs / nlen) * nhat;
            double lo = -inf, hi = inf;
            bool empty = false;
            for (size_t l = 0; l < m && !empty; ++l) {
                if (l == i || l == j) continue;
                const int64_t sint =
                    int64_t(nx) * (ms[i].u[1] - ms[l].u[1]) - int64_t(ny) * (ms[i].u[0] - ms[l].u[0]);
                const double c0 = (ms[i].u[0] - ms[l].u[0]) * p0.x + (ms[i].u[1] - ms[l].u[1]) * p0.y +
                                  ms[i].c - ms[l].c;
                if (sint == 0) {
                    // l rides in lockstep with the pair along this line
                    if (c0 < -vtol)
                        empty = true;
                    else if (c0 <= vtol)
                        out.degenerate = true;  // exact 3-way tie on a 1-cell
                    continue;
                }
                const double tb = -c0 * nlen / double(sint);
                if (sint > 0)
                    lo = std::max(lo, tb);
                else
                    hi = std::min(hi, tb);
            }
            if (empty || !(hi - lo > 1e-7)) continue;
            const int g = std::gcd(std::abs(nx), std::abs(ny));
            cells.push_back({nx / g, ny / g, rhs / nlen, lo, hi, i, j});
            winners.insert(i);
            winners.insert(j);
        }

    // One line can carry several 1-cells from different pairs. Cells that
    // merely touch at a point are separated by a higher-order vertex and stay
    // distinct; intervals overlapping with positive length are the same cell
    // seen through a lockstep tie and collapse to one.
    std::sort(cells.begin(), cells.end(), [](const Cell1& a, const Cell1& b) {
        if (a.nx != b.nx) return a.nx < b.nx;
        if (a.ny != b.ny) return a.ny < b.ny;
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.lo < b.lo;
    });
    size_t idx = 0;
    while (idx < cells.size()) {
        double lo = cells[idx].lo, hi = cells[idx].hi;
        size_t end = idx + 1;
        while (end < cells.size() && cells[end].nx == cells[idx].nx &&
               cells[end].ny == cells[idx].ny &&
               std::abs(cells[end].dist - cells[idx].dist) <= 1e-9 && cells[end].lo < hi - 1e-7) {
            out.degenerate = true;
            hi = std::max(hi, cells[end].hi);
            ++end;
        }
        const double nlen = std::hypot(double(cells[idx].nx), double(cells[idx].ny));
        const Vec2 nhat{cells[idx].nx / nlen, cells[idx].ny / nlen};
        const Vec2 dir{-nhat.y, nhat.x};
        const Vec2 p0 = cells[idx].dist * nhat;
        const bool lo_inf = std::isinf(lo), hi_inf = std::isinf(hi);
        if (lo_inf && hi_inf)
            ++out.full_lines;
        else if (lo_inf || hi_inf) {
            const double t0 = lo_inf ? hi : lo;
            out.rays.push_back({p0 + t0 * dir, lo_inf ? Vec2{-dir.x, -dir.y} : dir});
        } else {
            out.edges.push_back({p0 + lo * dir, p0 + hi * dir});
        }
        idx = end;
    }

    // A region of the complement is owned by a monomial that strictly wins on
    // it; each such region borders some 1-cell, whose tied pair are exactly
    // the winners on its two sides. So the winner set of the pair cells
    // enumerates the regions.
    for (size_t w : winners) out.region_winners.push_back(static_cast<int>(w));
    out.regions = winners.empty() ? 1 : static_cast<int>(winners.size());
    return out;
}

DualityReport duality_report(const TropicalPolynomial& f, const Box& window, int grid_n) {
    if (f.dim() != 2) throw std::invalid_argument("duality_report: planar polynomials only");
    if (grid_n < 64) throw std::invalid_argument("duality_report: grid_n must be at least 64");
    DualityReport rep;
    const auto curve = trop_curve(f);
    const auto sub = dual_subdivision(f);
    rep.curve_vertices = static_cast<int>(curve.vertices.size());
    rep.curve_edges = static_cast<int>(curve.edges.size());
    rep.curve_rays = static_cast<int>(curve.rays.size());
    rep.curve_regions = curve.regions;
    for (const auto& c : sub.cells)
        if (c.size() >= 3) ++rep.cells;
    rep.interior_edges = sub.interior_edges;
    rep.boundary_edges = sub.boundary_edges;
    rep.used_points = sub.used_points;
    rep.degenerate = curve.degenerate || sub.degenerate || curve.full_lines > 0;
    for (const auto& v : curve.vertices)
        if (!window.contains(v.pos)) rep.all_vertices_in_window = false;

    // Cross-route check: every strict winner sampled on the window grid must
    // already be accounted for by the enumerated 1-cells.
    std::set<int> known(curve.region_winners.begin(), curve.region_winners.end());
    for (int gi = 0; gi < grid_n; ++gi)
        for (int gj = 0; gj < grid_n; ++gj) {
            const double x = window.x0 + (gi + 0.5) * window.width() / grid_n;
            const double y = window.y0 + (gj + 0.5) * window.height() / grid_n;
            const auto v = values_at(f, x, y);
            size_t best = 0;
            for (size_t l = 1; l < v.size(); ++l)
                if (v[l] > v[best]) best = l;
            bool strict = true;
            for (size_t l = 0; l < v.size(); ++l)
                if (l != best && v[l] >= v[best] - 1e-12 * std::max(1.0, std::abs(v[best])))
                    strict = false;
            if (strict && !known.count(static_cast<int>(best))) rep.degenerate = true;
        }
    return rep;
}

}  // namespace tropinit
