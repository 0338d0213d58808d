#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tropinit {

/// Raised when a computation fails numerically (as opposed to bad input).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a training run produces a non-finite loss.
struct train_abort : numeric_error {
    int epoch;
    int batch;
    train_abort(int e, int b, const std::string& msg) : numeric_error(msg), epoch(e), batch(b) {}
};

struct Vec2 {
    double x = 0.0, y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Box {
    double x0 = -2.0, x1 = 2.0, y0 = -2.0, y1 = 2.0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

/// Logistic with the argument clamped to +-37. Past that point 1 + exp(-t)
/// rounds to 1 in double precision anyway, so saturated gate sums stay exact.
inline double logistic(double t) {
    if (t > 37.0) t = 37.0;
    if (t < -37.0) t = -37.0;
    return 1.0 / (1.0 + std::exp(-t));
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

/// Row-major dense matrix, sized once and indexed directly.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;
    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
    double* row(int i) { return a.data() + static_cast<size_t>(i) * cols; }
    const double* row(int i) const { return a.data() + static_cast<size_t>(i) * cols; }
};

/// C = A * B^T, A is n x k, B is m x k.
inline Mat mul_abt(const Mat& A, const Mat& B) {
    Mat C(A.rows, B.rows);
    for (int i = 0; i < A.rows; ++i) {
        const double* ai = A.row(i);
        double* ci = C.row(i);
        for (int j = 0; j < B.rows; ++j) {
            const double* bj = B.row(j);
            double s = 0.0;
            for (int p = 0; p < A.cols; ++p) s += ai[p] * bj[p];
            ci[j] = s;
        }
    }
    return C;
}

/// C = A^T * B, A is n x k, B is n x m.
inline Mat mul_atb(const Mat& A, const Mat& B) {
    Mat C(A.cols, B.cols);
    for (int i = 0; i < A.rows; ++i) {
        const double* ai = A.row(i);
        const double* bi = B.row(i);
        for (int p = 0; p < A.cols; ++p) {
            double* cp = C.row(p);
            const double w = ai[p];
            if (w == 0.0) continue;
            for (int j = 0; j < B.cols; ++j) cp[j] += w * bi[j];
        }
    }
    return C;
}

/// C = A * B, A is n x k, B is k x m.
inline Mat mul_ab(const Mat& A, const Mat& B) {
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i) {
        const double* ai = A.row(i);
        double* ci = C.row(i);
        for (int p = 0; p < A.cols; ++p) {
            const double w = ai[p];
            if (w == 0.0) continue;
            const double* bp = B.row(p);
            for (int j = 0; j < B.cols; ++j) ci[j] += w * bp[j];
        }
    }
    return C;
}

/// splitmix64 finalizer; used to derive independent sub-seeds from a base
/// seed plus a stable tag, so adding rows/schemes never shifts existing ones.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t derive_seed(uint64_t base, std::string_view tag) { return mix64(base ^ fnv1a64(tag)); }

/// mt19937_64 with hand-rolled uniform/normal transforms so the generated
/// sequence depends only on the engine, not on library distribution details.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 1e-300) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    size_t index(size_t n) { return static_cast<size_t>(eng_() % n); }

    /// Fisher-Yates over 0..n-1.
    std::vector<size_t> permutation(size_t n) {
        std::vector<size_t> p(n);
        for (size_t i = 0; i < n; ++i) p[i] = i;
        for (size_t i = 0; i + 1 < n; ++i) {
            const size_t j = i + index(n - i);
            std::swap(p[i], p[j]);
        }
        return p;
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace tropinit
