#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace shg {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846264338327950288;
inline constexpr double TWO_PI = 2.0 * PI;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

/// Uniform node-centered lattice. Node (i,j) sits at (x0 + i*h, y0 + j*h).
struct Grid2D {
    double x0 = 0.0;
    double y0 = 0.0;
    double h = 1.0;
    int nx = 0;
    int ny = 0;

    std::size_t size() const { return std::size_t(nx) * std::size_t(ny); }
    std::size_t idx(int i, int j) const { return std::size_t(i) + std::size_t(nx) * std::size_t(j); }
    double x(int i) const { return x0 + i * h; }
    double y(int j) const { return y0 + j * h; }
    Point2 node(int i, int j) const { return {x(i), y(j)}; }
    double xmax() const { return x0 + (nx - 1) * h; }
    double ymax() const { return y0 + (ny - 1) * h; }

    bool contains(Point2 p) const {
        return p.x >= x0 - 1e-12 && p.x <= xmax() + 1e-12 &&
               p.y >= y0 - 1e-12 && p.y <= ymax() + 1e-12;
    }

    /// Nearest node indices to a physical point.
    void nearest(Point2 p, int& i, int& j) const {
        i = int(std::lround((p.x - x0) / h));
        j = int(std::lround((p.y - y0) / h));
        if (i < 0) i = 0;
        if (j < 0) j = 0;
        if (i >= nx) i = nx - 1;
        if (j >= ny) j = ny - 1;
    }
};

/// Bilinear interpolation of node values over a grid; throws if p is outside
/// the grid bounding box.
template <class T>
T bilinear(const Grid2D& grid, const std::vector<T>& values, Point2 p) {
    const double fx = (p.x - grid.x0) / grid.h;
    const double fy = (p.y - grid.y0) / grid.h;
    if (fx < -1e-9 || fy < -1e-9 || fx > grid.nx - 1 + 1e-9 || fy > grid.ny - 1 + 1e-9)
        throw std::out_of_range("bilinear: point outside sampled field");
    int i = std::min(int(fx), grid.nx - 2);
    int j = std::min(int(fy), grid.ny - 2);
    if (i < 0) i = 0;
    if (j < 0) j = 0;
    const double tx = fx - i;
    const double ty = fy - j;
    const T f00 = values[grid.idx(i, j)], f10 = values[grid.idx(i + 1, j)];
    const T f01 = values[grid.idx(i, j + 1)], f11 = values[grid.idx(i + 1, j + 1)];
    return f00 * ((1 - tx) * (1 - ty)) + f10 * (tx * (1 - ty)) + f01 * ((1 - tx) * ty) +
           f11 * (tx * ty);
}

/// Scalar or complex field sampled on a Grid2D, row-major in j (y slowest).
template <class T>
struct Field {
    Grid2D grid;
    std::vector<T> v;

    Field() = default;
    explicit Field(const Grid2D& g, T fill = T{}) : grid(g), v(g.size(), fill) {}

    T& at(int i, int j) { return v[grid.idx(i, j)]; }
    const T& at(int i, int j) const { return v[grid.idx(i, j)]; }

    T interp(Point2 p) const { return bilinear(grid, v, p); }
};

using RealField = Field<double>;
using ComplexField = Field<cplx>;

}  // namespace shg
