#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace rotwave {

/// Uniform square grid [-R, R]^2 with odd node count per axis, so the
/// origin is a node.
struct Grid2D {
    double half_width = 0.0;
    double dx = 0.0;
    int n = 0;  // nodes per axis

    static Grid2D make(double half_width, double dx) {
        if (!(half_width > 0.0) || !(dx > 0.0))
            throw std::invalid_argument("Grid2D: half_width and dx must be positive");
        int n = static_cast<int>(std::lround(2.0 * half_width / dx)) + 1;
        if (n % 2 == 0 || std::abs((n - 1) * dx - 2.0 * half_width) > 1e-9 * half_width)
            throw std::invalid_argument("Grid2D: 2R/dx must be an even integer");
        return Grid2D{half_width, dx, n};
    }

    double coord(int i) const { return -half_width + i * dx; }
    int idx(int i, int j) const { return j * n + i; }
    int num_nodes() const { return n * n; }
};

/// Grid function with a fixed number of real components per node.
/// Storage is node-major: data[(j*n + i)*ncomp + c].
struct Field {
    Grid2D grid;
    int ncomp = 0;
    std::vector<double> data;

    static Field zeros(const Grid2D& g, int ncomp) {
        Field f;
        f.grid = g;
        f.ncomp = ncomp;
        f.data.assign(static_cast<size_t>(g.num_nodes()) * ncomp, 0.0);
        return f;
    }

    double& at(int i, int j, int c) { return data[(static_cast<size_t>(j) * grid.n + i) * ncomp + c]; }
    double at(int i, int j, int c) const {
        return data[(static_cast<size_t>(j) * grid.n + i) * ncomp + c];
    }

    double magnitude(int i, int j) const {
        double s = 0.0;
        for (int c = 0; c < ncomp; ++c) {
            double v = at(i, j, c);
            s += v * v;
        }
        return std::sqrt(s);
    }
};

/// Complex-valued grid function; same layout as Field.
struct ComplexField {
    Grid2D grid;
    int ncomp = 0;
    std::vector<std::complex<double>> data;

    static ComplexField zeros(const Grid2D& g, int ncomp) {
        ComplexField f;
        f.grid = g;
        f.ncomp = ncomp;
        f.data.assign(static_cast<size_t>(g.num_nodes()) * ncomp, {0.0, 0.0});
        return f;
    }

    std::complex<double>& at(int i, int j, int c) {
        return data[(static_cast<size_t>(j) * grid.n + i) * ncomp + c];
    }
    std::complex<double> at(int i, int j, int c) const {
        return data[(static_cast<size_t>(j) * grid.n + i) * ncomp + c];
    }

    double magnitude(int i, int j) const {
        double s = 0.0;
        for (int c = 0; c < ncomp; ++c) s += std::norm(at(i, j, c));
        return std::sqrt(s);
    }
};

/// Bilinear interpolation of component c at (x, y); out-of-grid points
/// take fill_value.
inline double interpolate(const Field& f, double x, double y, int c, double fill_value = 0.0) {
    const Grid2D& g = f.grid;
    double fx = (x + g.half_width) / g.dx;
    double fy = (y + g.half_width) / g.dx;
    if (fx < 0.0 || fy < 0.0 || fx > g.n - 1 || fy > g.n - 1) return fill_value;
    int i0 = std::min(static_cast<int>(fx), g.n - 2);
    int j0 = std::min(static_cast<int>(fy), g.n - 2);
    double tx = fx - i0, ty = fy - j0;
    return (1 - tx) * (1 - ty) * f.at(i0, j0, c) + tx * (1 - ty) * f.at(i0 + 1, j0, c) +
           (1 - tx) * ty * f.at(i0, j0 + 1, c) + tx * ty * f.at(i0 + 1, j0 + 1, c);
}

/// Interpolated euclidean magnitude over components.
inline double interpolate_magnitude(const Field& f, double x, double y) {
    double s = 0.0;
    for (int c = 0; c < f.ncomp; ++c) {
        double v = interpolate(f, x, y, c);
        s += v * v;
    }
    return std::sqrt(s);
}

}  // namespace rotwave
