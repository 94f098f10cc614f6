#include "rotwave/ou_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace rotwave {

namespace {

using Complex = std::complex<double>;

void check_skew(const Eigen::MatrixXd& S) {
    if ((S + S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, S.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("rot_exp: S is not skew-symmetric");
}

// Widest Gaussian standard deviation of the kernel factors at time t.
double sigma_max(const KernelParams& p, double t) {
    double m = 0.0;
    for (int k = 0; k < p.N; ++k) m = std::max(m, std::abs(p.diag.lambda_A(k)));
    return std::sqrt(2.0 * t * m);
}

struct BoxGrid {
    double center_x, center_y, radius;
    int n;
    double h;
    double node_x(int i) const { return center_x - radius + i * h; }
    double node_y(int j) const { return center_y - radius + j * h; }
    double w(int i) const { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }
};

BoxGrid make_box(double cx, double cy, double radius, int n) {
    return BoxGrid{cx, cy, radius, n, 2.0 * radius / (n - 1)};
}

}  // namespace

KernelParams KernelParams::make(const SquareMatrix& A, const SquareMatrix& B_inf,
                                const Eigen::MatrixXd& S) {
    check_skew(S);
    KernelParams p;
    p.A = A;
    p.B_inf = B_inf;
    p.S = S;
    p.d = static_cast<int>(S.rows());
    p.N = A.size();
    if (p.d < 2) throw std::invalid_argument("KernelParams: need d >= 2");
    p.diag = simultaneous_diagonalize(A, B_inf);
    if (!p.diag.ok)
        throw std::invalid_argument("KernelParams: A, B_inf not simultaneously diagonalizable: " +
                                    p.diag.error);
    for (int k = 0; k < p.N; ++k)
        if (p.diag.lambda_A(k).real() <= 0.0)
            throw std::invalid_argument("KernelParams: Re sigma(A) must be positive");
    return p;
}

Eigen::MatrixXd rot_exp(const Eigen::MatrixXd& S, double t) {
    check_skew(S);
    const int d = static_cast<int>(S.rows());
    if (d == 2) {
        double a = t * S(0, 1);
        Eigen::MatrixXd r(2, 2);
        r << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
        return r;
    }
    if (d == 3) {
        // Rodrigues: theta = |omega| with S x = omega cross x.
        double theta = std::sqrt(S(0, 1) * S(0, 1) + S(0, 2) * S(0, 2) + S(1, 2) * S(1, 2));
        double a = t * theta;
        Eigen::MatrixXd tS = t * S;
        if (theta < 1e-14) return Eigen::MatrixXd::Identity(3, 3);
        double c1 = std::sin(a) / a;
        double c2 = (1.0 - std::cos(a)) / (a * a);
        return Eigen::MatrixXd::Identity(3, 3) + c1 * tS + c2 * (tS * tS).eval();
    }
    // scaling and squaring with a plain series
    Eigen::MatrixXd M = t * S;
    int squarings = 0;
    while (M.norm() > 0.5) {
        M *= 0.5;
        ++squarings;
    }
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(d, d);
    for (int k = 1; k <= 30; ++k) {
        term = (term * M / k).eval();
        r += term;
    }
    for (int s = 0; s < squarings; ++s) r = (r * r).eval();
    return r;
}

Eigen::MatrixXcd kernel_eval(const KernelParams& p, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& xi, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_eval: need t > 0");
    Eigen::VectorXd xhat = rot_exp(p.S, t) * x;
    double q = (xhat - xi).squaredNorm();
    Eigen::VectorXcd h(p.N);
    for (int k = 0; k < p.N; ++k) {
        Complex la = p.diag.lambda_A(k), lb = p.diag.lambda_B(k);
        Complex pref = std::pow(4.0 * M_PI * t * la, -0.5 * p.d);  // principal branch
        h(k) = pref * std::exp(-lb * t - q / (4.0 * t * la));
    }
    return p.diag.Y * h.asDiagonal() * p.diag.Y_inv;
}

SemigroupResult semigroup_apply(const KernelParams& p, const FieldFunction& g, double t,
                                const QuadratureSpec& quad,
                                const std::vector<Eigen::VectorXd>& points) {
    if (p.d != 2) throw std::invalid_argument("semigroup_apply: quadrature implemented for d = 2");
    SemigroupResult out;
    out.values.reserve(points.size());
    if (t == 0.0) {
        for (const auto& x : points) out.values.push_back(g(x));
        return out;
    }
    const double sig = sigma_max(p, t);
    double radius = quad.box_radius > 0.0 ? quad.box_radius : 8.0 * sig;
    if (radius < 8.0 * sig) out.box_warning = true;
    const int n = quad.nodes_per_axis;
    Eigen::MatrixXd rot = rot_exp(p.S, t);

    for (const auto& x : points) {
        Eigen::VectorXd xhat = rot * x;
        BoxGrid box = make_box(xhat(0), xhat(1), radius, n);
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(p.N);
        std::vector<Eigen::VectorXcd> ex(p.N, Eigen::VectorXcd(n)), ey(p.N, Eigen::VectorXcd(n));
        for (int k = 0; k < p.N; ++k) {
            Complex inv4tla = 1.0 / (4.0 * t * p.diag.lambda_A(k));
            for (int i = 0; i < n; ++i) {
                double dx1 = xhat(0) - box.node_x(i);
                double dy1 = xhat(1) - box.node_y(i);
                ex[k](i) = std::exp(-dx1 * dx1 * inv4tla);
                ey[k](i) = std::exp(-dy1 * dy1 * inv4tla);
            }
        }
        Eigen::VectorXd xi(2);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                xi << box.node_x(i), box.node_y(j);
                Eigen::VectorXcd ghat = p.diag.Y_inv * g(xi);
                double w = box.w(i) * box.w(j);
                for (int k = 0; k < p.N; ++k) acc(k) += w * ex[k](i) * ey[k](j) * ghat(k);
            }
        }
        for (int k = 0; k < p.N; ++k) {
            Complex la = p.diag.lambda_A(k), lb = p.diag.lambda_B(k);
            acc(k) *= std::pow(4.0 * M_PI * t * la, -0.5 * p.d) * std::exp(-lb * t) *
                      box.h * box.h;
        }
        out.values.push_back(p.diag.Y * acc);
    }
    return out;
}

SemigroupResult semigroup_apply_fixed_box(const KernelParams& p, const FieldFunction& g,
                                          double t, double box_radius, int nodes_per_axis,
                                          const std::vector<Eigen::VectorXd>& points) {
    if (p.d != 2)
        throw std::invalid_argument("semigroup_apply_fixed_box: quadrature implemented for d = 2");
    SemigroupResult out;
    out.values.reserve(points.size());
    if (t == 0.0) {
        for (const auto& x : points) out.values.push_back(g(x));
        return out;
    }
    const int n = nodes_per_axis;
    BoxGrid box = make_box(0.0, 0.0, box_radius, n);
    // g sampled once, in the diagonalized basis, weights folded in.
    std::vector<Eigen::MatrixXcd> ghat(p.N, Eigen::MatrixXcd(n, n));
    Eigen::VectorXd xi(2);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            xi << box.node_x(i), box.node_y(j);
            Eigen::VectorXcd gh = p.diag.Y_inv * g(xi);
            double w = box.w(i) * box.w(j);
            for (int k = 0; k < p.N; ++k) ghat[k](i, j) = w * gh(k);
        }

    const double sig = sigma_max(p, t);
    Eigen::MatrixXd rot = rot_exp(p.S, t);
    for (const auto& x : points) {
        Eigen::VectorXd xhat = rot * x;
        if (std::abs(xhat(0)) + 8.0 * sig > box_radius + 1e-12 ||
            std::abs(xhat(1)) + 8.0 * sig > box_radius + 1e-12)
            out.box_warning = true;
        Eigen::VectorXcd acc(p.N);
        Eigen::VectorXcd ex(n), ey(n);
        for (int k = 0; k < p.N; ++k) {
            Complex la = p.diag.lambda_A(k);
            Complex inv4tla = 1.0 / (4.0 * t * la);
            for (int i = 0; i < n; ++i) {
                double dx1 = xhat(0) - box.node_x(i);
                double dy1 = xhat(1) - box.node_y(i);
                ex(i) = std::exp(-dx1 * dx1 * inv4tla);
                ey(i) = std::exp(-dy1 * dy1 * inv4tla);
            }
            Complex val = ex.transpose() * (ghat[k] * ey);
            acc(k) = val * std::pow(4.0 * M_PI * t * la, -0.5 * p.d) *
                     std::exp(-p.diag.lambda_B(k) * t) * box.h * box.h;
        }
        out.values.push_back(p.diag.Y * acc);
    }
    return out;
}

SemigroupResult resolvent_apply(const KernelParams& p, const FieldFunction& g,
                                std::complex<double> lambda, const QuadratureSpec& quad,
                                const std::vector<Eigen::VectorXd>& points) {
    double b0 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < p.N; ++k) b0 = std::min(b0, p.diag.lambda_B(k).real());
    const double rate = lambda.real() + b0;
    if (!(rate > 0.0))
        throw std::invalid_argument("resolvent_apply: need Re lambda > -b0, integral diverges");

    SemigroupResult out;
    out.values.assign(points.size(), Eigen::VectorXcd::Zero(p.N));

    auto add_contribution = [&](double s, double weight) {
        if (s <= 0.0) return;
        SemigroupResult ts;
        bool used_fixed = false;
        if (quad.g_radius > 0.0) {
            // one shared box per time node; valid once the kernel width is
            // resolved by the fixed spacing (g negligible past g_radius)
            double sig = 0.0;
            for (int k = 0; k < p.N; ++k)
                sig = std::max(sig, std::sqrt(2.0 * s * std::abs(p.diag.lambda_A(k))));
            double radius = quad.g_radius + 2.0 * sig;
            double h = 2.0 * radius / (quad.nodes_per_axis - 1);
            if (sig >= 3.0 * h) {
                ts = semigroup_apply_fixed_box(p, g, s, radius, quad.nodes_per_axis, points);
                ts.box_warning = false;  // tails beyond g_radius are negligible by contract
                used_fixed = true;
            }
        }
        if (!used_fixed) {
            QuadratureSpec q = quad;
            q.box_radius = 0.0;  // adaptive per-s Gaussian box
            // narrow kernels need few nodes across the (small) box
            q.nodes_per_axis = std::min(quad.nodes_per_axis, 48);
            ts = semigroup_apply(p, g, s, q, points);
        }
        out.box_warning = out.box_warning || ts.box_warning;
        Complex f = weight * std::exp(-lambda * s);
        for (size_t i = 0; i < points.size(); ++i) out.values[i] += f * ts.values[i];
    };

    // Near zero: s = sigma^2, ds = 2 sigma dsigma; integrand vanishes at 0.
    const double split = quad.time_split;
    const int m = std::max(8, quad.time_nodes);
    const double dsig = std::sqrt(split) / m;
    for (int i = 1; i <= m; ++i) {
        double sg = i * dsig;
        double w = (i == m) ? 0.5 : 1.0;
        add_contribution(sg * sg, w * 2.0 * sg * dsig);
    }
    // Tail: geometric stretch until the exponential factor is negligible.
    // The stretch tightens with time_nodes so the tail rule refines too.
    const double s_max = split + 27.7 / rate;  // e^{-rate s} < 1e-12 past here
    const double tail_m = std::max(m, 48);
    const double grow = 1.0 + 8.64 / tail_m;
    const double pad = 0.96 / tail_m;
    std::vector<double> nodes{split};
    double s = split;
    while (s < s_max) {
        s = std::min(s * grow + pad, s_max);
        nodes.push_back(s);
    }
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        double h = nodes[i + 1] - nodes[i];
        add_contribution(nodes[i], 0.5 * h);
        add_contribution(nodes[i + 1], 0.5 * h);
    }
    return out;
}

double operator_residual(const KernelParams& p, const ComplexField& v, const ComplexField& g,
                         std::complex<double> lambda) {
    const Grid2D& grid = v.grid;
    if (grid.n < 5) throw std::invalid_argument("operator_residual: grid too coarse");
    if (g.grid.n != grid.n || v.ncomp != p.N || g.ncomp != p.N)
        throw std::invalid_argument("operator_residual: field mismatch");
    const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
    const double inv_2dx = 0.5 / grid.dx;
    double res = 0.0;
    Eigen::VectorXcd vc(p.N), lap(p.N), d1(p.N), d2(p.N);
    for (int j = 1; j < grid.n - 1; ++j) {
        for (int i = 1; i < grid.n - 1; ++i) {
            double x1 = grid.coord(i), x2 = grid.coord(j);
            for (int c = 0; c < p.N; ++c) {
                vc(c) = v.at(i, j, c);
                lap(c) = (v.at(i + 1, j, c) + v.at(i - 1, j, c) + v.at(i, j + 1, c) +
                          v.at(i, j - 1, c) - 4.0 * v.at(i, j, c)) *
                         inv_dx2;
                d1(c) = (v.at(i + 1, j, c) - v.at(i - 1, j, c)) * inv_2dx;
                d2(c) = (v.at(i, j + 1, c) - v.at(i, j - 1, c)) * inv_2dx;
            }
            double sx1 = p.S(0, 0) * x1 + p.S(0, 1) * x2;
            double sx2 = p.S(1, 0) * x1 + p.S(1, 1) * x2;
            Eigen::VectorXcd Lv = p.A.m * lap + sx1 * d1 + sx2 * d2 - p.B_inf.m * vc;
            for (int c = 0; c < p.N; ++c)
                res = std::max(res, std::abs(lambda * vc(c) - Lv(c) - g.at(i, j, c)));
        }
    }
    return res;
}

}  // namespace rotwave
