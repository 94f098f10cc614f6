#pragma once

#include "rotwave/field.hpp"
#include "rotwave/matrix_analysis.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

namespace rotwave {

/// Data of the perturbed Ornstein-Uhlenbeck operator
///   L v = A lap(v) + <Sx, grad v> - B_inf v
/// with the simultaneous diagonalization of (A, B_inf) cached.
struct KernelParams {
    SquareMatrix A;
    SquareMatrix B_inf;
    Eigen::MatrixXd S;  // skew, d x d
    int d = 2;
    int N = 1;
    SimultaneousDiagonalization diag;

    static KernelParams make(const SquareMatrix& A, const SquareMatrix& B_inf,
                             const Eigen::MatrixXd& S);
};

struct QuadratureSpec {
    double box_radius = 0.0;  // 0: automatic, 8 std devs of the widest Gaussian
    int nodes_per_axis = 96;
    int time_nodes = 48;      // near-zero s-rule nodes; > 48 also tightens the tail
    double time_split = 1.0;  // switch point to the stretched tail rule
    // When positive: g is negligible outside |x| <= g_radius, which lets the
    // resolvent reuse one origin-centered box for all request points at each
    // time node (large speedup for many points).
    double g_radius = 0.0;
};

/// exp(tS) for skew-symmetric S: closed form for d = 2, Rodrigues for
/// d = 3, scaling-and-squaring series otherwise. Always orthogonal.
Eigen::MatrixXd rot_exp(const Eigen::MatrixXd& S, double t);

/// Heat kernel H(x, xi, t) of the perturbed operator, as an N x N matrix.
Eigen::MatrixXcd kernel_eval(const KernelParams& params, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& xi, double t);

using FieldFunction = std::function<Eigen::VectorXcd(const Eigen::VectorXd&)>;

struct SemigroupResult {
    std::vector<Eigen::VectorXcd> values;  // one per request point
    bool box_warning = false;
};

/// [T(t)g](x) by tensor trapezoid quadrature; t = 0 returns g(x).
SemigroupResult semigroup_apply(const KernelParams& params, const FieldFunction& g, double t,
                                const QuadratureSpec& quad,
                                const std::vector<Eigen::VectorXd>& points);

/// Same operator on a fixed box with g sampled once; much faster when many
/// request points share one time t. The box must cover both the mass of g
/// and the Gaussian spread around every rotated request point.
SemigroupResult semigroup_apply_fixed_box(const KernelParams& params, const FieldFunction& g,
                                          double t, double box_radius, int nodes_per_axis,
                                          const std::vector<Eigen::VectorXd>& points);

/// (lambda I - L)^{-1} g via the time integral of the semigroup, with the
/// s = sigma^2 substitution near zero and a stretched tail rule.
SemigroupResult resolvent_apply(const KernelParams& params, const FieldFunction& g,
                                std::complex<double> lambda, const QuadratureSpec& quad,
                                const std::vector<Eigen::VectorXd>& points);

/// max over interior nodes of |(lambda I - L)v - g| with L discretized by
/// second-order central differences on the common grid.
double operator_residual(const KernelParams& params, const ComplexField& v,
                         const ComplexField& g, std::complex<double> lambda);

}  // namespace rotwave
