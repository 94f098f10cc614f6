#pragma once

#include "rotwave/field.hpp"
#include "rotwave/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string>

namespace rotwave {

enum class Scheme { imex_euler, imex_bdf2 };

struct StepperConfig {
    double dt = 0.005;
    Scheme scheme = Scheme::imex_bdf2;
    double t_end = 150.0;
};

/// Reaction system with scalar complex diffusion: the real 2-vector form
/// u_t = A lap(u) + f(u) collapses to w_t = alpha lap(w) + f_c(w) for
/// w = u1 + i u2, which keeps the implicit diffusion solve scalar.
struct PdeSystem {
    ReactionModel model;
    std::complex<double> alpha{0.5, 0.5};
    std::function<std::complex<double>(std::complex<double>)> reaction;
};

PdeSystem make_qcgl_system(const QCGLParams& params = {});

/// Finite-difference operator handles on one grid: 5-point Laplacian and
/// second-order central first derivatives, all with homogeneous Neumann
/// ghost reflection. Fields enter as complex nodal vectors (w = u1 + i u2).
struct DiscretizationOps {
    Grid2D grid;
    double S12 = 0.0;
    Eigen::Vector2d x_star = Eigen::Vector2d::Zero();

    Eigen::VectorXcd laplacian(const Eigen::VectorXcd& w) const;
    Eigen::VectorXcd d1(const Eigen::VectorXcd& w) const;
    Eigen::VectorXcd d2(const Eigen::VectorXcd& w) const;
    /// D^{(1,2)} w = x2 D1 w - x1 D2 w (angular derivative about the origin)
    Eigen::VectorXcd angular(const Eigen::VectorXcd& w) const;
    /// <S(x - x_star), grad w> with S = [[0, S12], [-S12, 0]]
    Eigen::VectorXcd drift(const Eigen::VectorXcd& w) const;
};

DiscretizationOps assemble_discretization(const Grid2D& grid, double S12 = 0.0,
                                          const Eigen::Vector2d& x_star = Eigen::Vector2d::Zero());

Eigen::VectorXcd field_to_complex(const Field& f);
Field complex_to_field(const Grid2D& grid, const Eigen::VectorXcd& w);

/// u0 = (1/5)(x1 + i x2) exp(-(x1^2 + x2^2)/49), sampled as (u1, u2).
Field initial_data(const Grid2D& grid, const std::string& kind = "vortex_seed");

/// Integrates u_t = A lap(u) + f(u), diffusion implicit (pre-factored
/// sparse solve), reaction explicit. Throws on blow-up with the time.
Field simulate(const PdeSystem& sys, const Grid2D& grid, const Field& u0,
               const StepperConfig& cfg);

struct FreezeState {
    Field v;
    double S12 = 0.0;
    Eigen::Vector2d tau = Eigen::Vector2d::Zero();
    double t = 0.0;
    double residual = 0.0;  // discrete L2 norm of v_t at the last step
};

/// Frozen flow v_t = A lap(v) + f(v) + S12 D^{(1,2)} v + tau . grad v with
/// (S12, tau) the per-step least-squares minimizer of ||v_t|| (minimization
/// phase condition, 3x3 normal equations). Diffusion and drift are both
/// implicit; the drift factorization is refreshed lazily as (S12, tau) move.
FreezeState freeze_run(const PdeSystem& sys, const Grid2D& grid, const Field& v0,
                       const StepperConfig& cfg);

struct Frame {
    Eigen::VectorXd x_star;
    Eigen::Vector3d axis = Eigen::Vector3d::Zero();  // d = 3 only
    double sigma1 = 0.0;
    double period = 0.0;
};

/// Center of rotation, axis (d = 3), angular speed and period from the
/// converged frame velocities. Throws when S = 0.
Frame extract_frame(int dim, const Eigen::MatrixXd& S, const Eigen::VectorXd& tau);

/// Lab-frame field at time t: w(exp(-tS)(x - x_star) + x_star) by bilinear
/// interpolation; preimages outside the grid take v_inf = 0.
Field reconstruct(const FreezeState& state, const Frame& frame, double t);

/// E(z) = sum_{j>=1} z^{j-1}/j!, the entire function with E(z) z = e^z - 1.
std::complex<double> companion_e(std::complex<double> z);

}  // namespace rotwave
