#pragma once

#include "rotwave/field.hpp"
#include "rotwave/model.hpp"
#include "rotwave/pde_freeze.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <string>
#include <vector>

namespace rotwave {

/// Sparse real discretization of L v = A lap(v) + <S(x - x_star), grad v>
/// + Df(w_star(x)) v on the 2-component node-major ordering
/// (component c of node (i,j) at row 2 (j n + i) + c).
struct LinearizedOperator {
    Eigen::SparseMatrix<double> L;
    Grid2D grid;
    double S12 = 0.0;
    Eigen::Vector2d x_star = Eigen::Vector2d::Zero();
};

LinearizedOperator assemble_linearization(const ReactionModel& model,
                                          const Eigen::Matrix2d& A_real, const Field& w_star,
                                          double S12, const Eigen::Vector2d& x_star);

struct EigenPair {
    std::complex<double> lambda;
    Eigen::VectorXcd vec;  // normalized: max-modulus entry = 1 (nonneg real part)
    double residual = 0.0;  // ||(L - lambda) v|| / ||v|| on the original operator
};

struct EigsOptions {
    int krylov_dim = 0;  // 0: 4 neigs + 20
    double tol = 1e-10;
    bool return_all_converged = false;
};

struct EigsResult {
    std::vector<EigenPair> pairs;  // sorted by |lambda - sigma|
    bool complete = false;         // neigs pairs converged
};

/// Shift-invert Arnoldi on (L - sigma I)^{-1} in real arithmetic with full
/// reorthogonalization; complex eigenvalues emerge as conjugate pairs.
EigsResult shift_invert_eigs(const LinearizedOperator& lop, double sigma, int neigs,
                             const EigsOptions& opt = {});

struct DispersionPoint {
    double omega = 0.0;
    std::complex<double> lambda;
};

/// One essential-spectrum branch: lambda(omega) in sigma(Df(v_inf) - w^2 A)
/// - i n sigma1, for a fixed temporal index n and matrix-eigenvalue branch.
struct DispersionCurve {
    int n = 0;
    int branch = 0;
    std::vector<DispersionPoint> points;
};

std::vector<DispersionCurve> dispersion_essential(const ReactionModel& model,
                                                  const Eigen::Matrix2d& A_real, double sigma1,
                                                  const std::vector<double>& omega_grid,
                                                  int n_min, int n_max);

/// |det(lambda I + w^2 A - Df(v_inf) + i n sigma1 I)| for curve validation.
double dispersion_residual(const ReactionModel& model, const Eigen::Matrix2d& A_real,
                           double sigma1, double omega, int n, std::complex<double> lambda);

/// One symmetry-forced eigenvalue with the coefficients of its eigenfunction:
/// translational modes are sum_i c_tra(i) D_i v, rotational modes are
/// sum_{i<j} c_rot(i,j) (x_j D_i - x_i D_j) v.
struct SymmetryMode {
    std::complex<double> lambda;
    bool rotational = false;
    Eigen::VectorXcd c_tra;
    Eigen::MatrixXcd c_rot;
};

/// All modes forced by Euclidean equivariance: lambda in {-lambda_l(S)} and
/// {-(lambda_n(S) + lambda_m(S))}, built from a unitary diagonalization of S.
std::vector<SymmetryMode> symmetry_modes(const Eigen::MatrixXd& S);

/// d = 2 eigenfunctions realized on the grid by central differences of the
/// profile. Modes whose field vanishes (radial profiles) are dropped.
std::vector<EigenPair> symmetry_eigenpairs(const Field& profile, const Eigen::MatrixXd& S);

/// ||(L - lambda) v|| / ||v|| restricted to nodes with |x| <= R - collar.
double interior_residual(const LinearizedOperator& lop, const Eigen::VectorXcd& v,
                         std::complex<double> lambda, double collar = 2.0);

struct ClassifiedEig {
    std::complex<double> lambda;
    double residual = 0.0;
    double curve_distance = 0.0;
    std::string cls;  // "essential-approx" or "isolated"
};

std::vector<ClassifiedEig> classify_and_residual(const std::vector<EigenPair>& pairs,
                                                 const std::vector<DispersionCurve>& curves,
                                                 double tol_dist);

}  // namespace rotwave
