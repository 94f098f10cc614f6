#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <optional>
#include <string>

namespace rotwave {

/// Square matrix over R or C. Real-tagged matrices must have vanishing
/// imaginary parts; the tag decides whether sphere searches run over the
/// real or the complex unit sphere.
struct SquareMatrix {
    Eigen::MatrixXcd m;
    bool real_valued = true;

    int size() const { return static_cast<int>(m.rows()); }

    static SquareMatrix real(const Eigen::MatrixXd& a);
    static SquareMatrix complex(const Eigen::MatrixXcd& a);
};

struct SpectralBounds {
    double radius;    // max |lambda|
    double abscissa;  // max Re lambda
    double a_min;     // (rho(A^{-1}))^{-1}
    double a_max;     // rho(A)
    double a_0;       // -s(-A) = min Re lambda
    double b_0;       // -s(A)  = -max Re lambda
};

struct AntiEigenvalue {
    double mu1;    // inf Re<w,Aw>/|Aw| over unit w with Aw != 0
    double angle;  // arccos(mu1), the real angle of A
};

struct PRange {
    double p_min = 0.0;
    double p_max = 0.0;
    bool nonempty = false;
};

struct SimultaneousDiagonalization {
    bool ok = false;
    Eigen::MatrixXcd Y;
    Eigen::MatrixXcd Y_inv;
    Eigen::VectorXcd lambda_A;
    Eigen::VectorXcd lambda_B;
    double kappa = 0.0;            // cond(Y), unit-normalized columns
    double commutator_norm = 0.0;  // ||AB - BA||
    std::string error;
};

/// Constant bundle attached to a matrix pair (A, B_inf).
struct SpectralConstants {
    double a_min;
    double a_max;
    double a_0;
    double a_1;
    double b_0;
    double kappa;
    double beta_A;
    double beta_inf;
    double gamma_A;
    int d;
};

struct ConditionEntry {
    bool satisfied = false;
    double witness = 0.0;
    double tol = 0.0;
    std::string note;
};

/// Per-condition verdicts for the matrix-level assumptions. Keys follow the
/// numbering A1..A11 (A5 is not assigned in that numbering).
struct AssumptionReport {
    std::map<std::string, ConditionEntry> conditions;
    bool all_satisfied() const;
};

SpectralBounds spectral_bounds(const SquareMatrix& M);

/// First antieigenvalue of A and the associated real angle.
/// Quasi-random sphere sampling (1e4 points) with Nelder-Mead refinement.
AntiEigenvalue first_antieigenvalue(const SquareMatrix& A);

/// gamma_A: infimum over unit z, w of
///   |z|^2 Re<w,Aw> + (p-2) Re<w,z> Re<z,Aw>.
/// Positive sign certifies the L^p-dissipativity condition.
double lp_dissipativity_margin(const SquareMatrix& A, double p);

/// Open interval of admissible p obtained from mu_1(A) > |p-2|/p.
/// p_max is +inf when mu_1 = 1; empty when mu_1 <= 0.
PRange p_range(const SquareMatrix& A);

/// lambda_min of the Hermitian part (M + M^H)/2.
double coercivity_constant(const SquareMatrix& M);

SimultaneousDiagonalization simultaneous_diagonalize(const SquareMatrix& A,
                                                     const SquareMatrix& B,
                                                     double tol = 1e-10);

SpectralConstants constants_bundle(const SquareMatrix& A, const SquareMatrix& B_inf,
                                   int d, double p = 2.0);

// Forward declaration; models live in model.hpp.
struct ReactionModel;

AssumptionReport assumption_report(const SquareMatrix& A, const SquareMatrix& S,
                                   const ReactionModel& model,
                                   const Eigen::VectorXd& v_inf, double p);

}  // namespace rotwave
