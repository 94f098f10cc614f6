#pragma once

#include "rotwave/field.hpp"
#include "rotwave/matrix_analysis.hpp"
#include "rotwave/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

namespace rotwave {

enum class WeightKind { exp_abs, cosh_abs, exp_smooth, cosh_smooth };

/// Exponential weight theta with rate mu:
///   exp_abs      exp(mu |x|)
///   cosh_abs     cosh(mu |x|)
///   exp_smooth   exp(mu sqrt(|x|^2 + 1))
///   cosh_smooth  cosh(mu sqrt(|x|^2 + 1))
struct WeightSpec {
    WeightKind kind = WeightKind::exp_smooth;
    double mu = 0.0;
};

double weight_eval(const WeightSpec& spec, const Eigen::VectorXd& x);

/// Sampled certificate for the growth property
/// theta(x+y) <= C_theta theta(x) exp(eta |y|) with eta = |mu|, C_theta = 1,
/// plus radiality and monotonicity checks.
struct GrowthCertificate {
    double eta = 0.0;
    double c_theta = 1.0;
    int sample_count = 0;
    double max_violation = 0.0;  // <= 0 when certified
    bool radial = true;
    bool nondecreasing = true;
};

GrowthCertificate weight_eval_and_certify(const WeightSpec& spec,
                                          const std::vector<Eigen::VectorXd>& points,
                                          const std::vector<Eigen::VectorXd>& displacements);

/// Gauss hypergeometric function for real parameters and z in (-1, 1).
/// For z > 1/2 the Pfaff transformation is applied when it terminates;
/// otherwise the 1 - z connection formula (for nonintegral c - a - b) or
/// the direct series is used.
double gauss_2f1(double a, double b, double c, double z);

/// Gamma on (0, inf), Lanczos approximation (g = 7, 9 coefficients).
double gamma_function(double x);

/// Resolvent-estimate constants C_{0,eps}, C_{1,eps}.
struct EstimateConstants {
    double c0_eps;
    double c1_eps;
    double eps;
    int d;
    double p;
};

EstimateConstants estimate_constants(const SpectralConstants& consts, int d, double p,
                                     double eps, double c_theta = 1.0);

/// Theoretical decay-rate budget: nu = sqrt(a0 b0)/a_max and the derived
/// profile/eigenfunction rates.
struct DecayBudget {
    double nu = 0.0;
    double p = 2.0;
    double p_min = 1.0;
    int d = 2;
    double beta_inf = 0.0;
    double mu_pro = 0.0;      // nu / p
    double mu_pro_max = 0.0;  // nu / max{p_min, d/2}

    bool has_lambda = false;
    std::complex<double> lambda{0.0, 0.0};
    double eps_lambda = 0.0;  // (Re lambda + beta_inf)/beta_inf clamped to [0,1]
    double mu_eig = 0.0;      // eps(lambda) nu / p
    double mu_eig_max = 0.0;  // eps(lambda) nu / max{p_min, d/2}
    bool theory_applies = true;  // false when Re lambda <= -beta_inf

    double eps_of_lambda(std::complex<double> lam) const;
    double mu_eig_max_of(std::complex<double> lam) const;
};

DecayBudget decay_budget(const SpectralConstants& consts, int d, const PRange& prange,
                         double p,
                         std::optional<std::complex<double>> lambda = std::nullopt);

/// Largest K1 with K1 * sup_{|z - v_inf| <= K1} |D^2 f| <= eps * min{...},
/// by bisection. Returns +inf for models with vanishing second derivative.
double k1_threshold(const ReactionModel& model, const SpectralConstants& consts,
                    const EstimateConstants& est, double eps, bool halve_rhs = false);

/// Tensor trapezoid quadrature of the weighted L^p norm; p = inf returns
/// sup theta |u|.
double weighted_lp_norm(const Field& field, const WeightSpec& spec, double p);

}  // namespace rotwave
