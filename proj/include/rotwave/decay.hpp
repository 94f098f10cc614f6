#pragma once

#include "rotwave/field.hpp"
#include "rotwave/weights.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace rotwave {

struct RaySample {
    Eigen::Vector2d direction;  // unit vector
    std::vector<double> radii;
    std::vector<double> values;  // |w| at radii, bilinear
};

/// Magnitudes of the field along r * direction at n equispaced radii in
/// [0, r_max]. Throws when the ray leaves the grid.
RaySample sample_ray(const Field& field, const Eigen::Vector2d& direction, double r_max,
                     int n = 1000);

struct RegressionFit {
    double slope = 0.0;  // d log10|w| / dr
    double intercept = 0.0;
    double r_lo = 0.0, r_hi = 0.0;
    double r_squared = 0.0;
    int n_used = 0;
    double ndr() const { return -slope; }
};

/// OLS of log10|w| against r on the window; values below 1e-300 are excluded.
/// Rates are decimal-log slopes, matching the convention of the reference
/// decay tables (which list them next to the e-unit mu budgets).
RegressionFit fit_decay(const RaySample& ray, double r_lo, double r_hi);

struct DecayRow {
    std::string object;  // "profile" or formatted eigenvalue
    bool has_lambda = false;
    std::complex<double> lambda;
    double ndr = 0.0;
    bool has_tdr = false;  // false exactly when Re lambda <= -beta_inf
    double tdr = 0.0;
    double margin = 0.0;  // NDR - TDR where TDR exists
    double r_squared = 0.0;
};

std::vector<DecayRow> decay_report(
    const RegressionFit& profile_fit,
    const std::vector<std::pair<std::complex<double>, RegressionFit>>& eigen_fits,
    const DecayBudget& budget);

struct PointwiseCertificate {
    double c_fit = 0.0;     // max |w(x)| exp(mu sqrt(|x|^2 + 1)) off the collar
    double c_fit_d1 = 0.0;  // same for first central differences
    double max_violation = 0.0;
    bool mu_in_budget = true;
};

PointwiseCertificate pointwise_certificate(const Field& field, double mu, double collar,
                                           std::optional<double> budget_bound = std::nullopt);

/// One-component magnitude field of a complex nodal vector in the
/// 2-component node-major ordering (eigenvector layout).
Field magnitude_field(const Grid2D& grid, const Eigen::VectorXcd& vec);

}  // namespace rotwave
