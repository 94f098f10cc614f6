#include "rotwave/decay.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rotwave {

RaySample sample_ray(const Field& field, const Eigen::Vector2d& direction, double r_max, int n) {
    if (n < 2) throw std::invalid_argument("sample_ray: need at least two radii");
    Eigen::Vector2d dir = direction.normalized();
    const Grid2D& g = field.grid;
    double ex = r_max * dir(0), ey = r_max * dir(1);
    if (std::abs(ex) > g.half_width + 1e-12 || std::abs(ey) > g.half_width + 1e-12)
        throw std::invalid_argument("sample_ray: ray exits the grid");
    RaySample s;
    s.direction = dir;
    s.radii.reserve(n);
    s.values.reserve(n);
    for (int k = 0; k < n; ++k) {
        double r = r_max * k / (n - 1.0);
        s.radii.push_back(r);
        s.values.push_back(interpolate_magnitude(field, r * dir(0), r * dir(1)));
    }
    return s;
}

RegressionFit fit_decay(const RaySample& ray, double r_lo, double r_hi) {
    RegressionFit fit;
    fit.r_lo = r_lo;
    fit.r_hi = r_hi;
    std::vector<double> xs, ys;
    for (size_t k = 0; k < ray.radii.size(); ++k) {
        double r = ray.radii[k], v = ray.values[k];
        if (r < r_lo || r > r_hi || v <= 1e-300) continue;
        xs.push_back(r);
        ys.push_back(std::log10(v));
    }
    if (xs.size() < 10) {
        if (xs.empty()) throw std::runtime_error("fit_decay: field vanishes on window");
        throw std::runtime_error("fit_decay: fewer than 10 usable points in window");
    }
    const int n = static_cast<int>(xs.size());
    double mx = 0.0, my = 0.0;
    for (int k = 0; k < n; ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int k = 0; k < n; ++k) {
        double dx = xs[k] - mx, dy = ys[k] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.n_used = n;
    return fit;
}

std::vector<DecayRow> decay_report(
    const RegressionFit& profile_fit,
    const std::vector<std::pair<std::complex<double>, RegressionFit>>& eigen_fits,
    const DecayBudget& budget) {
    std::vector<DecayRow> rows;
    DecayRow pr;
    pr.object = "profile";
    pr.ndr = profile_fit.ndr();
    pr.has_tdr = true;
    pr.tdr = budget.mu_pro_max;
    pr.margin = pr.ndr - pr.tdr;
    pr.r_squared = profile_fit.r_squared;
    rows.push_back(pr);

    for (const auto& [lam, fit] : eigen_fits) {
        DecayRow row;
        std::ostringstream os;
        os << lam.real() << (lam.imag() >= 0 ? "+" : "") << lam.imag() << "i";
        row.object = os.str();
        row.has_lambda = true;
        row.lambda = lam;
        row.ndr = fit.ndr();
        row.r_squared = fit.r_squared;
        if (lam.real() > -budget.beta_inf) {
            row.has_tdr = true;
            row.tdr = budget.mu_eig_max_of(lam);
            row.margin = row.ndr - row.tdr;
        }
        rows.push_back(row);
    }
    return rows;
}

PointwiseCertificate pointwise_certificate(const Field& field, double mu, double collar,
                                           std::optional<double> budget_bound) {
    if (mu < 0.0) throw std::invalid_argument("pointwise_certificate: mu must be nonnegative");
    PointwiseCertificate cert;
    if (budget_bound && mu > *budget_bound + 1e-12) cert.mu_in_budget = false;
    const Grid2D& g = field.grid;
    const double rmax = g.half_width - collar;
    const double inv2dx = 0.5 / g.dx;
    for (int j = 1; j < g.n - 1; ++j)
        for (int i = 1; i < g.n - 1; ++i) {
            double x1 = g.coord(i), x2 = g.coord(j);
            double r2 = x1 * x1 + x2 * x2;
            if (std::sqrt(r2) > rmax) continue;
            double w = std::exp(mu * std::sqrt(r2 + 1.0));
            cert.c_fit = std::max(cert.c_fit, field.magnitude(i, j) * w);
            double gsq = 0.0;
            for (int c = 0; c < field.ncomp; ++c) {
                double gx = (field.at(i + 1, j, c) - field.at(i - 1, j, c)) * inv2dx;
                double gy = (field.at(i, j + 1, c) - field.at(i, j - 1, c)) * inv2dx;
                gsq += gx * gx + gy * gy;
            }
            cert.c_fit_d1 = std::max(cert.c_fit_d1, std::sqrt(gsq) * w);
        }
    return cert;
}

Field magnitude_field(const Grid2D& grid, const Eigen::VectorXcd& vec) {
    if (vec.size() != 2 * grid.num_nodes())
        throw std::invalid_argument("magnitude_field: size mismatch");
    Field f = Field::zeros(grid, 1);
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) {
            Eigen::Index k = 2 * grid.idx(i, j);
            f.at(i, j, 0) = std::sqrt(std::norm(vec(k)) + std::norm(vec(k + 1)));
        }
    return f;
}

}  // namespace rotwave
