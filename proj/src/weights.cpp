#include "rotwave/weights.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rotwave {

double weight_eval(const WeightSpec& spec, const Eigen::VectorXd& x) {
    double r = x.norm();
    switch (spec.kind) {
        case WeightKind::exp_abs:
            return std::exp(spec.mu * r);
        case WeightKind::cosh_abs:
            return std::cosh(spec.mu * r);
        case WeightKind::exp_smooth:
            return std::exp(spec.mu * std::sqrt(r * r + 1.0));
        case WeightKind::cosh_smooth:
            return std::cosh(spec.mu * std::sqrt(r * r + 1.0));
    }
    return 1.0;
}

GrowthCertificate weight_eval_and_certify(const WeightSpec& spec,
                                          const std::vector<Eigen::VectorXd>& points,
                                          const std::vector<Eigen::VectorXd>& displacements) {
    if (points.empty() || displacements.empty())
        throw std::invalid_argument("weight_eval_and_certify: empty sample sets");
    GrowthCertificate cert;
    cert.eta = std::abs(spec.mu);
    cert.c_theta = 1.0;
    cert.max_violation = -std::numeric_limits<double>::infinity();

    for (const auto& x : points) {
        double tx = weight_eval(spec, x);
        for (const auto& y : displacements) {
            double bound = cert.c_theta * tx * std::exp(cert.eta * y.norm());
            double v = weight_eval(spec, x + y) / bound - 1.0;
            cert.max_violation = std::max(cert.max_violation, v);
            ++cert.sample_count;
        }
        // (W3): value must only depend on |x|. Compare against a sign flip,
        // which preserves the radius in any dimension.
        double flipped = weight_eval(spec, Eigen::VectorXd(-x));
        if (std::abs(flipped - tx) > 1e-12 * std::max(1.0, std::abs(tx))) cert.radial = false;
    }
    // (W4): nondecreasing along radii.
    if (!points.empty()) {
        const int dim = static_cast<int>(points.front().size());
        Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
        e(0) = 1.0;
        double prev = weight_eval(spec, Eigen::VectorXd(0.0 * e));
        for (int k = 1; k <= 40; ++k) {
            double cur = weight_eval(spec, Eigen::VectorXd((0.25 * k) * e));
            if (cur < prev * (1.0 - 1e-13)) cert.nondecreasing = false;
            prev = cur;
        }
    }
    return cert;
}

namespace {

// Raw power series; valid for |z| < 1 or when a numerator parameter makes
// it terminate.
double hyp_series(double a, double b, double c, double z) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 10000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (std::abs(term) <= 1e-14 * std::abs(sum)) return sum;
    }
    throw std::runtime_error("gauss_2f1: series did not converge");
}

bool nonpositive_integer(double x) {
    return x <= 1e-12 && std::abs(x - std::round(x)) < 1e-12;
}

}  // namespace

double gauss_2f1(double a, double b, double c, double z) {
    if (c <= 0.0 && c == std::floor(c))
        throw std::invalid_argument("gauss_2f1: c is a nonpositive integer");
    if (z >= 1.0 || z <= -1.0) throw std::invalid_argument("gauss_2f1: need |z| < 1");
    if (z > 0.5) {
        // Pfaff 2F1(a,b;c;z) = (1-z)^{-b} 2F1(c-a, b; c; z/(z-1)) maps z
        // into (-inf, -1), so it only helps when the transformed series
        // terminates.
        if (nonpositive_integer(c - a))
            return std::pow(1.0 - z, -b) * hyp_series(c - a, b, c, z / (z - 1.0));
        if (nonpositive_integer(c - b))
            return std::pow(1.0 - z, -a) * hyp_series(a, c - b, c, z / (z - 1.0));
        // Otherwise connect through 1 - z (valid for nonintegral c - a - b).
        double s = c - a - b;
        if (std::abs(s - std::round(s)) > 1e-8) {
            double w = 1.0 - z;
            double t1 = gamma_function(c) * gamma_function(s) /
                        (gamma_function(c - a) * gamma_function(c - b)) *
                        hyp_series(a, b, a + b - c + 1.0, w);
            double t2 = std::pow(w, s) * gamma_function(c) * gamma_function(-s) /
                        (gamma_function(a) * gamma_function(b)) *
                        hyp_series(c - a, c - b, s + 1.0, w);
            return t1 + t2;
        }
        // Integral exponent difference with no terminating partner: the
        // direct series still converges for z < 1, just slowly.
    }
    return hyp_series(a, b, c, z);
}

double gamma_function(double x) {
    // Lanczos, g = 7, 9 coefficients.
    static const double g = 7.0;
    static const double coef[9] = {0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
                                   771.32342877765313,   -176.61502916214059, 12.507343278686905,
                                   -0.13857109526572012, 9.9843695780195716e-6,
                                   1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection
        return M_PI / (std::sin(M_PI * x) * gamma_function(1.0 - x));
    }
    x -= 1.0;
    double a = coef[0];
    double t = x + g + 0.5;
    for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
    return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

EstimateConstants estimate_constants(const SpectralConstants& consts, int d, double p,
                                     double eps, double c_theta) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("estimate_constants: eps must lie in (0, 1)");
    const double gr = gamma_function(0.5 * (d + 1)) / gamma_function(0.5 * d);
    const double pow_eps = std::pow(1.0 - eps, -0.5 * (d + 1));

    double inner0 = gr * std::sqrt(M_PI * eps) * pow_eps + gauss_2f1(0.5 * d, 1.0, 0.5, eps);
    double c0 = c_theta * consts.kappa * consts.a_1 * std::pow(inner0, 1.0 / p);

    double inner1 = gr * pow_eps +
                    d * std::sqrt(eps / M_PI) * gauss_2f1(0.5 * (d + 1), 1.0, 1.5, eps);
    double c1 = c_theta * consts.kappa * std::pow(consts.a_1, (d + 1.0) / d) *
                std::sqrt(M_PI / consts.a_min) * std::pow(inner1, 1.0 / p);

    return EstimateConstants{c0, c1, eps, d, p};
}

double DecayBudget::eps_of_lambda(std::complex<double> lam) const {
    if (beta_inf <= 0.0) return 0.0;
    double e = (lam.real() + beta_inf) / beta_inf;
    return std::clamp(e, 0.0, 1.0);
}

double DecayBudget::mu_eig_max_of(std::complex<double> lam) const {
    return eps_of_lambda(lam) * mu_pro_max;
}

DecayBudget decay_budget(const SpectralConstants& consts, int d, const PRange& prange,
                         double p, std::optional<std::complex<double>> lambda) {
    if (!(consts.a_0 > 0.0) || !(consts.b_0 > 0.0))
        throw std::invalid_argument("decay_budget: need a_0 > 0 and b_0 > 0");
    DecayBudget b;
    b.nu = std::sqrt(consts.a_0 * consts.b_0) / consts.a_max;
    b.p = p;
    b.p_min = prange.nonempty ? prange.p_min : 1.0;
    b.d = d;
    b.beta_inf = consts.beta_inf;
    b.mu_pro = b.nu / p;
    b.mu_pro_max = b.nu / std::max(b.p_min, 0.5 * d);
    if (lambda) {
        b.has_lambda = true;
        b.lambda = *lambda;
        b.theory_applies = lambda->real() > -b.beta_inf;
        b.eps_lambda = b.eps_of_lambda(*lambda);
        b.mu_eig = b.eps_lambda * b.nu / p;
        b.mu_eig_max = b.eps_lambda * b.mu_pro_max;
    }
    return b;
}

double k1_threshold(const ReactionModel& model, const SpectralConstants& consts,
                    const EstimateConstants& est, double eps, bool halve_rhs) {
    if (!model.d2f_sup) throw std::invalid_argument("k1_threshold: model lacks a D^2 f bound");
    double rhs = eps * std::min({consts.b_0 / (consts.kappa * consts.a_1),
                                 consts.b_0 / est.c0_eps, consts.beta_inf});
    if (halve_rhs) rhs *= 0.5;
    if (!(rhs > 0.0)) return 0.0;

    auto lhs = [&](double k) { return k * model.d2f_sup(k); };
    double hi = model.v_inf.norm() + 10.0;
    if (lhs(hi) == 0.0) return std::numeric_limits<double>::infinity();
    if (lhs(hi) <= rhs) return hi;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (lhs(mid) <= rhs ? lo : hi) = mid;
    }
    return lo;
}

double weighted_lp_norm(const Field& field, const WeightSpec& spec, double p) {
    const Grid2D& g = field.grid;
    Eigen::VectorXd x(2);
    if (std::isinf(p)) {
        double sup = 0.0;
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) {
                x << g.coord(i), g.coord(j);
                sup = std::max(sup, weight_eval(spec, x) * field.magnitude(i, j));
            }
        return sup;
    }
    if (!(p >= 1.0)) throw std::invalid_argument("weighted_lp_norm: need p >= 1");
    double sum = 0.0;
    for (int j = 0; j < g.n; ++j) {
        double wj = (j == 0 || j == g.n - 1) ? 0.5 : 1.0;
        for (int i = 0; i < g.n; ++i) {
            double wi = (i == 0 || i == g.n - 1) ? 0.5 : 1.0;
            x << g.coord(i), g.coord(j);
            double th = weight_eval(spec, x);
            sum += wi * wj * std::pow(th * field.magnitude(i, j), p);
        }
    }
    return std::pow(sum * g.dx * g.dx, 1.0 / p);
}

}  // namespace rotwave
