#include "rotwave/matrix_analysis.hpp"

#include "rotwave/model.hpp"

#include "nelder_mead.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace rotwave {

namespace {

constexpr double kBig = 1e30;

// Ambient dimension of the unit sphere search: R^N for real-tagged
// matrices, C^N ~ R^{2N} otherwise.
int ambient_dim(const SquareMatrix& A) { return A.real_valued ? A.size() : 2 * A.size(); }

Eigen::VectorXcd to_vec(const SquareMatrix& A, const Eigen::VectorXd& x) {
    const int n = A.size();
    Eigen::VectorXcd v(n);
    if (A.real_valued) {
        for (int i = 0; i < n; ++i) v(i) = x(i);
    } else {
        for (int i = 0; i < n; ++i) v(i) = std::complex<double>(x(i), x(n + i));
    }
    return v;
}

double re_inner(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    return u.dot(v).real();  // Eigen's dot conjugates the first argument
}

}  // namespace

SquareMatrix SquareMatrix::real(const Eigen::MatrixXd& a) {
    SquareMatrix s;
    s.m = a.cast<std::complex<double>>();
    s.real_valued = true;
    return s;
}

SquareMatrix SquareMatrix::complex(const Eigen::MatrixXcd& a) {
    SquareMatrix s;
    s.m = a;
    s.real_valued = false;
    return s;
}

bool AssumptionReport::all_satisfied() const {
    for (const auto& [id, e] : conditions)
        if (!e.satisfied) return false;
    return true;
}

SpectralBounds spectral_bounds(const SquareMatrix& M) {
    if (M.m.rows() != M.m.cols()) throw std::invalid_argument("spectral_bounds: matrix not square");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M.m, false);
    const auto& ev = es.eigenvalues();
    SpectralBounds b{};
    b.radius = 0.0;
    b.abscissa = -std::numeric_limits<double>::infinity();
    b.a_0 = std::numeric_limits<double>::infinity();
    double min_abs = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ev.size(); ++i) {
        b.radius = std::max(b.radius, std::abs(ev(i)));
        b.abscissa = std::max(b.abscissa, ev(i).real());
        b.a_0 = std::min(b.a_0, ev(i).real());
        min_abs = std::min(min_abs, std::abs(ev(i)));
    }
    b.a_max = b.radius;
    b.b_0 = -b.abscissa;
    if (min_abs < 1e-14 * std::max(1.0, b.radius))
        b.a_min = std::numeric_limits<double>::quiet_NaN();
    else
        b.a_min = min_abs;  // (rho(A^{-1}))^{-1} = min |lambda|
    return b;
}

AntiEigenvalue first_antieigenvalue(const SquareMatrix& A) {
    if (A.m.norm() == 0.0) throw std::invalid_argument("first_antieigenvalue: zero matrix");
    const int k = ambient_dim(A);
    const double scale = A.m.norm();

    auto objective = [&](const Eigen::VectorXd& x) -> double {
        double nrm = x.norm();
        if (nrm < 1e-14) return kBig;
        Eigen::VectorXcd w = to_vec(A, x / nrm);
        Eigen::VectorXcd aw = A.m * w;
        double aw_norm = aw.norm();
        if (aw_norm < 1e-13 * scale) return kBig;
        return re_inner(w, aw) / aw_norm;
    };

    std::mt19937_64 rng(20240817u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n_samples = 10000;
    const int n_refine = 10;
    std::vector<std::pair<double, Eigen::VectorXd>> best;
    for (int s = 0; s < n_samples; ++s) {
        Eigen::VectorXd x(k);
        for (int i = 0; i < k; ++i) x(i) = gauss(rng);
        double val = objective(x);
        best.emplace_back(val, x);
    }
    std::partial_sort(best.begin(), best.begin() + n_refine, best.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

    double mu = kBig;
    for (int i = 0; i < n_refine; ++i) {
        Eigen::VectorXd x = detail::nelder_mead(objective, best[i].second.normalized(), 0.05, 600);
        mu = std::min(mu, objective(x));
    }
    AntiEigenvalue r{};
    r.mu1 = mu;
    r.angle = std::acos(std::clamp(mu, -1.0, 1.0));
    return r;
}

double lp_dissipativity_margin(const SquareMatrix& A, double p) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("lp_dissipativity_margin: need 1 < p < inf");
    const int k = ambient_dim(A);

    // Quadratic form restricted to |z| = |w| = 1.
    auto form = [&](const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) {
        Eigen::VectorXcd aw = A.m * w;
        return re_inner(w, aw) + (p - 2.0) * re_inner(w, z) * re_inner(z, aw);
    };
    auto objective = [&](const Eigen::VectorXd& x) -> double {
        Eigen::VectorXd xz = x.head(k), xw = x.tail(k);
        if (xz.norm() < 1e-14 || xw.norm() < 1e-14) return kBig;
        return form(to_vec(A, xz / xz.norm()), to_vec(A, xw / xw.norm()));
    };

    std::mt19937_64 rng(777001u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n_samples = 100000;
    const int n_refine = 10;
    std::vector<std::pair<double, Eigen::VectorXd>> best;
    best.reserve(n_samples);
    for (int s = 0; s < n_samples; ++s) {
        Eigen::VectorXd x(2 * k);
        for (int i = 0; i < 2 * k; ++i) x(i) = gauss(rng);
        best.emplace_back(objective(x), x);
    }
    std::partial_sort(best.begin(), best.begin() + n_refine, best.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

    double gamma = kBig;
    for (int i = 0; i < n_refine; ++i) {
        Eigen::VectorXd x0 = best[i].second;
        x0.head(k).normalize();
        x0.tail(k).normalize();
        Eigen::VectorXd x = detail::nelder_mead(objective, x0, 0.05, 800);
        gamma = std::min(gamma, objective(x));
    }
    return gamma;
}

PRange p_range(const SquareMatrix& A) {
    if (A.m.norm() == 0.0) throw std::invalid_argument("p_range: zero matrix");
    double mu1 = first_antieigenvalue(A).mu1;
    PRange r;
    if (mu1 <= 0.0) return r;  // empty
    r.nonempty = true;
    r.p_min = 2.0 / (1.0 + mu1);
    r.p_max = (mu1 >= 1.0 - 1e-14) ? std::numeric_limits<double>::infinity() : 2.0 / (1.0 - mu1);
    return r;
}

double coercivity_constant(const SquareMatrix& M) {
    Eigen::MatrixXcd herm = 0.5 * (M.m + M.m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

SimultaneousDiagonalization simultaneous_diagonalize(const SquareMatrix& A,
                                                     const SquareMatrix& B, double tol) {
    SimultaneousDiagonalization r;
    const int n = A.size();
    if (B.size() != n) throw std::invalid_argument("simultaneous_diagonalize: size mismatch");
    Eigen::MatrixXcd comm = A.m * B.m - B.m * A.m;
    r.commutator_norm = comm.norm();
    double scale = A.m.norm() * B.m.norm();
    if (scale > 0.0 && r.commutator_norm > tol * scale * 1e4) {
        r.error = "commutator too large";
        return r;
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A.m, true);
    Eigen::MatrixXcd V = es.eigenvectors();
    Eigen::VectorXcd la = es.eigenvalues();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svdv(V);
    if (svdv.singularValues()(0) / svdv.singularValues()(n - 1) > 1e12) {
        r.error = "defective A";
        return r;
    }

    // Within eigenvalue clusters of A, rediagonalize the projected B block
    // so that Y simultaneously diagonalizes both.
    Eigen::MatrixXcd Y = V;
    double cluster_tol = 1e-8 * std::max(1.0, la.cwiseAbs().maxCoeff());
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && std::abs(la(j + 1) - la(i)) <= cluster_tol) ++j;
        int m = j - i + 1;
        if (m > 1) {
            Eigen::MatrixXcd Vi = V.middleCols(i, m);
            Eigen::MatrixXcd Bi =
                (Vi.completeOrthogonalDecomposition().pseudoInverse() * B.m * Vi);
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> esb(Bi, true);
            Y.middleCols(i, m) = Vi * esb.eigenvectors();
        }
        i = j + 1;
    }
    for (int c = 0; c < n; ++c) Y.col(c).normalize();

    Eigen::MatrixXcd Yinv = Y.inverse();
    Eigen::MatrixXcd da = Yinv * A.m * Y;
    Eigen::MatrixXcd db = Yinv * B.m * Y;
    Eigen::MatrixXcd da_off = da, db_off = db;
    da_off.diagonal().setZero();
    db_off.diagonal().setZero();
    if (da_off.norm() > 1e-9 * std::max(1.0, A.m.norm()) ||
        db_off.norm() > 1e-8 * std::max(1.0, B.m.norm())) {
        r.error = "joint diagonalization failed";
        return r;
    }

    r.ok = true;
    r.Y = Y;
    r.Y_inv = Yinv;
    r.lambda_A = da.diagonal();
    r.lambda_B = db.diagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Y);
    r.kappa = svd.singularValues()(0) / svd.singularValues()(n - 1);
    return r;
}

SpectralConstants constants_bundle(const SquareMatrix& A, const SquareMatrix& B_inf, int d,
                                   double p) {
    SpectralBounds ba = spectral_bounds(A);
    if (!std::isfinite(ba.a_min)) throw std::invalid_argument("constants_bundle: singular A");
    SpectralBounds bb = spectral_bounds(B_inf);

    SpectralConstants c{};
    c.d = d;
    c.a_min = ba.a_min;
    c.a_max = ba.a_max;
    c.a_0 = ba.a_0;
    c.b_0 = bb.a_0;  // -s(-B_inf) = min Re sigma(B_inf)
    c.a_1 = (c.a_0 > 0.0)
                ? std::pow(c.a_max * c.a_max / (c.a_min * c.a_0), 0.5 * d)
                : std::numeric_limits<double>::quiet_NaN();
    auto sd = simultaneous_diagonalize(A, B_inf);
    c.kappa = sd.ok ? sd.kappa : std::numeric_limits<double>::quiet_NaN();
    c.beta_A = coercivity_constant(A);
    c.beta_inf = coercivity_constant(B_inf);
    c.gamma_A = lp_dissipativity_margin(A, p);
    return c;
}

AssumptionReport assumption_report(const SquareMatrix& A, const SquareMatrix& S,
                                   const ReactionModel& model, const Eigen::VectorXd& v_inf,
                                   double p) {
    AssumptionReport rep;
    auto put = [&](const std::string& id, bool ok, double witness, double tol,
                   const std::string& note) {
        rep.conditions[id] = ConditionEntry{ok, witness, tol, note};
    };

    const int n = A.size();

    {  // A1: A diagonalizable over C
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A.m, true);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(es.eigenvectors());
        double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
        put("A1", cond < 1e12, cond, 1e12, "cond of eigenvector matrix");
    }
    SpectralBounds ba = spectral_bounds(A);
    put("A2", ba.a_0 > 0.0, ba.a_0, 0.0, "min Re sigma(A)");
    double beta_a = coercivity_constant(A);
    put("A3", beta_a > 0.0, beta_a, 0.0, "beta_A");
    double gamma_a = lp_dissipativity_margin(A, p);
    put("A4", gamma_a > 0.0, gamma_a, 0.0, "gamma_A at requested p");

    {  // A6: S skew-symmetric
        Eigen::MatrixXcd sym = S.m + S.m.transpose();
        double w = sym.cwiseAbs().maxCoeff();
        put("A6", w <= 1e-12, w, 1e-12, "max |S + S^T| entry");
    }
    {  // A7: f in C^2, checked as Jacobian/finite-difference consistency
        std::mt19937_64 rng(3141u);
        std::normal_distribution<double> gauss(0.0, 0.7);
        double max_err = 0.0;
        const double h = 1e-6;
        for (int s = 0; s < 20; ++s) {
            Eigen::VectorXd u(model.n_real);
            for (int i = 0; i < model.n_real; ++i) u(i) = gauss(rng);
            Eigen::MatrixXd J = model.df(u);
            for (int j = 0; j < model.n_real; ++j) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(model.n_real);
                e(j) = h;
                Eigen::VectorXd col = (model.f(u + e) - model.f(u - e)) / (2.0 * h);
                max_err = std::max(max_err, (col - J.col(j)).cwiseAbs().maxCoeff());
            }
        }
        put("A7", max_err <= 1e-6, max_err, 1e-6, "Jacobian vs finite differences");
    }
    {  // A8: f(v_inf) = 0
        double res = model.f(v_inf).norm();
        put("A8", res <= 1e-13, res, 1e-13, "|f(v_inf)|");
    }
    Eigen::MatrixXd dfv = model.df(v_inf);
    {  // A9: A and Df(v_inf) simultaneously diagonalizable
        auto sd = simultaneous_diagonalize(A, SquareMatrix::real(dfv));
        put("A9", sd.ok, sd.ok ? sd.kappa : sd.commutator_norm, 1e-10,
            sd.ok ? "cond(Y)" : sd.error);
    }
    SpectralBounds bdf = spectral_bounds(SquareMatrix::real(dfv));
    put("A10", bdf.abscissa < 0.0, bdf.abscissa, 0.0, "s(Df(v_inf))");
    double beta_inf = coercivity_constant(SquareMatrix::real(Eigen::MatrixXd(-dfv)));
    put("A11", beta_inf > 0.0, beta_inf, 0.0, "beta_inf");

    return rep;
}

}  // namespace rotwave
