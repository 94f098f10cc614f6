#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rotwave/matrix_analysis.hpp"
#include "rotwave/model.hpp"

#include <random>

using namespace rotwave;

namespace {

Eigen::Matrix2d qcgl_A() {
    Eigen::Matrix2d a;
    a << 0.5, -0.5, 0.5, 0.5;
    return a;
}

}  // namespace

TEST_CASE("spectral bounds of the QCGL diffusion block") {
    SpectralBounds b = spectral_bounds(SquareMatrix::real(qcgl_A()));
    CHECK(b.a_min == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
    CHECK(b.a_max == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
    CHECK(b.a_0 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("spectral bounds of the identity") {
    SpectralBounds b = spectral_bounds(SquareMatrix::real(Eigen::Matrix2d::Identity()));
    CHECK(b.radius == doctest::Approx(1.0));
    CHECK(b.abscissa == doctest::Approx(1.0));
    CHECK(b.a_min == doctest::Approx(1.0));
    CHECK(b.a_max == doctest::Approx(1.0));
    CHECK(b.a_0 == doctest::Approx(1.0));
}

TEST_CASE("spectral bounds of an upper-triangular matrix read off the diagonal") {
    Eigen::Matrix3d m;
    m << 1.0, 0.7, -0.3, 0.0, 2.0, 0.9, 0.0, 0.0, 3.0;
    SpectralBounds b = spectral_bounds(SquareMatrix::real(m));
    CHECK(b.radius == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(b.abscissa == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("first antieigenvalue") {
    SUBCASE("QCGL block: Re alpha / |alpha|") {
        AntiEigenvalue r = first_antieigenvalue(SquareMatrix::real(qcgl_A()));
        CHECK(r.mu1 == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-6));
        CHECK(r.angle == doctest::Approx(std::acos(r.mu1)));
    }
    SUBCASE("identity") {
        AntiEigenvalue r = first_antieigenvalue(SquareMatrix::real(Eigen::Matrix3d::Identity()));
        CHECK(r.mu1 == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("diag(1,4): two-eigenvalue formula 2 sqrt(ab)/(a+b)") {
        Eigen::Matrix2d m = Eigen::Vector2d(1.0, 4.0).asDiagonal();
        AntiEigenvalue r = first_antieigenvalue(SquareMatrix::real(m));
        CHECK(r.mu1 == doctest::Approx(0.8).epsilon(1e-6));
    }
    SUBCASE("scaling invariance and range") {
        Eigen::Matrix2d m;
        m << 1.0, -0.4, 0.6, 2.0;
        double m1 = first_antieigenvalue(SquareMatrix::real(m)).mu1;
        double m2 = first_antieigenvalue(SquareMatrix::real((3.7 * m).eval())).mu1;
        CHECK(m1 == doctest::Approx(m2).epsilon(1e-5));
        CHECK(m1 <= 1.0 + 1e-12);
        CHECK(m1 >= -1.0 - 1e-12);
    }
}

TEST_CASE("lp dissipativity margin") {
    SquareMatrix A = SquareMatrix::real(qcgl_A());
    SUBCASE("p = 2 collapses to the coercivity constant") {
        CHECK(lp_dissipativity_margin(A, 2.0) == doctest::Approx(0.5).epsilon(1e-4));
    }
    SUBCASE("identity: gamma = 1 for p >= 2, p - 1 below") {
        SquareMatrix I = SquareMatrix::real(Eigen::Matrix2d::Identity());
        CHECK(lp_dissipativity_margin(I, 2.0) == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(lp_dissipativity_margin(I, 3.5) == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(lp_dissipativity_margin(I, 1.5) == doctest::Approx(0.5).epsilon(1e-3));
    }
    SUBCASE("sign flips outside the admissible window") {
        PRange pr = p_range(A);
        CHECK(lp_dissipativity_margin(A, pr.p_max + 0.2) < 0.0);
        CHECK(lp_dissipativity_margin(A, pr.p_min - 0.05) < 0.0);
        CHECK(lp_dissipativity_margin(A, 0.5 * (pr.p_min + pr.p_max)) > 0.0);
    }
}

TEST_CASE("admissible p-range") {
    SUBCASE("QCGL: (1.1716, 6.8284)") {
        PRange pr = p_range(SquareMatrix::real(qcgl_A()));
        CHECK(pr.nonempty);
        CHECK(pr.p_min == doctest::Approx(4.0 / (2.0 + std::sqrt(2.0))).epsilon(1e-6));
        CHECK(pr.p_max == doctest::Approx(4.0 / (2.0 - std::sqrt(2.0))).epsilon(1e-6));
        CHECK(pr.p_min == doctest::Approx(1.1716).epsilon(1e-3));
        CHECK(pr.p_max == doctest::Approx(6.8284).epsilon(1e-3));
    }
    SUBCASE("positive multiple of the identity: (1, inf)") {
        PRange pr = p_range(SquareMatrix::real((2.0 * Eigen::Matrix2d::Identity()).eval()));
        CHECK(pr.nonempty);
        CHECK(pr.p_min == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::isinf(pr.p_max));
    }
    SUBCASE("mu1 = 0.8 gives (10/9, 10)") {
        Eigen::Matrix2d m = Eigen::Vector2d(1.0, 4.0).asDiagonal();
        PRange pr = p_range(SquareMatrix::real(m));
        CHECK(pr.p_min == doctest::Approx(10.0 / 9.0).epsilon(1e-4));
        CHECK(pr.p_max == doctest::Approx(10.0).epsilon(1e-3));
    }
}

TEST_CASE("coercivity constant") {
    CHECK(coercivity_constant(SquareMatrix::real(qcgl_A())) == doctest::Approx(0.5).epsilon(1e-10));
    Eigen::Matrix2d d = Eigen::Vector2d(2.0, 3.0).asDiagonal();
    CHECK(coercivity_constant(SquareMatrix::real(d)) == doctest::Approx(2.0).epsilon(1e-12));
    ReactionModel m = make_qcgl_model({});
    Eigen::Matrix2d b_inf = -m.df(m.v_inf);
    CHECK(coercivity_constant(SquareMatrix::real(b_inf)) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("simultaneous diagonalization") {
    SUBCASE("identity pair") {
        auto r = simultaneous_diagonalize(SquareMatrix::real(Eigen::Matrix2d::Identity()),
                                          SquareMatrix::real(Eigen::Matrix2d::Identity()));
        REQUIRE(r.ok);
        CHECK(r.kappa == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("QCGL diffusion with Df(0): eigenvalues alpha, conj(alpha)") {
        ReactionModel m = make_qcgl_model({});
        auto r = simultaneous_diagonalize(SquareMatrix::real(qcgl_A()),
                                          SquareMatrix::real((-m.df(m.v_inf)).eval()));
        REQUIRE(r.ok);
        std::complex<double> alpha(0.5, 0.5);
        double d0 = std::min(std::abs(r.lambda_A(0) - alpha), std::abs(r.lambda_A(0) - std::conj(alpha)));
        double d1 = std::min(std::abs(r.lambda_A(1) - alpha), std::abs(r.lambda_A(1) - std::conj(alpha)));
        CHECK(d0 < 1e-12);
        CHECK(d1 < 1e-12);
        CHECK(r.kappa == doctest::Approx(1.0).epsilon(1e-8));
        // reconstruction residual for both matrices
        Eigen::MatrixXcd A = qcgl_A().cast<std::complex<double>>();
        CHECK((r.Y_inv * A * r.Y - Eigen::MatrixXcd(r.lambda_A.asDiagonal())).norm() < 1e-10);
    }
    SUBCASE("non-commuting pair fails with a commutator witness") {
        Eigen::Matrix2d a = Eigen::Vector2d(1.0, 2.0).asDiagonal();
        Eigen::Matrix2d b;
        b << 0.0, 1.0, 0.0, 0.0;
        auto r = simultaneous_diagonalize(SquareMatrix::real(a), SquareMatrix::real(b));
        CHECK_FALSE(r.ok);
        CHECK(r.commutator_norm > 0.1);
    }
}

TEST_CASE("constants bundle") {
    ReactionModel m = make_qcgl_model({});
    SquareMatrix A = SquareMatrix::real(qcgl_A());
    SquareMatrix B = SquareMatrix::real((-m.df(m.v_inf)).eval());
    SUBCASE("QCGL d = 2") {
        SpectralConstants k = constants_bundle(A, B, 2);
        CHECK(k.a_min == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
        CHECK(k.a_max == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
        CHECK(k.a_0 == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(k.b_0 == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(k.a_1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        CHECK(k.kappa == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(k.beta_A == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(k.beta_inf == doctest::Approx(0.5).epsilon(1e-10));
    }
    SUBCASE("QCGL d = 3: a_1 = 2^{3/4}") {
        SpectralConstants k = constants_bundle(A, B, 3);
        CHECK(k.a_1 == doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-12));
    }
    SUBCASE("identity pair: all ones") {
        SpectralConstants k = constants_bundle(SquareMatrix::real(Eigen::Matrix2d::Identity()),
                                               SquareMatrix::real(Eigen::Matrix2d::Identity()), 2);
        CHECK(k.a_1 == doctest::Approx(1.0));
        CHECK(k.kappa == doctest::Approx(1.0));
        CHECK(k.b_0 == doctest::Approx(1.0));
    }
}

TEST_CASE("assumption report") {
    ReactionModel m = make_qcgl_model({});
    Eigen::Matrix2d S;
    S << 0.0, 1.0, -1.0, 0.0;
    SUBCASE("QCGL passes everything") {
        AssumptionReport rep = assumption_report(SquareMatrix::real(qcgl_A()),
                                                 SquareMatrix::real(S), m, m.v_inf, 2.0);
        CHECK(rep.all_satisfied());
        CHECK(rep.conditions.count("A1") == 1);
        CHECK(rep.conditions.count("A11") == 1);
        CHECK(rep.conditions.count("A5") == 0);  // not assigned in the numbering
    }
    SUBCASE("positive Re delta breaks A10/A11") {
        QCGLParams p;
        p.delta = {0.5, 0.0};
        ReactionModel bad = make_qcgl_model(p);
        AssumptionReport rep = assumption_report(SquareMatrix::real(qcgl_A()),
                                                 SquareMatrix::real(S), bad, bad.v_inf, 2.0);
        CHECK_FALSE(rep.conditions.at("A10").satisfied);
        CHECK_FALSE(rep.conditions.at("A11").satisfied);
    }
    SUBCASE("non-skew S breaks A6") {
        Eigen::Matrix2d bad;
        bad << 0.0, 1.0, 1.0, 0.0;
        AssumptionReport rep = assumption_report(SquareMatrix::real(qcgl_A()),
                                                 SquareMatrix::real(bad), m, m.v_inf, 2.0);
        CHECK_FALSE(rep.conditions.at("A6").satisfied);
    }
}

TEST_CASE("implication chain and (A4) equivalence on random matrices") {
    std::mt19937_64 rng(20250817u);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    std::uniform_real_distribution<double> up(1.05, 6.0);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int n = (trial % 2) ? 3 : 2;
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = ud(rng);
        // bias toward accretive matrices so both implication branches occur
        m += 0.8 * Eigen::MatrixXd::Identity(n, n);
        double p = up(rng);
        SquareMatrix A = SquareMatrix::real(m);
        double gamma = lp_dissipativity_margin(A, p);
        double beta = coercivity_constant(A);
        double a0 = spectral_bounds(A).a_0;
        if (gamma > 1e-8) CHECK(beta > -1e-9);
        if (beta > 1e-8) CHECK(a0 > -1e-9);
        double mu1 = first_antieigenvalue(A).mu1;
        double crit = mu1 - std::abs(p - 2.0) / p;
        // equivalence (A4) <-> (A4DC), away from the sign boundary
        if (std::abs(crit) > 1e-3 && std::abs(gamma) > 1e-3) {
            CHECK((gamma > 0.0) == (crit > 0.0));
            ++checked;
        }
    }
    CHECK(checked > 100);
}
