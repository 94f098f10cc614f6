#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rotwave/matrix_analysis.hpp"
#include "rotwave/model.hpp"

#include <Eigen/Eigenvalues>

#include <complex>
#include <random>

using namespace rotwave;

TEST_CASE("qcgl nonlinearity evaluation") {
    QCGLParams p;
    SUBCASE("u = 0 is a zero") {
        CHECK(std::abs(qcgl_eval(p, std::complex<double>(0.0, 0.0))) == 0.0);
        CHECK(qcgl_eval(p, Eigen::Vector2d::Zero().eval()).norm() == 0.0);
    }
    SUBCASE("u = 1 gives delta + beta + gamma") {
        std::complex<double> v = qcgl_eval(p, std::complex<double>(1.0, 0.0));
        CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(v.imag() == doctest::Approx(0.9).epsilon(1e-14));
    }
    SUBCASE("real form matches the complex form") {
        std::mt19937_64 rng(5u);
        std::uniform_real_distribution<double> ud(-2.0, 2.0);
        for (int k = 0; k < 200; ++k) {
            std::complex<double> u(ud(rng), ud(rng));
            std::complex<double> fc = qcgl_eval(p, u);
            Eigen::Vector2d fr = qcgl_eval(p, Eigen::Vector2d(u.real(), u.imag()));
            CHECK(std::abs(fc.real() - fr(0)) <= 1e-14 * (1.0 + std::abs(fc)));
            CHECK(std::abs(fc.imag() - fr(1)) <= 1e-14 * (1.0 + std::abs(fc)));
        }
    }
    SUBCASE("g-form factorization f(u) = g(|u|^2) u") {
        std::mt19937_64 rng(6u);
        std::uniform_real_distribution<double> ud(-2.0, 2.0);
        for (int k = 0; k < 100; ++k) {
            std::complex<double> u(ud(rng), ud(rng));
            double v = std::norm(u);
            std::complex<double> g = p.delta + p.beta * v + p.gamma * v * v;
            CHECK(std::abs(qcgl_eval(p, u) - g * u) <= 1e-13 * (1.0 + std::abs(g * u)));
        }
        // g(0) = delta
        CHECK(std::abs(p.delta + std::complex<double>(0.5, 0.0)) == 0.0);
    }
}

TEST_CASE("qcgl jacobian") {
    QCGLParams p;
    SUBCASE("at the origin: [[-1/2, 0], [0, -1/2]]") {
        Eigen::Matrix2d j = qcgl_jacobian(p, Eigen::Vector2d::Zero());
        CHECK(j(0, 0) == doctest::Approx(-0.5).epsilon(1e-14));
        CHECK(j(0, 1) == doctest::Approx(0.0));
        CHECK(j(1, 0) == doctest::Approx(0.0));
        CHECK(j(1, 1) == doctest::Approx(-0.5).epsilon(1e-14));
    }
    SUBCASE("matches central finite differences on 1000 points") {
        std::mt19937_64 rng(7u);
        std::uniform_real_distribution<double> ud(-1.5, 1.5);
        const double h = 1e-6;
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            Eigen::Vector2d u(ud(rng), ud(rng));
            Eigen::Matrix2d j = qcgl_jacobian(p, u);
            for (int c = 0; c < 2; ++c) {
                Eigen::Vector2d e = Eigen::Vector2d::Zero();
                e(c) = h;
                Eigen::Vector2d fd =
                    (qcgl_eval(p, (u + e).eval()) - qcgl_eval(p, (u - e).eval())) / (2.0 * h);
                worst = std::max(worst, (fd - j.col(c)).cwiseAbs().maxCoeff());
            }
        }
        CHECK(worst <= 1e-7);
    }
    SUBCASE("even under u -> -u") {
        std::mt19937_64 rng(8u);
        std::uniform_real_distribution<double> ud(-2.0, 2.0);
        for (int k = 0; k < 50; ++k) {
            Eigen::Vector2d u(ud(rng), ud(rng));
            CHECK((qcgl_jacobian(p, u) - qcgl_jacobian(p, (-u).eval())).norm() <= 1e-13);
        }
    }
}

TEST_CASE("second-derivative bound on balls") {
    QCGLParams p;
    SUBCASE("vanishes at r = 0: f - delta u starts at cubic order") {
        CHECK(qcgl_d2f_sup_on_ball(p, 0.0) == doctest::Approx(0.0));
    }
    SUBCASE("monotone in r") {
        double prev = -1.0;
        for (double r : {0.0, 0.1, 0.5, 1.0, 1.5, 2.0, 3.0}) {
            double b = qcgl_d2f_sup_on_ball(p, r);
            CHECK(b >= prev);
            prev = b;
        }
    }
    SUBCASE("dominates a sampled lower bound at r = 1") {
        // |D^2 f(z)[h, .]| estimated by differencing the Jacobian
        std::mt19937_64 rng(9u);
        std::uniform_real_distribution<double> ud(-1.0, 1.0);
        const double h = 1e-5;
        double sampled = 0.0;
        for (int k = 0; k < 10000; ++k) {
            Eigen::Vector2d z(ud(rng), ud(rng));
            if (z.norm() > 1.0) z /= z.norm();
            Eigen::Vector2d dir(ud(rng), ud(rng));
            if (dir.norm() < 1e-12) continue;
            dir.normalize();
            Eigen::Matrix2d d2 = (qcgl_jacobian(p, (z + h * dir).eval()) -
                                  qcgl_jacobian(p, (z - h * dir).eval())) /
                                 (2.0 * h);
            sampled = std::max(sampled, d2.operatorNorm());
        }
        CHECK(qcgl_d2f_sup_on_ball(p, 1.0) >= sampled * (1.0 - 1e-6));
    }
}

TEST_CASE("reaction model bundle") {
    ReactionModel m = make_model("qcgl");
    SUBCASE("f(v_inf) = 0 exactly and Df matches f") {
        CHECK(m.f(m.v_inf).norm() == 0.0);
        std::mt19937_64 rng(10u);
        std::uniform_real_distribution<double> ud(-1.0, 1.0);
        const double h = 1e-6;
        for (int k = 0; k < 100; ++k) {
            Eigen::VectorXd u(2);
            u << ud(rng), ud(rng);
            Eigen::MatrixXd j = m.df(u);
            for (int c = 0; c < 2; ++c) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(2);
                e(c) = h;
                Eigen::VectorXd fd = (m.f(u + e) - m.f(u - e)) / (2.0 * h);
                CHECK((fd - j.col(c)).cwiseAbs().maxCoeff() <= 1e-8);
            }
        }
    }
    SUBCASE("d2f_sup agrees with the ball bound") {
        QCGLParams p;
        for (double r : {0.3, 1.0, 2.5})
            CHECK(m.d2f_sup(r) == doctest::Approx(qcgl_d2f_sup_on_ball(p, r)));
    }
    SUBCASE("unknown model name rejected") {
        CHECK_THROWS(make_model("brusselator"));
    }
}

TEST_CASE("complex to real block form") {
    SUBCASE("A = i is the rotation generator") {
        Eigen::MatrixXcd a(1, 1);
        a(0, 0) = std::complex<double>(0.0, 1.0);
        Eigen::MatrixXd r = complexify_realify(a);
        CHECK(r(0, 0) == doctest::Approx(0.0));
        CHECK(r(0, 1) == doctest::Approx(-1.0));
        CHECK(r(1, 0) == doctest::Approx(1.0));
        CHECK(r(1, 1) == doctest::Approx(0.0));
    }
    SUBCASE("alpha = 1/2 + i/2: spectrum {alpha, conj(alpha)}") {
        Eigen::MatrixXcd a(1, 1);
        a(0, 0) = std::complex<double>(0.5, 0.5);
        Eigen::EigenSolver<Eigen::MatrixXd> es(complexify_realify(a));
        auto ev = es.eigenvalues();
        CHECK(ev(0).real() == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(ev(1).real() == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(std::abs(ev(0).imag()) == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(ev(0).imag() == doctest::Approx(-ev(1).imag()).epsilon(1e-13));
    }
    SUBCASE("norm relation |Av| = |bold(A) bold(v)| on random samples") {
        std::mt19937_64 rng(11u);
        std::uniform_real_distribution<double> ud(-1.0, 1.0);
        const int n = 3;
        Eigen::MatrixXcd a(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) a(i, j) = std::complex<double>(ud(rng), ud(rng));
        Eigen::MatrixXd r = complexify_realify(a);
        for (int k = 0; k < 100; ++k) {
            Eigen::VectorXcd v(n);
            for (int i = 0; i < n; ++i) v(i) = std::complex<double>(ud(rng), ud(rng));
            Eigen::VectorXcd av = a * v;
            Eigen::VectorXd vr(2 * n);
            vr << v.real(), v.imag();
            Eigen::VectorXd avr = r * vr;
            CHECK(std::abs(av.norm() - avr.norm()) <= 1e-13 * (1.0 + av.norm()));
        }
    }
    SUBCASE("antieigenvalue of the scalar complexification is Re alpha / |alpha|") {
        std::complex<double> alpha(0.5, 0.5);
        Eigen::MatrixXcd a(1, 1);
        a(0, 0) = alpha;
        AntiEigenvalue mu = first_antieigenvalue(SquareMatrix::real(complexify_realify(a)));
        CHECK(mu.mu1 == doctest::Approx(alpha.real() / std::abs(alpha)).epsilon(1e-8));
    }
}
