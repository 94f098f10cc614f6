#include "rotwave/model.hpp"

#include <cmath>

namespace rotwave {

std::complex<double> qcgl_eval(const QCGLParams& p, std::complex<double> u) {
    double v = std::norm(u);
    return u * (p.delta + p.beta * v + p.gamma * v * v);
}

Eigen::Vector2d qcgl_eval(const QCGLParams& p, const Eigen::Vector2d& u) {
    const double u1 = u(0), u2 = u(1);
    const double v = u1 * u1 + u2 * u2;
    const double b1 = p.beta.real(), b2 = p.beta.imag();
    const double g1 = p.gamma.real(), g2 = p.gamma.imag();
    const double d1 = p.delta.real(), d2 = p.delta.imag();
    Eigen::Vector2d out;
    out(0) = (u1 * d1 - u2 * d2) + (u1 * b1 - u2 * b2) * v + (u1 * g1 - u2 * g2) * v * v;
    out(1) = (u1 * d2 + u2 * d1) + (u1 * b2 + u2 * b1) * v + (u1 * g2 + u2 * g1) * v * v;
    return out;
}

Eigen::Matrix2d qcgl_jacobian(const QCGLParams& p, const Eigen::Vector2d& u) {
    const double u1 = u(0), u2 = u(1);
    const double v = u1 * u1 + u2 * u2;
    const double b1 = p.beta.real(), b2 = p.beta.imag();
    const double g1 = p.gamma.real(), g2 = p.gamma.imag();
    const double d1 = p.delta.real(), d2 = p.delta.imag();
    const double c1 = u1 * b1 - u2 * b2, c2 = u1 * b2 + u2 * b1;
    const double q1 = u1 * g1 - u2 * g2, q2 = u1 * g2 + u2 * g1;
    Eigen::Matrix2d J;
    J(0, 0) = d1 + b1 * v + 2.0 * u1 * c1 + g1 * v * v + 4.0 * v * u1 * q1;
    J(0, 1) = -d2 - b2 * v + 2.0 * u2 * c1 - g2 * v * v + 4.0 * v * u2 * q1;
    J(1, 0) = d2 + b2 * v + 2.0 * u1 * c2 + g2 * v * v + 4.0 * v * u1 * q2;
    J(1, 1) = d1 + b1 * v + 2.0 * u2 * c2 + g1 * v * v + 4.0 * v * u2 * q2;
    return J;
}

double qcgl_d2f_sup_on_ball(const QCGLParams& p, double r) {
    // Wirtinger form f = delta u + beta u^2 conj(u) + gamma u^3 conj(u)^2:
    //   f_uu       = 2 beta conj(u) + 6 gamma u conj(u)^2
    //   f_u,conju  = 2 beta u       + 6 gamma u^2 conj(u)
    //   f_conj^2   = 2 gamma u^3
    // |D^2 f[h,k]| <= (|f_uu| + 2|f_u,conju| + |f_conj^2|) |h||k|.
    const double ab = std::abs(p.beta), ag = std::abs(p.gamma);
    return 6.0 * ab * r + 20.0 * ag * r * r * r;
}

Eigen::Matrix2d qcgl_diffusion(const QCGLParams& p) {
    Eigen::Matrix2d a;
    a << p.alpha.real(), -p.alpha.imag(), p.alpha.imag(), p.alpha.real();
    return a;
}

ReactionModel make_qcgl_model(const QCGLParams& p) {
    ReactionModel m;
    m.name = "qcgl";
    m.n_real = 2;
    m.v_inf = Eigen::Vector2d::Zero();
    m.f = [p](const Eigen::VectorXd& u) -> Eigen::VectorXd {
        return qcgl_eval(p, Eigen::Vector2d(u(0), u(1)));
    };
    m.df = [p](const Eigen::VectorXd& u) -> Eigen::MatrixXd {
        return qcgl_jacobian(p, Eigen::Vector2d(u(0), u(1)));
    };
    m.d2f_sup = [p](double r) { return qcgl_d2f_sup_on_ball(p, r); };
    return m;
}

ReactionModel make_model(const std::string& name, const QCGLParams& p) {
    if (name == "qcgl") return make_qcgl_model(p);
    throw std::invalid_argument("unknown model: " + name);
}

Eigen::MatrixXd complexify_realify(const Eigen::MatrixXcd& a) {
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = a.real();
    out.topRightCorner(n, n) = -a.imag();
    out.bottomLeftCorner(n, n) = a.imag();
    out.bottomRightCorner(n, n) = a.real();
    return out;
}

}  // namespace rotwave
