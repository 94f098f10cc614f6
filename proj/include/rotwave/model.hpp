#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace rotwave {

/// Reaction term of a semilinear system u_t = A du + f(u), together with
/// the derivative data the decay theory needs.
struct ReactionModel {
    std::string name;
    int n_real = 0;
    Eigen::VectorXd v_inf;

    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> df;
    // Monotone upper bound for sup_{|z - v_inf| <= r} |D^2 f(z)| (operator
    // norm of the bilinear second derivative). Empty when unavailable.
    std::function<double(double)> d2f_sup;
};

struct QCGLParams {
    std::complex<double> alpha{0.5, 0.5};
    std::complex<double> beta{2.5, 1.0};
    std::complex<double> gamma{-1.0, -0.1};
    std::complex<double> delta{-0.5, 0.0};
};

/// f(u) = u (delta + beta |u|^2 + gamma |u|^4), complex form.
std::complex<double> qcgl_eval(const QCGLParams& p, std::complex<double> u);

/// Real 2-vector form of the same nonlinearity.
Eigen::Vector2d qcgl_eval(const QCGLParams& p, const Eigen::Vector2d& u);

/// Closed-form Jacobian of the real 2-vector form.
Eigen::Matrix2d qcgl_jacobian(const QCGLParams& p, const Eigen::Vector2d& u);

/// Certified upper bound for sup over the ball |u| <= r of the operator
/// norm of D^2 f, from triangle inequalities on the Wirtinger derivatives.
double qcgl_d2f_sup_on_ball(const QCGLParams& p, double r);

/// Diffusion matrix of the real form: [[a1, -a2], [a2, a1]].
Eigen::Matrix2d qcgl_diffusion(const QCGLParams& p);

ReactionModel make_qcgl_model(const QCGLParams& p);

/// Model registry keyed by name; only "qcgl" ships.
ReactionModel make_model(const std::string& name, const QCGLParams& p = {});

/// 2N x 2N real block form [[A1, -A2], [A2, A1]] of a complex N x N matrix.
Eigen::MatrixXd complexify_realify(const Eigen::MatrixXcd& a);

}  // namespace rotwave
