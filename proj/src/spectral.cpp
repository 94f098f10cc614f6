#include "rotwave/spectral.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace rotwave {

namespace {

using Complex = std::complex<double>;

inline int refl(int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
}

void normalize_eigvec(Eigen::VectorXcd& v) {
    Eigen::Index imax = 0;
    double best = 0.0;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        double a = std::abs(v(k));
        if (a > best) {
            best = a;
            imax = k;
        }
    }
    if (best > 0.0) v /= v(imax);  // pivot entry becomes exactly 1
}

Eigen::VectorXcd apply_real_sparse(const Eigen::SparseMatrix<double>& m,
                                   const Eigen::VectorXcd& x) {
    Eigen::VectorXd re = m * x.real().eval();
    Eigen::VectorXd im = m * x.imag().eval();
    return re + Complex(0.0, 1.0) * im;
}

}  // namespace

LinearizedOperator assemble_linearization(const ReactionModel& model,
                                          const Eigen::Matrix2d& A_real, const Field& w_star,
                                          double S12, const Eigen::Vector2d& x_star) {
    const Grid2D& g = w_star.grid;
    const int n = g.n;
    const int dim = 2 * g.num_nodes();
    const double cl = 1.0 / (g.dx * g.dx);
    const double cd = 0.5 / g.dx;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(dim) * 14);

    auto row_of = [&](int i, int j, int c) { return 2 * g.idx(i, j) + c; };

    Eigen::Vector2d u;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double y1 = g.coord(i) - x_star(0), y2 = g.coord(j) - x_star(1);
            double b1 = S12 * y2, b2 = -S12 * y1;  // S(x - x_star)
            u << w_star.at(i, j, 0), w_star.at(i, j, 1);
            Eigen::Matrix2d jac = model.df(u);
            for (int c = 0; c < 2; ++c) {
                int row = row_of(i, j, c);
                // A lap: couples components through A_real
                for (int cc = 0; cc < 2; ++cc) {
                    double a = A_real(c, cc);
                    if (a == 0.0) continue;
                    trip.emplace_back(row, row_of(i, j, cc), -4.0 * cl * a);
                    trip.emplace_back(row, row_of(refl(i - 1, n), j, cc), cl * a);
                    trip.emplace_back(row, row_of(refl(i + 1, n), j, cc), cl * a);
                    trip.emplace_back(row, row_of(i, refl(j - 1, n), cc), cl * a);
                    trip.emplace_back(row, row_of(i, refl(j + 1, n), cc), cl * a);
                }
                // drift: diagonal in components
                trip.emplace_back(row, row_of(refl(i + 1, n), j, c), b1 * cd);
                trip.emplace_back(row, row_of(refl(i - 1, n), j, c), -b1 * cd);
                trip.emplace_back(row, row_of(i, refl(j + 1, n), c), b2 * cd);
                trip.emplace_back(row, row_of(i, refl(j - 1, n), c), -b2 * cd);
                // reaction Jacobian block
                for (int cc = 0; cc < 2; ++cc)
                    trip.emplace_back(row, row_of(i, j, cc), jac(c, cc));
            }
        }
    LinearizedOperator lop;
    lop.L.resize(dim, dim);
    lop.L.setFromTriplets(trip.begin(), trip.end());
    lop.grid = g;
    lop.S12 = S12;
    lop.x_star = x_star;
    return lop;
}

EigsResult shift_invert_eigs(const LinearizedOperator& lop, double sigma, int neigs,
                             const EigsOptions& opt) {
    const Eigen::Index dim = lop.L.rows();
    if (neigs < 1 || neigs >= dim) throw std::invalid_argument("shift_invert_eigs: bad neigs");
    int m = opt.krylov_dim > 0 ? opt.krylov_dim : 4 * neigs + 20;
    m = std::min<Eigen::Index>(m, dim - 1);

    Eigen::SparseMatrix<double> shifted = lop.L;
    for (Eigen::Index k = 0; k < dim; ++k) shifted.coeffRef(k, k) -= sigma;
    shifted.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error(
            "shift_invert_eigs: LU of L - sigma I failed; perturb the shift");

    // deterministic start vector
    std::mt19937_64 rng(987654321u);
    std::normal_distribution<double> nd;
    Eigen::VectorXd v0(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v0(k) = nd(rng);
    v0.normalize();

    Eigen::MatrixXd V(dim, m + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    V.col(0) = v0;
    int steps = m;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd w = lu.solve(V.col(j));
        for (int pass = 0; pass < 2; ++pass)  // full reorthogonalization, two sweeps
            for (int k = 0; k <= j; ++k) {
                double h = V.col(k).dot(w);
                H(k, j) += h;
                w -= h * V.col(k);
            }
        double nw = w.norm();
        H(j + 1, j) = nw;
        if (nw < 1e-13) {
            steps = j + 1;
            break;
        }
        V.col(j + 1) = w / nw;
    }

    Eigen::MatrixXd Hm = H.topLeftCorner(steps, steps);
    Eigen::EigenSolver<Eigen::MatrixXd> es(Hm);
    const double h_last = H(steps, steps - 1);

    struct Ritz {
        Complex lambda;
        double dist;
        Eigen::VectorXcd y;
    };
    std::vector<Ritz> conv;
    for (int k = 0; k < steps; ++k) {
        Complex theta = es.eigenvalues()(k);
        if (std::abs(theta) < 1e-14) continue;
        Eigen::VectorXcd y = es.eigenvectors().col(k);
        double est = std::abs(h_last) * std::abs(y(steps - 1));
        if (est > opt.tol * std::abs(theta)) continue;
        Complex lambda = sigma + 1.0 / theta;
        conv.push_back({lambda, std::abs(lambda - sigma), y});
    }
    std::sort(conv.begin(), conv.end(), [](const Ritz& a, const Ritz& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.lambda.imag() > b.lambda.imag();
    });

    EigsResult out;
    out.complete = static_cast<int>(conv.size()) >= neigs;
    size_t take = opt.return_all_converged ? conv.size()
                                           : std::min<size_t>(conv.size(), neigs);
    for (size_t k = 0; k < take; ++k) {
        EigenPair p;
        p.lambda = conv[k].lambda;
        p.vec = V.leftCols(steps) * conv[k].y;
        normalize_eigvec(p.vec);
        Eigen::VectorXcd r = apply_real_sparse(lop.L, p.vec) - p.lambda * p.vec;
        p.residual = r.norm() / p.vec.norm();
        out.pairs.push_back(std::move(p));
    }
    return out;
}

std::vector<DispersionCurve> dispersion_essential(const ReactionModel& model,
                                                  const Eigen::Matrix2d& A_real, double sigma1,
                                                  const std::vector<double>& omega_grid,
                                                  int n_min, int n_max) {
    Eigen::Matrix2d dfv = model.df(model.v_inf);
    std::vector<DispersionCurve> curves;
    for (int n = n_min; n <= n_max; ++n)
        for (int branch = 0; branch < 2; ++branch) {
            DispersionCurve c;
            c.n = n;
            c.branch = branch;
            for (double w : omega_grid) {
                Eigen::Matrix2d M = dfv - (w * w) * A_real;
                Eigen::EigenSolver<Eigen::Matrix2d> es(M);
                Complex e0 = es.eigenvalues()(0), e1 = es.eigenvalues()(1);
                if (e0.imag() > e1.imag()) std::swap(e0, e1);
                Complex lam = (branch == 0 ? e0 : e1) - Complex(0.0, n * sigma1);
                c.points.push_back({w, lam});
            }
            curves.push_back(std::move(c));
        }
    return curves;
}

double dispersion_residual(const ReactionModel& model, const Eigen::Matrix2d& A_real,
                           double sigma1, double omega, int n, std::complex<double> lambda) {
    Eigen::Matrix2cd M = (lambda + Complex(0.0, n * sigma1)) * Eigen::Matrix2cd::Identity() +
                         (omega * omega) * A_real.cast<Complex>() -
                         model.df(model.v_inf).cast<Complex>();
    return std::abs(M.determinant());
}

std::vector<SymmetryMode> symmetry_modes(const Eigen::MatrixXd& S) {
    const int d = static_cast<int>(S.rows());
    if ((S + S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, S.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("symmetry_modes: S not skew-symmetric");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(S.cast<Complex>());
    // deterministic order: ascending imaginary part
    std::vector<int> order(d);
    for (int k = 0; k < d; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return es.eigenvalues()(a).imag() < es.eigenvalues()(b).imag();
    });
    Eigen::MatrixXcd U(d, d);
    Eigen::VectorXcd lam(d);
    for (int k = 0; k < d; ++k) {
        U.col(k) = es.eigenvectors().col(order[k]);
        lam(k) = es.eigenvalues()(order[k]);
    }

    std::vector<SymmetryMode> modes;
    for (int l = 0; l < d; ++l) {
        SymmetryMode mo;
        mo.lambda = -lam(l);
        mo.rotational = false;
        mo.c_tra = U.col(l);
        modes.push_back(std::move(mo));
    }
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
            SymmetryMode mo;
            mo.lambda = -(lam(a) + lam(b));
            mo.rotational = true;
            mo.c_rot = U.col(a) * U.col(b).transpose() - U.col(b) * U.col(a).transpose();
            modes.push_back(std::move(mo));
        }
    return modes;
}

std::vector<EigenPair> symmetry_eigenpairs(const Field& profile, const Eigen::MatrixXd& S) {
    if (S.rows() != 2)
        throw std::invalid_argument("symmetry_eigenpairs: grid realization is d = 2 only");
    const Grid2D& g = profile.grid;
    DiscretizationOps ops = assemble_discretization(g);
    Eigen::VectorXcd w = field_to_complex(profile);
    Eigen::VectorXcd dw1 = ops.d1(w), dw2 = ops.d2(w), dwa = ops.angular(w);

    // complex-weighted combination of real 2-component derivative fields;
    // the re/im parts of the complexified derivatives are those components
    auto combine = [&](Complex c1, const Eigen::VectorXcd& f1, Complex c2,
                       const Eigen::VectorXcd& f2) {
        Eigen::VectorXcd v(2 * g.num_nodes());
        for (Eigen::Index k = 0; k < w.size(); ++k) {
            v(2 * k + 0) = c1 * f1(k).real() + c2 * f2(k).real();
            v(2 * k + 1) = c1 * f1(k).imag() + c2 * f2(k).imag();
        }
        return v;
    };

    std::vector<EigenPair> out;
    const double scale = w.norm();
    for (const SymmetryMode& mo : symmetry_modes(S)) {
        Eigen::VectorXcd v;
        if (mo.rotational)
            v = combine(mo.c_rot(0, 1), dwa, 0.0, dwa);
        else
            v = combine(mo.c_tra(0), dw1, mo.c_tra(1), dw2);
        if (v.norm() < 1e-12 * (scale + 1.0)) continue;  // radial degeneracy
        EigenPair p;
        p.lambda = mo.lambda;
        p.vec = std::move(v);
        normalize_eigvec(p.vec);
        out.push_back(std::move(p));
    }
    return out;
}

double interior_residual(const LinearizedOperator& lop, const Eigen::VectorXcd& v,
                         std::complex<double> lambda, double collar) {
    const Grid2D& g = lop.grid;
    Eigen::VectorXcd r = apply_real_sparse(lop.L, v) - lambda * v;
    double rmax = g.half_width - collar;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            double x1 = g.coord(i), x2 = g.coord(j);
            if (std::sqrt(x1 * x1 + x2 * x2) > rmax) continue;
            for (int c = 0; c < 2; ++c) {
                Eigen::Index k = 2 * g.idx(i, j) + c;
                num += std::norm(r(k));
                den += std::norm(v(k));
            }
        }
    if (den == 0.0) throw std::invalid_argument("interior_residual: vector vanishes on interior");
    return std::sqrt(num / den);
}

std::vector<ClassifiedEig> classify_and_residual(const std::vector<EigenPair>& pairs,
                                                 const std::vector<DispersionCurve>& curves,
                                                 double tol_dist) {
    std::vector<ClassifiedEig> out;
    for (const EigenPair& p : pairs) {
        ClassifiedEig c;
        c.lambda = p.lambda;
        c.residual = p.residual;
        double dist = std::numeric_limits<double>::infinity();
        for (const DispersionCurve& cu : curves)
            for (const DispersionPoint& pt : cu.points)
                dist = std::min(dist, std::abs(p.lambda - pt.lambda));
        c.curve_distance = dist;
        c.cls = (dist <= tol_dist) ? "essential-approx" : "isolated";
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace rotwave
