#include "rotwave/pde_freeze.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rotwave {

namespace {

using Complex = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Complex>;

// Neumann ghost reflection of an out-of-range index.
inline int refl(int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
}

SpMat neumann_laplacian(const Grid2D& g) {
    const int n = g.n;
    const double c = 1.0 / (g.dx * g.dx);
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<size_t>(5) * n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            int row = g.idx(i, j);
            trip.emplace_back(row, row, Complex(-4.0 * c));
            trip.emplace_back(row, g.idx(refl(i - 1, n), j), Complex(c));
            trip.emplace_back(row, g.idx(refl(i + 1, n), j), Complex(c));
            trip.emplace_back(row, g.idx(i, refl(j - 1, n)), Complex(c));
            trip.emplace_back(row, g.idx(i, refl(j + 1, n)), Complex(c));
        }
    SpMat m(n * n, n * n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

// First-derivative stencils as sparse matrices, same ghost reflection.
SpMat neumann_d(const Grid2D& g, int axis) {
    const int n = g.n;
    const double c = 0.5 / g.dx;
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<size_t>(2) * n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            int row = g.idx(i, j);
            int ip = (axis == 0) ? g.idx(refl(i + 1, n), j) : g.idx(i, refl(j + 1, n));
            int im = (axis == 0) ? g.idx(refl(i - 1, n), j) : g.idx(i, refl(j - 1, n));
            trip.emplace_back(row, ip, Complex(c));
            trip.emplace_back(row, im, Complex(-c));
        }
    SpMat m(n * n, n * n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

// x2 D1 - x1 D2 as a sparse matrix.
SpMat angular_matrix(const Grid2D& g, const SpMat& d1, const SpMat& d2) {
    const int n = g.n;
    Eigen::VectorXcd x1(n * n), x2(n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            x1(g.idx(i, j)) = g.coord(i);
            x2(g.idx(i, j)) = g.coord(j);
        }
    SpMat m = x2.asDiagonal() * d1;
    m -= SpMat(x1.asDiagonal() * d2);
    return m;
}

struct ImplicitDiffusion {
    SpMat lap;
    Eigen::SparseLU<SpMat> solver;
    double lhs_scale = 1.0;  // 1 for Euler, 3/2 for BDF2

    void factor(const Grid2D& g, Complex alpha, double dt, Scheme scheme) {
        lap = neumann_laplacian(g);
        lhs_scale = (scheme == Scheme::imex_bdf2) ? 1.5 : 1.0;
        SpMat id(lap.rows(), lap.cols());
        id.setIdentity();
        SpMat m = lhs_scale * id - (dt * alpha) * lap;
        solver.compute(m);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("diffusion solve: sparse LU factorization failed");
    }
};

// Diffusion plus frame drift treated implicitly. Explicit central-difference
// advection is von Neumann unstable here for any dx once |S x| is large
// (stability would need dt < 2 Re(alpha) / max|S x|^2, ~1e-3 at R = 20), so
// the drift belongs in the factored operator. The factorization is reused
// while the fitted (S12, tau) stay near the factored values; the small
// difference is handled explicitly.
struct ImplicitFrameOperator {
    SpMat lap, ang, d1, d2;
    Eigen::SparseLU<SpMat> solver;
    double lhs_scale = 1.0;
    Complex alpha{0.0, 0.0};
    double dt = 0.0;
    Eigen::Vector3d c_fact = Eigen::Vector3d::Zero();

    void init(const Grid2D& g, Complex a, double step, Scheme scheme) {
        alpha = a;
        dt = step;
        lhs_scale = (scheme == Scheme::imex_bdf2) ? 1.5 : 1.0;
        lap = neumann_laplacian(g);
        d1 = neumann_d(g, 0);
        d2 = neumann_d(g, 1);
        ang = angular_matrix(g, d1, d2);
    }

    void factor(const Eigen::Vector3d& c) {
        c_fact = c;
        SpMat id(lap.rows(), lap.cols());
        id.setIdentity();
        SpMat m = lhs_scale * id - dt * (alpha * lap + Complex(c(0)) * ang +
                                         Complex(c(1)) * d1 + Complex(c(2)) * d2);
        solver.compute(m);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("freeze_run: sparse LU factorization failed");
    }
};

void check_finite(const Eigen::VectorXcd& w, double t) {
    double m = w.cwiseAbs().maxCoeff();
    if (!std::isfinite(m) || m > 1e6)
        throw std::runtime_error("time integration blew up at t = " + std::to_string(t));
}

}  // namespace

PdeSystem make_qcgl_system(const QCGLParams& params) {
    PdeSystem s;
    s.model = make_qcgl_model(params);
    s.alpha = params.alpha;
    s.reaction = [params](Complex w) { return qcgl_eval(params, w); };
    return s;
}

Eigen::VectorXcd DiscretizationOps::laplacian(const Eigen::VectorXcd& w) const {
    const int n = grid.n;
    const double c = 1.0 / (grid.dx * grid.dx);
    Eigen::VectorXcd out(w.size());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out(grid.idx(i, j)) =
                c * (w(grid.idx(refl(i - 1, n), j)) + w(grid.idx(refl(i + 1, n), j)) +
                     w(grid.idx(i, refl(j - 1, n))) + w(grid.idx(i, refl(j + 1, n))) -
                     4.0 * w(grid.idx(i, j)));
    return out;
}

Eigen::VectorXcd DiscretizationOps::d1(const Eigen::VectorXcd& w) const {
    const int n = grid.n;
    const double c = 0.5 / grid.dx;
    Eigen::VectorXcd out(w.size());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out(grid.idx(i, j)) =
                c * (w(grid.idx(refl(i + 1, n), j)) - w(grid.idx(refl(i - 1, n), j)));
    return out;
}

Eigen::VectorXcd DiscretizationOps::d2(const Eigen::VectorXcd& w) const {
    const int n = grid.n;
    const double c = 0.5 / grid.dx;
    Eigen::VectorXcd out(w.size());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out(grid.idx(i, j)) =
                c * (w(grid.idx(i, refl(j + 1, n))) - w(grid.idx(i, refl(j - 1, n))));
    return out;
}

Eigen::VectorXcd DiscretizationOps::angular(const Eigen::VectorXcd& w) const {
    Eigen::VectorXcd w1 = d1(w), w2 = d2(w);
    Eigen::VectorXcd out(w.size());
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) {
            int k = grid.idx(i, j);
            out(k) = grid.coord(j) * w1(k) - grid.coord(i) * w2(k);
        }
    return out;
}

Eigen::VectorXcd DiscretizationOps::drift(const Eigen::VectorXcd& w) const {
    Eigen::VectorXcd w1 = d1(w), w2 = d2(w);
    Eigen::VectorXcd out(w.size());
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) {
            int k = grid.idx(i, j);
            double y1 = grid.coord(i) - x_star(0), y2 = grid.coord(j) - x_star(1);
            // S y = (S12 y2, -S12 y1)
            out(k) = S12 * (y2 * w1(k) - y1 * w2(k));
        }
    return out;
}

DiscretizationOps assemble_discretization(const Grid2D& grid, double S12,
                                          const Eigen::Vector2d& x_star) {
    return DiscretizationOps{grid, S12, x_star};
}

Eigen::VectorXcd field_to_complex(const Field& f) {
    if (f.ncomp != 2) throw std::invalid_argument("field_to_complex: need two components");
    Eigen::VectorXcd w(f.grid.num_nodes());
    for (int j = 0; j < f.grid.n; ++j)
        for (int i = 0; i < f.grid.n; ++i)
            w(f.grid.idx(i, j)) = Complex(f.at(i, j, 0), f.at(i, j, 1));
    return w;
}

Field complex_to_field(const Grid2D& grid, const Eigen::VectorXcd& w) {
    Field f = Field::zeros(grid, 2);
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) {
            Complex v = w(grid.idx(i, j));
            f.at(i, j, 0) = v.real();
            f.at(i, j, 1) = v.imag();
        }
    return f;
}

Field initial_data(const Grid2D& grid, const std::string& kind) {
    if (kind != "vortex_seed") throw std::invalid_argument("initial_data: unknown kind " + kind);
    Field f = Field::zeros(grid, 2);
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) {
            double x1 = grid.coord(i), x2 = grid.coord(j);
            double g = 0.2 * std::exp(-(x1 * x1 + x2 * x2) / 49.0);
            f.at(i, j, 0) = g * x1;
            f.at(i, j, 1) = g * x2;
        }
    return f;
}

Field simulate(const PdeSystem& sys, const Grid2D& grid, const Field& u0,
               const StepperConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
    ImplicitDiffusion diff;
    diff.factor(grid, sys.alpha, cfg.dt, cfg.scheme);
    Eigen::VectorXcd w = field_to_complex(u0);
    auto react = [&](const Eigen::VectorXcd& v) {
        Eigen::VectorXcd r(v.size());
        for (Eigen::Index k = 0; k < v.size(); ++k) r(k) = sys.reaction(v(k));
        return r;
    };

    const int steps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));
    Eigen::VectorXcd w_prev, f_prev;
    for (int s = 0; s < steps; ++s) {
        Eigen::VectorXcd f = react(w);
        Eigen::VectorXcd rhs;
        if (cfg.scheme == Scheme::imex_bdf2 && s > 0) {
            rhs = 2.0 * w - 0.5 * w_prev + cfg.dt * (2.0 * f - f_prev);
        } else {
            rhs = diff.lhs_scale * (w + cfg.dt * f);
        }
        w_prev = w;
        f_prev = f;
        w = diff.solver.solve(rhs);
        check_finite(w, (s + 1) * cfg.dt);
    }
    return complex_to_field(grid, w);
}

FreezeState freeze_run(const PdeSystem& sys, const Grid2D& grid, const Field& v0,
                       const StepperConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("freeze_run: dt must be positive");
    ImplicitFrameOperator op;
    op.init(grid, sys.alpha, cfg.dt, cfg.scheme);
    DiscretizationOps ops = assemble_discretization(grid);
    Eigen::VectorXcd w = field_to_complex(v0);
    const double l2_scale = grid.dx;  // sqrt(dx^2) per node, discrete L2

    FreezeState state;
    Eigen::VectorXcd w_prev, e_prev;
    bool factored = false, have_history = false;
    const int steps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));
    for (int s = 0; s < steps; ++s) {
        Eigen::VectorXcd lap = ops.laplacian(w);
        Eigen::VectorXcd f(w.size());
        for (Eigen::Index k = 0; k < w.size(); ++k) f(k) = sys.reaction(w(k));
        Eigen::VectorXcd f0 = sys.alpha * lap + f;

        Eigen::VectorXcd g1 = ops.angular(w), g2 = ops.d1(w), g3 = ops.d2(w);
        Eigen::Matrix3d m;
        Eigen::Vector3d b;
        const Eigen::VectorXcd* g[3] = {&g1, &g2, &g3};
        for (int a = 0; a < 3; ++a) {
            for (int bb = a; bb < 3; ++bb) {
                double v = g[a]->dot(*g[bb]).real();
                m(a, bb) = v;
                m(bb, a) = v;
            }
            b(a) = -g[a]->dot(f0).real();
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix3d> cod(m);
        cod.setThreshold(1e-10);
        if (cod.rank() < 3 && b.norm() > 1e-8 * (f0.norm() + 1.0))
            throw std::runtime_error(
                "freeze_run: phase condition singular (symmetry-degenerate profile)");
        Eigen::Vector3d c = (cod.rank() < 3) ? Eigen::Vector3d::Zero().eval()
                                             : cod.solve(b).eval();

        state.S12 = c(0);
        state.tau << c(1), c(2);
        Eigen::VectorXcd vt = f0 + c(0) * g1 + c(1) * g2 + c(2) * g3;
        state.residual = vt.norm() * l2_scale;

        if (!factored || (c - op.c_fact).norm() > 0.03) {
            op.factor(c);
            factored = true;
            have_history = false;  // BDF2 history is tied to the old operator
        }

        // explicit part: reaction plus the (small) drift-coefficient drift
        Eigen::VectorXcd e = f + (c(0) - op.c_fact(0)) * g1 + (c(1) - op.c_fact(1)) * g2 +
                             (c(2) - op.c_fact(2)) * g3;
        Eigen::VectorXcd rhs;
        if (cfg.scheme == Scheme::imex_bdf2 && have_history)
            rhs = 2.0 * w - 0.5 * w_prev + cfg.dt * (2.0 * e - e_prev);
        else
            rhs = op.lhs_scale * (w + cfg.dt * e);
        w_prev = w;
        e_prev = e;
        have_history = true;
        w = op.solver.solve(rhs);
        check_finite(w, (s + 1) * cfg.dt);
    }
    state.v = complex_to_field(grid, w);
    state.t = steps * cfg.dt;
    return state;
}

Frame extract_frame(int dim, const Eigen::MatrixXd& S, const Eigen::VectorXd& tau) {
    Frame fr;
    if (dim == 2) {
        double s12 = S(0, 1);
        if (s12 == 0.0) throw std::invalid_argument("extract_frame: S = 0");
        fr.x_star = Eigen::Vector2d(tau(1) / s12, -tau(0) / s12);
        fr.sigma1 = std::abs(s12);
    } else if (dim == 3) {
        double s12 = S(0, 1), s13 = S(0, 2), s23 = S(1, 2);
        double q = s12 * s12 + s13 * s13 + s23 * s23;
        if (q == 0.0) throw std::invalid_argument("extract_frame: S = 0");
        fr.x_star = Eigen::Vector3d(s12 * tau(1) + s13 * tau(2), -s12 * tau(0) + s23 * tau(2),
                                    -s13 * tau(0) - s23 * tau(1)) /
                    q;
        fr.axis << s23, -s13, s12;
        fr.sigma1 = std::sqrt(q);
    } else {
        throw std::invalid_argument("extract_frame: dim must be 2 or 3");
    }
    fr.period = 2.0 * M_PI / fr.sigma1;
    return fr;
}

Field reconstruct(const FreezeState& state, const Frame& frame, double t) {
    const Grid2D& g = state.v.grid;
    Field out = Field::zeros(g, state.v.ncomp);
    double a = -t * state.S12;  // angle of exp(-tS)
    double ca = std::cos(a), sa = std::sin(a);
    double cx = frame.x_star(0), cy = frame.x_star(1);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            double y1 = g.coord(i) - cx, y2 = g.coord(j) - cy;
            // exp(-tS) y with S = [[0, S12], [-S12, 0]]
            double p1 = ca * y1 + sa * y2 + cx;
            double p2 = -sa * y1 + ca * y2 + cy;
            for (int c = 0; c < state.v.ncomp; ++c)
                out.at(i, j, c) = interpolate(state.v, p1, p2, c, 0.0);
        }
    return out;
}

std::complex<double> companion_e(std::complex<double> z) {
    std::complex<double> term = 1.0, sum = 0.0;
    for (int j = 1; j <= 60; ++j) {
        term /= static_cast<double>(j);  // z^{j-1}/j!
        sum += term;
        term *= z;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return sum;
}

}  // namespace rotwave
