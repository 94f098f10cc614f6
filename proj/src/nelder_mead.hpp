#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <vector>

namespace rotwave::detail {

/// Plain Nelder-Mead on R^n. Good enough for the low-dimensional sphere
/// refinements used by the matrix analysis.
inline Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x0, double step = 0.1,
                                   int max_iter = 400, double ftol = 1e-13) {
    const int n = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    for (int i = 0; i < n; ++i) xs[i + 1](i) += step;
    for (int i = 0; i <= n; ++i) fs[i] = f(xs[i]);

    auto order = [&] {
        std::vector<int> idx(n + 1);
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::vector<Eigen::VectorXd> xs2(n + 1);
        std::vector<double> fs2(n + 1);
        for (int i = 0; i <= n; ++i) {
            xs2[i] = xs[idx[i]];
            fs2[i] = fs[idx[i]];
        }
        xs.swap(xs2);
        fs.swap(fs2);
    };

    for (int it = 0; it < max_iter; ++it) {
        order();
        if (std::abs(fs[n] - fs[0]) < ftol * (1.0 + std::abs(fs[0]))) break;
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += xs[i];
        centroid /= n;

        Eigen::VectorXd xr = centroid + (centroid - xs[n]);
        double fr = f(xr);
        if (fr < fs[0]) {
            Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[n]);
            double fe = f(xe);
            if (fe < fr) {
                xs[n] = xe;
                fs[n] = fe;
            } else {
                xs[n] = xr;
                fs[n] = fr;
            }
        } else if (fr < fs[n - 1]) {
            xs[n] = xr;
            fs[n] = fr;
        } else {
            Eigen::VectorXd xc = centroid + 0.5 * (xs[n] - centroid);
            double fc = f(xc);
            if (fc < fs[n]) {
                xs[n] = xc;
                fs[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
                    fs[i] = f(xs[i]);
                }
            }
        }
    }
    order();
    return xs[0];
}

}  // namespace rotwave::detail
