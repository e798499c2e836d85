// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>

namespace fockdyn::fit {

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y = slope*x + intercept.
inline Line linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit::linear: need >= 2 matched points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit::linear: degenerate abscissa");
    Line out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    out.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return out;
}

/// Coefficient of determination of `data` against a fixed prediction.
inline double r_squared(std::span<const double> data, std::span<const double> prediction) {
    if (data.size() != prediction.size() || data.empty()) throw std::invalid_argument("fit::r_squared: size mismatch");
    double mean = 0.0;
    for (double d : data) mean += d;
    mean /= static_cast<double>(data.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        ss_res += (data[i] - prediction[i]) * (data[i] - prediction[i]);
        ss_tot += (data[i] - mean) * (data[i] - mean);
    }
    return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
}

template <int P>
struct Result {
    Eigen::Matrix<double, P, 1> params;
    double ssr = 0.0;  ///< sum of squared residuals at the optimum
    int iterations = 0;
    bool converged = false;
};

/**
 * @brief Levenberg-Marquardt for a P-parameter scalar model y = f(x; p).
 *
 * `model(x, p, grad)` returns f and fills grad with df/dp. Bounds are not
 * supported; models keep their widths positive by squaring or abs.
 */
template <int P, class Model>
Result<P> levenberg_marquardt(Model&& model, std::span<const double> x, std::span<const double> y,
                              Eigen::Matrix<double, P, 1> p, int max_iter = 200) {
    using Vec = Eigen::Matrix<double, P, 1>;
    using Mat = Eigen::Matrix<double, P, P>;
    if (x.size() != y.size() || x.size() < static_cast<std::size_t>(P))
        throw std::invalid_argument("levenberg_marquardt: not enough points");

    auto evaluate = [&](const Vec& q, Mat* JtJ, Vec* Jtr) {
        double ssr = 0.0;
        if (JtJ) JtJ->setZero();
        if (Jtr) Jtr->setZero();
        Vec g;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - model(x[i], q, g);
            ssr += r * r;
            if (JtJ) *JtJ += g * g.transpose();
            if (Jtr) *Jtr += g * r;
        }
        return ssr;
    };

    Result<P> out;
    double lambda = 1e-3;
    Mat JtJ;
    Vec Jtr;
    double ssr = evaluate(p, &JtJ, &Jtr);
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        Mat A = JtJ;
        for (int d = 0; d < P; ++d) A(d, d) += lambda * std::max(JtJ(d, d), 1e-300);
        const Vec step = A.ldlt().solve(Jtr);
        const Vec trial = p + step;
        const double trial_ssr = evaluate(trial, nullptr, nullptr);
        if (std::isfinite(trial_ssr) && trial_ssr < ssr) {
            const double gain = ssr - trial_ssr;
            p = trial;
            ssr = evaluate(p, &JtJ, &Jtr);
            lambda = std::max(lambda / 3.0, 1e-12);
            if (gain <= 1e-14 * std::max(ssr, 1e-300) || step.norm() <= 1e-12 * (p.norm() + 1e-12)) {
                out.converged = true;
                break;
            }
        } else {
            lambda *= 4.0;
            if (lambda > 1e12) {
                out.converged = true;
                break;
            }
        }
    }
    out.params = p;
    out.ssr = ssr;
    return out;
}

struct ExpPlateau {
    double amplitude = 0.0;
    double rate = 0.0;
    double plateau = 0.0;
    double ssr = 0.0;
};

/// Least-squares fit y = C exp(-rate t) + plateau.
inline ExpPlateau exp_plateau(std::span<const double> t, std::span<const double> y, double rate_guess) {
    if (t.size() < 4) throw std::invalid_argument("exp_plateau: need >= 4 points");
    const double tail = y.back();
    const double head = y.front();
    Eigen::Vector3d p0(std::max(head - tail, 1e-6) * std::exp(rate_guess * t.front()), rate_guess, tail);
    auto model = [](double x, const Eigen::Vector3d& p, Eigen::Vector3d& g) {
        const double e = std::exp(-p(1) * x);
        g << e, -p(0) * x * e, 1.0;
        return p(0) * e + p(2);
    };
    const auto r = levenberg_marquardt<3>(model, t, y, p0);
    return {r.params(0), r.params(1), r.params(2), r.ssr};
}

} // namespace fockdyn::fit
