// nelder_mead.hpp: downhill simplex minimization

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace fmo {

struct SimplexOptions {
    int max_evaluations = 2000;
    double f_tolerance = 1e-10;  // spread of function values across the simplex
    double x_tolerance = 1e-8;   // largest vertex distance from the best vertex, per coordinate
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Standard coefficients: reflection 1, expansion 2, contraction 1/2, shrink 1/2.
// The initial simplex is x0 plus x0 + steps[i]·e_i. Never exceeds
// max_evaluations; on exhaustion returns the best point seen, unconverged.
inline SimplexResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& f,
                                          const std::vector<double>& x0, const std::vector<double>& steps,
                                          const SimplexOptions& opt = {}) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> vertex(n + 1, x0);
    std::vector<double> value(n + 1);
    int evals = 0;
    struct Exhausted {};
    std::vector<double> best_x = x0;
    double best_f = std::numeric_limits<double>::infinity();
    auto eval = [&](const std::vector<double>& x) {
        if (evals >= opt.max_evaluations) throw Exhausted{};
        ++evals;
        const double v = f(x);
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
        return v;
    };
    for (std::size_t i = 0; i < n; ++i) vertex[i + 1][i] += steps[i];

    std::vector<std::size_t> order(n + 1);
    auto point = [&](const std::vector<double>& centroid, const std::vector<double>& worst, double coeff) {
        std::vector<double> p(n);
        for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + coeff * (centroid[j] - worst[j]);
        return p;
    };

    bool converged = false;
    try {
        for (std::size_t i = 0; i <= n; ++i) value[i] = eval(vertex[i]);
        while (true) {
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
            {
                std::vector<std::vector<double>> v2;
                std::vector<double> f2;
                for (auto i : order) {
                    v2.push_back(vertex[i]);
                    f2.push_back(value[i]);
                }
                vertex.swap(v2);
                value.swap(f2);
            }
            double size = 0.0;
            for (std::size_t i = 1; i <= n; ++i)
                for (std::size_t j = 0; j < n; ++j) size = std::max(size, std::abs(vertex[i][j] - vertex[0][j]));
            if (std::abs(value[n] - value[0]) <= opt.f_tolerance && size <= opt.x_tolerance) {
                converged = true;
                break;
            }
            if (evals >= opt.max_evaluations) break;

            std::vector<double> centroid(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) centroid[j] += vertex[i][j] / static_cast<double>(n);

            const auto reflected = point(centroid, vertex[n], 1.0);
            const double fr = eval(reflected);
            if (fr < value[0]) {
                const auto expanded = point(centroid, vertex[n], 2.0);
                const double fe = eval(expanded);
                if (fe < fr) {
                    vertex[n] = expanded;
                    value[n] = fe;
                } else {
                    vertex[n] = reflected;
                    value[n] = fr;
                }
                continue;
            }
            if (fr < value[n - 1]) {
                vertex[n] = reflected;
                value[n] = fr;
                continue;
            }
            const bool outside = fr < value[n];
            const auto contracted = point(centroid, vertex[n], outside ? 0.5 : -0.5);
            const double fc = eval(contracted);
            if (fc < (outside ? fr : value[n])) {
                vertex[n] = contracted;
                value[n] = fc;
                continue;
            }
            for (std::size_t i = 1; i <= n; ++i) {
                for (std::size_t j = 0; j < n; ++j) vertex[i][j] = vertex[0][j] + 0.5 * (vertex[i][j] - vertex[0][j]);
                value[i] = eval(vertex[i]);
            }
        }
    } catch (const Exhausted&) {
        return {best_x, best_f, evals, false};
    }
    return {vertex[0], value[0], evals, converged};
}

} // namespace fmo
