#pragma once

// Plain Nelder-Mead simplex minimization for small dimensions.
// Deterministic given the initial simplex; +infinity objective values
// are legal and act as rejection penalties.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace hadaudit {

struct NelderMeadResult {
    std::vector<double> best_point;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<double> best_so_far;  // one entry per iteration, non-increasing
    int evaluations = 0;
};

inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& objective,
    std::vector<std::vector<double>> simplex, int iterations) {
    constexpr double kReflect = 1.0;
    constexpr double kExpand = 2.0;
    constexpr double kContract = 0.5;
    constexpr double kShrink = 0.5;

    const std::size_t n = simplex.front().size();
    NelderMeadResult res;
    std::vector<double> values(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) {
        values[i] = objective(simplex[i]);
        ++res.evaluations;
    }

    auto record_best = [&] {
        auto it = std::min_element(values.begin(), values.end());
        std::size_t idx = static_cast<std::size_t>(it - values.begin());
        if (*it < res.best_value) {
            res.best_value = *it;
            res.best_point = simplex[idx];
        }
        res.best_so_far.push_back(res.best_value);
    };
    record_best();
    res.best_so_far.clear();  // iterations only; seeding handled above

    for (int iter = 0; iter < iterations; ++iter) {
        std::vector<std::size_t> order(simplex.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return values[a] < values[b];
                         });
        std::vector<std::vector<double>> sorted_pts;
        std::vector<double> sorted_vals;
        for (std::size_t idx : order) {
            sorted_pts.push_back(simplex[idx]);
            sorted_vals.push_back(values[idx]);
        }
        simplex.swap(sorted_pts);
        values.swap(sorted_vals);

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i + 1 < simplex.size(); ++i)
            for (std::size_t d = 0; d < n; ++d)
                centroid[d] += simplex[i][d] / static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t d = 0; d < n; ++d)
                p[d] = centroid[d] + coef * (centroid[d] - simplex.back()[d]);
            return p;
        };

        std::vector<double> reflected = blend(kReflect);
        double fr = objective(reflected);
        ++res.evaluations;
        if (fr < values.front()) {
            std::vector<double> expanded = blend(kExpand);
            double fe = objective(expanded);
            ++res.evaluations;
            if (fe < fr) {
                simplex.back() = expanded;
                values.back() = fe;
            } else {
                simplex.back() = reflected;
                values.back() = fr;
            }
        } else if (fr < values[values.size() - 2]) {
            simplex.back() = reflected;
            values.back() = fr;
        } else {
            std::vector<double> contracted = blend(-kContract);
            double fc = objective(contracted);
            ++res.evaluations;
            if (fc < values.back()) {
                simplex.back() = contracted;
                values.back() = fc;
            } else {
                for (std::size_t i = 1; i < simplex.size(); ++i) {
                    for (std::size_t d = 0; d < n; ++d)
                        simplex[i][d] = simplex[0][d] +
                                        kShrink * (simplex[i][d] - simplex[0][d]);
                    values[i] = objective(simplex[i]);
                    ++res.evaluations;
                }
            }
        }
        record_best();
    }
    return res;
}

}  // namespace hadaudit
