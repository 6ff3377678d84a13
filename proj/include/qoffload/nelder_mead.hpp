#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qoffload {

struct NelderMeadOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    /// Offset of each initial simplex vertex from the start point, per coordinate.
    double initial_step = 0.5;
    std::size_t max_iterations = 500;
    /// Stop once f(worst) - f(best) over the simplex falls below this.
    double tolerance = 1e-10;
};

enum class NelderMeadStep { Reflect, Expand, ContractOutside, ContractInside, Shrink };

struct NelderMeadIteration {
    std::size_t iteration;  // 1-based
    NelderMeadStep step;
    double best_value;
    double spread;
    std::span<const double> best_point;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Minimizes `f` from `x0`. `on_iteration` runs after every completed iteration.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& options,
                             const std::function<void(const NelderMeadIteration&)>& on_iteration = {});

}  // namespace qoffload
