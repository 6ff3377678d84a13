#include "qoffload/nelder_mead.hpp"

#include "qoffload/error.hpp"

#include <algorithm>
#include <numeric>

namespace qoffload {

namespace {

struct Vertex {
    std::vector<double> x;
    double f;
};

std::vector<double> affine(const std::vector<double>& base, const std::vector<double>& towards, double t) {
    // base + t * (towards - base)
    std::vector<double> out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + t * (towards[i] - base[i]);
    return out;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& o,
                             const std::function<void(const NelderMeadIteration&)>& on_iteration) {
    const std::size_t n = x0.size();
    if (n == 0) throw Error(Errc::InvalidArgument, "nelder_mead needs at least one parameter");

    NelderMeadResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        return f(x);
    };

    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    simplex.push_back({x0, eval(x0)});
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x = x0;
        x[i] += o.initial_step;
        simplex.push_back({x, eval(x)});
    }
    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    order();

    while (result.iterations < o.max_iterations) {
        if (simplex.back().f - simplex.front().f < o.tolerance) {
            result.converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(n);

        Vertex& worst = simplex[n];
        const double f_best = simplex.front().f;
        const double f_second_worst = simplex[n - 1].f;

        Vertex reflected{affine(centroid, worst.x, -o.reflection), 0.0};
        reflected.f = eval(reflected.x);
        NelderMeadStep step = NelderMeadStep::Reflect;

        if (reflected.f < f_best) {
            Vertex expanded{affine(centroid, reflected.x, o.expansion), 0.0};
            expanded.f = eval(expanded.x);
            if (expanded.f < reflected.f) {
                worst = std::move(expanded);
                step = NelderMeadStep::Expand;
            } else {
                worst = std::move(reflected);
            }
        } else if (reflected.f < f_second_worst) {
            worst = std::move(reflected);
        } else {
            bool shrink = false;
            if (reflected.f < worst.f) {
                Vertex c{affine(centroid, reflected.x, o.contraction), 0.0};
                c.f = eval(c.x);
                step = NelderMeadStep::ContractOutside;
                if (c.f <= reflected.f) worst = std::move(c);
                else shrink = true;
            } else {
                Vertex c{affine(centroid, worst.x, o.contraction), 0.0};
                c.f = eval(c.x);
                step = NelderMeadStep::ContractInside;
                if (c.f < worst.f) worst = std::move(c);
                else shrink = true;
            }
            if (shrink) {
                step = NelderMeadStep::Shrink;
                for (std::size_t v = 1; v <= n; ++v) {
                    simplex[v].x = affine(simplex[0].x, simplex[v].x, o.shrink);
                    simplex[v].f = eval(simplex[v].x);
                }
            }
        }
        order();
        ++result.iterations;
        if (on_iteration) {
            on_iteration({result.iterations, step, simplex.front().f, simplex.back().f - simplex.front().f,
                          simplex.front().x});
        }
    }
    if (!result.converged && simplex.back().f - simplex.front().f < o.tolerance) result.converged = true;
    result.x = simplex.front().x;
    result.value = simplex.front().f;
    return result;
}

}  // namespace qoffload
