#pragma once

#include <span>
#include <vector>

#include "dfcert/simplex.hpp"

namespace dfcert {

struct Trajectory {
    std::vector<SimplexPoint> states;

    std::size_t step_count() const noexcept { return states.empty() ? 0 : states.size() - 1; }
};

// The self-confidence update map F on the simplex, parameterized by the
// influence weights. Evaluation uses the singularity-free product form
//   F_i proportional to gamma_i * prod_{k != i} (1 - x_k),
// normalized to sum one. On the interior this equals the weighted form
// gamma_i/(1-x_i) scaled by alpha(x), and at a corner e_i it returns e_i
// exactly, with no case split.
class DfMap {
public:
    explicit DfMap(InfluenceWeights weights) : weights_(std::move(weights)) {}

    std::size_t size() const noexcept { return weights_.size(); }
    const InfluenceWeights& weights() const noexcept { return weights_; }

    SimplexPoint evaluate(const SimplexPoint& x) const;

    // Raw product-form kernel. Valid for any x with max_i x_i < 1, which is
    // the analytic extension off the simplex used by finite differencing.
    // Allocation-free; x and out must not alias.
    void evaluate_raw(std::span<const double> x, std::span<double> out) const;

    // steps+1 states starting at x0; states[k+1] = F(states[k]).
    Trajectory simulate(const SimplexPoint& x0, long steps) const;

    // The convexity homotopy between F (t=0) and the identity (t=1):
    // returns t*x + (1-t)*F(x), which stays on the simplex.
    SimplexPoint homotopy_point(const SimplexPoint& x, double t) const;

private:
    InfluenceWeights weights_;
};

} // namespace dfcert
