#include "dfcert/df_map.hpp"

#include <cmath>

#include "dfcert/errors.hpp"

namespace dfcert {

void DfMap::evaluate_raw(std::span<const double> x, std::span<double> out) const {
    const std::size_t n = weights_.size();
    if (x.size() != n || out.size() != n)
        fail(Errc::InvalidArgument, "evaluation buffers must match the map dimension");

    // Numerators w_i = gamma_i * prod_{k != i} (1 - x_k) via a suffix-product
    // pass (stored in out) and a running prefix product. No division by
    // (1 - x_i) ever happens, so a coordinate at exactly 1 costs nothing.
    out[n - 1] = 1.0;
    for (std::size_t i = n - 1; i-- > 0;) out[i] = out[i + 1] * (1.0 - x[i + 1]);
    double prefix = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] *= weights_[i] * prefix;
        prefix *= 1.0 - x[i];
    }

    // Rescale by the largest numerator before normalizing. This guards the
    // (off-simplex) underflow corner and, as a bonus, maps symmetric inputs
    // to exactly uniform outputs and corner inputs to exact corners.
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) top = std::max(top, out[i]);
    if (!(top > 0.0))
        fail(Errc::ZeroSum, "product form degenerated: more than one coordinate at 1");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] /= top;
        sum += out[i];
    }
    for (std::size_t i = 0; i < n; ++i) out[i] /= sum;
}

SimplexPoint DfMap::evaluate(const SimplexPoint& x) const {
    std::vector<double> out(weights_.size());
    evaluate_raw(x.span(), out);
    // The kernel's output is normalized already; renormalizing again would
    // only churn the low bits.
    return SimplexPoint::from_trusted(std::move(out));
}

Trajectory DfMap::simulate(const SimplexPoint& x0, long steps) const {
    if (steps < 0) fail(Errc::InvalidArgument, "step count must be nonnegative");
    Trajectory t;
    t.states.reserve(static_cast<std::size_t>(steps) + 1);
    t.states.push_back(x0);
    for (long k = 0; k < steps; ++k) t.states.push_back(evaluate(t.states.back()));
    return t;
}

SimplexPoint DfMap::homotopy_point(const SimplexPoint& x, double t) const {
    if (!(t >= 0.0 && t <= 1.0)) fail(Errc::InvalidArgument, "homotopy parameter must be in [0, 1]");
    const SimplexPoint fx = evaluate(x);
    std::vector<double> coords(x.size());
    // The raw convex combination is kept as computed: convexity alone must
    // keep it on the simplex, and tests measure exactly that.
    for (std::size_t i = 0; i < x.size(); ++i) coords[i] = t * x[i] + (1.0 - t) * fx[i];
    return SimplexPoint::from_trusted(std::move(coords));
}

} // namespace dfcert
