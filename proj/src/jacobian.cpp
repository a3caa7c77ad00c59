#include "dfcert/jacobian.hpp"

#include <cmath>
#include <vector>

#include "dfcert/errors.hpp"

namespace dfcert {
namespace {

double fixed_point_residual(const DfMap& map, const SimplexPoint& x) {
    const SimplexPoint fx = map.evaluate(x);
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(fx[i] - x[i]));
    return r;
}

} // namespace

FullJacobian full_jacobian(const DfMap& map, const SimplexPoint& x, double delta) {
    ShrunkenSimplexSpec domain(delta);
    if (!domain.contains(x))
        fail(Errc::CornerPoint, "Jacobian formulas divide by 1 - x_i; point is corner-near");

    const std::size_t n = x.size();
    const SimplexPoint f = map.evaluate(x);
    Matrix j(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t col = 0; col < n; ++col) {
            j(i, col) = (i == col) ? f[i] * (1.0 - f[i]) / (1.0 - x[i])
                                   : -f[i] * f[col] / (1.0 - x[col]);
        }
    }
    return FullJacobian{std::move(j)};
}

ReducedJacobian reduced_jacobian(const FullJacobian& full) {
    const Matrix& j = full.entries;
    if (!j.square() || j.rows() < 2) fail(Errc::InvalidArgument, "full Jacobian must be square, n >= 2");
    const std::size_t m = j.rows() - 1;
    Matrix g(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t col = 0; col < m; ++col) g(i, col) = j(i, col) - j(i, m);
    return ReducedJacobian{std::move(g)};
}

FullJacobian fixed_point_jacobian(const DfMap& map, const SimplexPoint& xbar, double delta) {
    ShrunkenSimplexSpec domain(delta);
    if (!domain.contains(xbar))
        fail(Errc::CornerPoint, "corner fixed points have a closed-form spectrum instead");
    const double residual = fixed_point_residual(map, xbar);
    if (residual > 1e-10)
        fail(Errc::NotAFixedPoint,
             "residual " + std::to_string(residual) + " exceeds 1e-10");

    const std::size_t n = xbar.size();
    Matrix j(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t col = 0; col < n; ++col) {
            j(i, col) = (i == col) ? xbar[i]
                                   : -xbar[i] * xbar[col] / (1.0 - xbar[col]);
        }
    }
    return FullJacobian{std::move(j)};
}

Matrix finite_difference_jacobian(const VectorMapFn& f, std::span<const double> x, double h) {
    if (!(h > 0.0)) fail(Errc::InvalidArgument, "finite-difference step must be positive");
    const std::size_t n = x.size();
    std::vector<double> probe(x.begin(), x.end());
    std::vector<double> f_plus(n), f_minus(n);
    Matrix j(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        const double saved = probe[col];
        probe[col] = saved + h;
        f(probe, f_plus);
        probe[col] = saved - h;
        f(probe, f_minus);
        probe[col] = saved;
        for (std::size_t i = 0; i < n; ++i) j(i, col) = (f_plus[i] - f_minus[i]) / (2.0 * h);
    }
    return j;
}

FullJacobian finite_difference_jacobian(const DfMap& map, const SimplexPoint& x, double h) {
    if (!(h > 0.0)) fail(Errc::InvalidArgument, "finite-difference step must be positive");
    // The product form extends analytically to any ambient point with all
    // coordinates below 1; the probes x + h e_i must stay in that region.
    if (!(x.max_coord() + h < 1.0))
        fail(Errc::StepTooLarge, "probe points would reach a coordinate of 1");
    const VectorMapFn f = [&map](std::span<const double> in, std::span<double> out) {
        map.evaluate_raw(in, out);
    };
    return FullJacobian{finite_difference_jacobian(f, x.span(), h)};
}

} // namespace dfcert
