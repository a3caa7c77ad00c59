#pragma once

#include <functional>
#include <span>

#include "dfcert/df_map.hpp"
#include "dfcert/matrix.hpp"

namespace dfcert {

// Ambient n x n Jacobian of F viewed as a map R^n -> R^n. Every column sums
// to zero; at interior points the diagonal is nonnegative and the
// off-diagonal nonpositive.
struct FullJacobian {
    Matrix entries;
};

// (n-1) x (n-1) Jacobian in the manifold coordinates y_i = x_i, i < n,
// with x_n eliminated. Carries the nonzero spectrum of the full Jacobian.
struct ReducedJacobian {
    Matrix entries;
};

// Analytic Jacobian at an interior point:
//   d F_i/d x_i = F_i (1 - F_i) / (1 - x_i),
//   d F_i/d x_j = -F_i F_j / (1 - x_j)  (j != i).
// Rejects points within delta of a corner (the formulas divide by 1 - x_j).
FullJacobian full_jacobian(const DfMap& map, const SimplexPoint& x,
                           double delta = kDefaultDelta);

// dG_ij = dF_i/dx_j - dF_i/dx_n: the top-left (n-1) x n block of the full
// Jacobian times [I; -1^T].
ReducedJacobian reduced_jacobian(const FullJacobian& full);

// Closed forms valid only at a fixed point:
//   d F_i/d x_i = x_i,  d F_i/d x_j = -x_i x_j / (1 - x_j).
// The caller certifies the fixed point; residual above 1e-10 is rejected.
FullJacobian fixed_point_jacobian(const DfMap& map, const SimplexPoint& xbar,
                                  double delta = kDefaultDelta);

// Central-difference Jacobian of the analytic extension of the product form,
// perturbing ambient coordinates (no tangent-space projection). Validation
// oracle for the analytic formulas. Accuracy contract: interior margin of at
// least 10h and h in [1e-7, 1e-4]; hard check is only the extension's safety
// region max_i x_i + h < 1.
FullJacobian finite_difference_jacobian(const DfMap& map, const SimplexPoint& x, double h);

// Generic central-difference engine over a vector map, used by the DfMap
// overload and by tests that differentiate other maps (e.g. the identity).
using VectorMapFn = std::function<void(std::span<const double>, std::span<double>)>;
Matrix finite_difference_jacobian(const VectorMapFn& f, std::span<const double> x, double h);

} // namespace dfcert
