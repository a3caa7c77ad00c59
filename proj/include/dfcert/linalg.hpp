#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "dfcert/jacobian.hpp"
#include "dfcert/matrix.hpp"
#include "dfcert/simplex.hpp"

namespace dfcert {

struct SymmetricSpectrum {
    std::vector<double> eigenvalues; // sorted ascending
    Matrix eigenvectors;             // columns, empty unless requested
    bool has_vectors = false;
};

// Cyclic Jacobi rotations. Converges when the off-diagonal Frobenius mass
// drops to 1e-14 of the input Frobenius norm, or fails after 100 sweeps.
SymmetricSpectrum symmetric_eigenvalues(const Matrix& m, bool want_vectors = false);

// Spectrum of the full Jacobian through the symmetrization route:
// A = diag(1 - x_i) is positive definite at an interior point, B = J*A is
// symmetric by the structure of the map (B_ii = F_i(1-F_i), B_ij = -F_i F_j),
// and A^{-1/2} B A^{-1/2} is symmetric and similar to J = B A^{-1}. Output is
// sorted ascending, all real: one zero and the rest positive.
std::vector<double> df_spectrum_via_symmetrization(const FullJacobian& full,
                                                   const SimplexPoint& x);

struct SignedDeterminant {
    int sign = 0;           // -1, 0, +1
    double log_magnitude = 0.0;

    double value() const noexcept { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }
};

// LU with partial pivoting. Sign accounts for row swaps; a pivot at or below
// 1e-13 times the matrix max-norm reports sign 0 (a value, not an error).
SignedDeterminant signed_det(const Matrix& m);

// LU solve with partial pivoting; throws SingularMatrix at the same pivot
// threshold as signed_det.
std::vector<double> linear_solve(const Matrix& m, std::span<const double> b);

// Removes the unique near-zero eigenvalue from a full-Jacobian spectrum,
// yielding the reduced spectrum. The smallest magnitude must be <= 1e-9 and
// the second smallest >= 1e-6, else SpectralGapTooSmall: callers never
// silently mislabel which eigenvalue dropped.
std::vector<double> drop_zero_eigenvalue(std::span<const double> spectrum);

} // namespace dfcert
