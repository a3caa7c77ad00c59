#include "dfcert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dfcert/errors.hpp"

namespace dfcert {
namespace {

double off_diagonal_mass(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
}

constexpr double kPivotFactor = 1e-13; // relative pivot floor for LU

} // namespace

SymmetricSpectrum symmetric_eigenvalues(const Matrix& m, bool want_vectors) {
    if (!m.square()) fail(Errc::InvalidArgument, "eigensolver needs a square matrix");
    const std::size_t n = m.rows();
    if ((m - m.transposed()).inf_norm() > 1e-10 * m.inf_norm())
        fail(Errc::NotSymmetric, "matrix is not symmetric within 1e-10 relative");

    // Work on the exactly symmetrized copy so rotations preserve symmetry
    // bit-for-bit.
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
    Matrix v = want_vectors ? Matrix::identity(n) : Matrix();

    const double target = 1e-14 * m.frobenius_norm();
    bool converged = off_diagonal_mass(a) <= target;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = a(p, i) = c * aip - s * aiq;
                    a(i, q) = a(q, i) = s * aip + c * aiq;
                }
                if (want_vectors) {
                    for (std::size_t i = 0; i < n; ++i) {
                        const double vip = v(i, p);
                        const double viq = v(i, q);
                        v(i, p) = c * vip - s * viq;
                        v(i, q) = s * vip + c * viq;
                    }
                }
            }
        }
        converged = off_diagonal_mass(a) <= target;
    }
    if (!converged) fail(Errc::NoConvergence, "Jacobi sweeps did not reduce off-diagonal mass");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymmetricSpectrum out;
    out.eigenvalues.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.eigenvalues[k] = a(order[k], order[k]);
    if (want_vectors) {
        out.eigenvectors = Matrix(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
        out.has_vectors = true;
    }
    return out;
}

std::vector<double> df_spectrum_via_symmetrization(const FullJacobian& full,
                                                   const SimplexPoint& x) {
    const Matrix& j = full.entries;
    const std::size_t n = x.size();
    if (!j.square() || j.rows() != n)
        fail(Errc::InvalidArgument, "Jacobian and point dimensions disagree");
    if (!(x.max_coord() < 1.0))
        fail(Errc::CornerPoint, "symmetrization needs the interior scaling diag(1 - x_i)");

    // B = J * diag(1 - x_i) must come out symmetric (B_ii = F_i(1 - F_i),
    // B_ij = -F_i F_j); any asymmetry beyond rounding means the Jacobian
    // entries themselves are wrong.
    Matrix b(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t col = 0; col < n; ++col) b(r, col) = j(r, col) * (1.0 - x[col]);
    if ((b - b.transposed()).inf_norm() > 1e-10 * std::max(b.inf_norm(), 1e-300))
        fail(Errc::AsymmetryDetected, "J * diag(1 - x) lost its symmetric structure");

    // diag(1-x)^{-1/2} * B * diag(1-x)^{-1/2} is symmetric and similar to J.
    std::vector<double> root(n);
    for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(1.0 - x[i]);
    Matrix s(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t col = r; col < n; ++col) {
            const double value = 0.5 * (b(r, col) + b(col, r)) / (root[r] * root[col]);
            s(r, col) = s(col, r) = value;
        }
    }
    return symmetric_eigenvalues(s).eigenvalues;
}

SignedDeterminant signed_det(const Matrix& m) {
    if (!m.square()) fail(Errc::InvalidArgument, "determinant needs a square matrix");
    const std::size_t n = m.rows();
    const double threshold = kPivotFactor * m.max_abs();
    Matrix a = m;
    SignedDeterminant result{1, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot_row = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(pivot_row, k))) pivot_row = i;
        const double pivot = a(pivot_row, k);
        if (std::abs(pivot) <= threshold) return SignedDeterminant{0, 0.0};
        if (pivot_row != k) {
            for (std::size_t col = k; col < n; ++col) std::swap(a(k, col), a(pivot_row, col));
            result.sign = -result.sign;
        }
        if (pivot < 0.0) result.sign = -result.sign;
        result.log_magnitude += std::log(std::abs(pivot));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = a(i, k) / pivot;
            for (std::size_t col = k + 1; col < n; ++col) a(i, col) -= factor * a(k, col);
        }
    }
    return result;
}

std::vector<double> linear_solve(const Matrix& m, std::span<const double> b) {
    if (!m.square() || m.rows() != b.size())
        fail(Errc::InvalidArgument, "solve needs a square system matching the right-hand side");
    const std::size_t n = m.rows();
    const double threshold = kPivotFactor * m.max_abs();
    Matrix a = m;
    std::vector<double> rhs(b.begin(), b.end());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot_row = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(pivot_row, k))) pivot_row = i;
        if (std::abs(a(pivot_row, k)) <= threshold)
            fail(Errc::SingularMatrix, "pivot below the relative floor at column " + std::to_string(k));
        if (pivot_row != k) {
            for (std::size_t col = k; col < n; ++col) std::swap(a(k, col), a(pivot_row, col));
            std::swap(rhs[k], rhs[pivot_row]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = a(i, k) / a(k, k);
            if (factor == 0.0) continue;
            for (std::size_t col = k + 1; col < n; ++col) a(i, col) -= factor * a(k, col);
            rhs[i] -= factor * rhs[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t col = i + 1; col < n; ++col) s -= a(i, col) * x[col];
        x[i] = s / a(i, i);
    }
    return x;
}

std::vector<double> drop_zero_eigenvalue(std::span<const double> spectrum) {
    if (spectrum.size() < 2)
        fail(Errc::InvalidArgument, "need at least two eigenvalues to drop one");
    std::size_t zero_at = 0;
    for (std::size_t i = 1; i < spectrum.size(); ++i)
        if (std::abs(spectrum[i]) < std::abs(spectrum[zero_at])) zero_at = i;
    double second = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spectrum.size(); ++i)
        if (i != zero_at) second = std::min(second, std::abs(spectrum[i]));
    if (std::abs(spectrum[zero_at]) > 1e-9 || second < 1e-6)
        fail(Errc::SpectralGapTooSmall,
             "cannot isolate the structural zero eigenvalue (smallest " +
                 std::to_string(spectrum[zero_at]) + ", next " + std::to_string(second) + ")");
    std::vector<double> reduced;
    reduced.reserve(spectrum.size() - 1);
    for (std::size_t i = 0; i < spectrum.size(); ++i)
        if (i != zero_at) reduced.push_back(spectrum[i]);
    return reduced;
}

} // namespace dfcert
