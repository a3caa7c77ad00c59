#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dfcert/df_map.hpp"
#include "dfcert/jacobian.hpp"
#include "dfcert/linalg.hpp"
#include "oracles.hpp"

using namespace dfcert;
using testsupport::random_admissible_gamma;
using testsupport::random_interior_point;
using testsupport::uniform01;

namespace {

Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = 2.0 * uniform01(rng) - 1.0;
    return m;
}

// Determinant by cofactor expansion along the first row, for n <= 4.
double cofactor_det(const Matrix& m) {
    const std::size_t n = m.rows();
    if (n == 1) return m(0, 0);
    double det = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        Matrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = m(r, c);
            }
        }
        det += (j % 2 == 0 ? 1.0 : -1.0) * m(0, j) * cofactor_det(minor);
    }
    return det;
}

} // namespace

TEST_CASE("eigenvalues of hand-built matrices") {
    SUBCASE("diagonal") {
        Matrix m(2, 2);
        m(0, 0) = m(1, 1) = 0.5;
        const auto spectrum = symmetric_eigenvalues(m);
        CHECK(spectrum.eigenvalues == std::vector<double>{0.5, 0.5});
    }
    SUBCASE("uniform-structure matrix aI + b * ones") {
        // a = 1/2, b = -1/6: eigenvalue a + n*b = 0 on the ones vector, a
        // elsewhere.
        Matrix m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = (i == j ? 0.5 : 0.0) - 1.0 / 6;
        const auto spectrum = symmetric_eigenvalues(m);
        REQUIRE(spectrum.eigenvalues.size() == 3);
        CHECK(std::abs(spectrum.eigenvalues[0]) <= 1e-14);
        CHECK(std::abs(spectrum.eigenvalues[1] - 0.5) <= 1e-14);
        CHECK(std::abs(spectrum.eigenvalues[2] - 0.5) <= 1e-14);
    }
    SUBCASE("zero matrix") {
        const auto spectrum = symmetric_eigenvalues(Matrix(4, 4));
        CHECK(spectrum.eigenvalues == std::vector<double>(4, 0.0));
    }
    SUBCASE("asymmetric input is rejected") {
        Matrix m(2, 2);
        m(0, 1) = 1.0;
        CHECK_THROWS_WITH_AS(symmetric_eigenvalues(m), doctest::Contains("NotSymmetric"), Error);
    }
}

TEST_CASE("random symmetric spectra satisfy trace and Frobenius identities") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix m = random_symmetric(8, rng);
        const auto spectrum = symmetric_eigenvalues(m);
        double sum = 0.0, square_sum = 0.0;
        for (double lambda : spectrum.eigenvalues) {
            sum += lambda;
            square_sum += lambda * lambda;
        }
        CHECK(std::abs(sum - m.trace()) <= 1e-10);
        CHECK(std::abs(square_sum - m.frobenius_norm() * m.frobenius_norm()) <= 1e-9);
    }
}

TEST_CASE("3x3 spectra match characteristic-polynomial roots") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix m = random_symmetric(3, rng);
        const auto spectrum = symmetric_eigenvalues(m);
        const auto roots = testsupport::char_poly_roots_3x3(m);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(std::abs(spectrum.eigenvalues[i] - roots[i]) <= 1e-9);
    }
}

TEST_CASE("eigenvector output reconstructs the input") {
    std::mt19937_64 rng(35);
    const Matrix m = random_symmetric(6, rng);
    const auto spectrum = symmetric_eigenvalues(m, true);
    REQUIRE(spectrum.has_vectors);
    Matrix reconstructed(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            for (std::size_t k = 0; k < 6; ++k)
                reconstructed(i, j) += spectrum.eigenvectors(i, k) * spectrum.eigenvalues[k] *
                                       spectrum.eigenvectors(j, k);
    CHECK((m - reconstructed).inf_norm() <= 1e-10 * m.inf_norm());
}

TEST_CASE("map spectrum through symmetrization") {
    SUBCASE("uniform fixed point") {
        const DfMap map(InfluenceWeights({1.0 / 3, 1.0 / 3, 1.0 / 3}));
        const SimplexPoint b = SimplexPoint::barycenter(3);
        const auto spectrum = df_spectrum_via_symmetrization(full_jacobian(map, b), b);
        REQUIRE(spectrum.size() == 3);
        CHECK(std::abs(spectrum[0]) <= 1e-15);
        CHECK(std::abs(spectrum[1] - 0.5) <= 1e-14);
        CHECK(std::abs(spectrum[2] - 0.5) <= 1e-14);
    }
    SUBCASE("eigenvalue sum equals the Jacobian trace") {
        std::mt19937_64 rng(37);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 3 + trial % 6;
            const DfMap map(random_admissible_gamma(n, rng));
            const SimplexPoint x = random_interior_point(n, rng);
            const FullJacobian j = full_jacobian(map, x);
            const auto spectrum = df_spectrum_via_symmetrization(j, x);
            double sum = 0.0;
            for (double lambda : spectrum) sum += lambda;
            CHECK(std::abs(sum - j.entries.trace()) <= 1e-9);
        }
    }
    SUBCASE("one zero eigenvalue, all others positive, at any interior point") {
        std::mt19937_64 rng(39);
        for (int trial = 0; trial < 50; ++trial) {
            const DfMap map(random_admissible_gamma(5, rng));
            const SimplexPoint x = random_interior_point(5, rng);
            const auto spectrum = df_spectrum_via_symmetrization(full_jacobian(map, x), x);
            int near_zero = 0;
            for (double lambda : spectrum)
                if (std::abs(lambda) <= 1e-9) ++near_zero;
            CHECK(near_zero == 1);
            for (double lambda : spectrum)
                if (std::abs(lambda) > 1e-9) CHECK(lambda > 0.0);
        }
    }
    SUBCASE("spectrum is invariant under coordinate permutation") {
        std::mt19937_64 rng(41);
        const std::size_t n = 5;
        const InfluenceWeights gamma = random_admissible_gamma(n, rng);
        const SimplexPoint x = random_interior_point(n, rng);
        Permutation p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
        std::shuffle(p.begin(), p.end(), rng);

        const DfMap map(gamma);
        const auto base = df_spectrum_via_symmetrization(full_jacobian(map, x), x);
        const DfMap permuted_map(permute(p, gamma));
        const SimplexPoint px = permute(p, x);
        const auto routed = df_spectrum_via_symmetrization(full_jacobian(permuted_map, px), px);
        REQUIRE(base.size() == routed.size());
        for (std::size_t i = 0; i < base.size(); ++i)
            CHECK(std::abs(base[i] - routed[i]) <= 1e-9);
    }
}

TEST_CASE("signed determinants") {
    SUBCASE("scaled identity") {
        Matrix m(2, 2);
        m(0, 0) = m(1, 1) = 0.5;
        const SignedDeterminant d = signed_det(m);
        CHECK(d.sign == 1);
        CHECK(d.log_magnitude == doctest::Approx(std::log(0.25)).epsilon(1e-15));
        CHECK(d.value() == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("swap matrix") {
        Matrix m(2, 2);
        m(0, 1) = m(1, 0) = 1.0;
        CHECK(signed_det(m).sign == -1);
    }
    SUBCASE("zero matrix") {
        CHECK(signed_det(Matrix(3, 3)).sign == 0);
        CHECK(signed_det(Matrix(3, 3)).value() == 0.0);
    }
    SUBCASE("agrees with cofactor expansion up to n = 4") {
        std::mt19937_64 rng(43);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 2 + trial % 3;
            Matrix m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) = 2.0 * uniform01(rng) - 1.0;
            const double reference = cofactor_det(m);
            const SignedDeterminant d = signed_det(m);
            CHECK(d.value() == doctest::Approx(reference).epsilon(1e-10));
            if (std::abs(reference) > 1e-8)
                CHECK(d.sign == (reference > 0.0 ? 1 : -1));
        }
    }
}

TEST_CASE("linear solves") {
    SUBCASE("identity") {
        const std::vector<double> b{1.0, 2.0, 3.0};
        CHECK(linear_solve(Matrix::identity(3), b) == b);
    }
    SUBCASE("scaled identity") {
        Matrix m(2, 2);
        m(0, 0) = m(1, 1) = 0.5;
        const std::vector<double> x = linear_solve(m, std::vector<double>{1.0, 1.0});
        CHECK(x == std::vector<double>{2.0, 2.0});
    }
    SUBCASE("singular matrix is rejected") {
        Matrix m(2, 2);
        m(0, 0) = m(0, 1) = m(1, 0) = m(1, 1) = 1.0;
        CHECK_THROWS_WITH_AS(linear_solve(m, std::vector<double>{1.0, 0.0}),
                             doctest::Contains("SingularMatrix"), Error);
    }
    SUBCASE("residual bound on random systems") {
        std::mt19937_64 rng(45);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 2 + trial % 7;
            Matrix m(n, n);
            std::vector<double> b(n);
            for (std::size_t i = 0; i < n; ++i) {
                b[i] = 2.0 * uniform01(rng) - 1.0;
                for (std::size_t j = 0; j < n; ++j) m(i, j) = 2.0 * uniform01(rng) - 1.0;
            }
            std::vector<double> x;
            try {
                x = linear_solve(m, b);
            } catch (const Error&) {
                continue; // drew a (near-)singular matrix
            }
            const std::vector<double> mx = mat_vec(m, x);
            double residual = 0.0, x_norm = 0.0, b_norm = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                residual = std::max(residual, std::abs(mx[i] - b[i]));
                x_norm = std::max(x_norm, std::abs(x[i]));
                b_norm = std::max(b_norm, std::abs(b[i]));
            }
            CHECK(residual <= 1e-10 * (m.inf_norm() * x_norm + b_norm));
        }
    }
}

TEST_CASE("dropping the structural zero eigenvalue") {
    const std::vector<double> spectrum{3e-17, 0.31, 0.69};
    CHECK(drop_zero_eigenvalue(spectrum) == std::vector<double>{0.31, 0.69});

    // Smallest too large.
    CHECK_THROWS_WITH_AS(drop_zero_eigenvalue(std::vector<double>{1e-7, 0.3, 0.7}),
                         doctest::Contains("SpectralGapTooSmall"), Error);
    // Second-smallest too close to zero to be distinguishable.
    CHECK_THROWS_WITH_AS(drop_zero_eigenvalue(std::vector<double>{1e-12, 1e-8, 0.7}),
                         doctest::Contains("SpectralGapTooSmall"), Error);
}
