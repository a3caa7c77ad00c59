#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dfcert/errors.hpp"

namespace dfcert {

// Corner-exclusion margin used when no explicit value is configured.
inline constexpr double kDefaultDelta = 1e-9;
// Absolute tolerance for sum-to-one invariants (~100x double epsilon at 1).
inline constexpr double kSumTolerance = 1e-12;

// A point of the unit simplex: nonnegative coordinates summing to one, n >= 3.
// Construction clamps entries to [0,1] and renormalizes, so downstream
// iteration never drifts off the simplex.
class SimplexPoint {
public:
    explicit SimplexPoint(std::vector<double> raw);

    static SimplexPoint barycenter(std::size_t n);
    static SimplexPoint corner(std::size_t n, std::size_t i);
    // Wraps coordinates that already satisfy the invariants (renormalized map
    // output, reordered coordinates). Checked in debug builds only.
    static SimplexPoint from_trusted(std::vector<double> coords);

    std::size_t size() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const noexcept { return coords_[i]; }
    const std::vector<double>& coords() const noexcept { return coords_; }
    std::span<const double> span() const noexcept { return coords_; }

    double max_coord() const noexcept;
    // Membership in the shrunken simplex: max_i x_i <= 1 - delta.
    bool in_shrunken(double delta) const noexcept { return max_coord() <= 1.0 - delta; }
    bool is_corner() const noexcept { return max_coord() == 1.0; }

    friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

private:
    struct Trusted {};
    SimplexPoint(Trusted, std::vector<double> coords) : coords_(std::move(coords)) {}

    std::vector<double> coords_;
};

inline SimplexPoint make_simplex_point(std::vector<double> raw) {
    return SimplexPoint(std::move(raw));
}

// The shrunken simplex: coordinates additionally bounded by 1 - delta.
struct ShrunkenSimplexSpec {
    double delta = kDefaultDelta;

    explicit ShrunkenSimplexSpec(double d) : delta(d) {
        if (!(d > 0.0 && d < 1.0)) fail(Errc::BadDelta, "delta must lie in (0, 1)");
    }
    bool contains(const SimplexPoint& x) const noexcept { return x.in_shrunken(delta); }
};

// Influence weights: strictly positive, sum to one, every entry below 1/2
// (a weight of 1/2 is the excluded star-graph case).
class InfluenceWeights {
public:
    explicit InfluenceWeights(std::vector<double> gamma);

    std::size_t size() const noexcept { return gamma_.size(); }
    double operator[](std::size_t i) const noexcept { return gamma_[i]; }
    const std::vector<double>& values() const noexcept { return gamma_; }
    std::span<const double> span() const noexcept { return gamma_; }

    friend bool operator==(const InfluenceWeights&, const InfluenceWeights&) = default;

private:
    std::vector<double> gamma_;
};

// Deterministic interior sampling: symmetric Dirichlet via renormalized
// exponential draws, rejected against the 1 - delta coordinate bound.
std::vector<SimplexPoint> sample_interior(std::size_t n, std::size_t count,
                                          std::uint64_t seed, double delta);

// A permutation p given by its image table: p[i] is where index i goes.
using Permutation = std::vector<std::size_t>;

bool is_permutation(const Permutation& p);
std::vector<double> permute_values(const Permutation& p, std::span<const double> v);
SimplexPoint permute(const Permutation& p, const SimplexPoint& x);
InfluenceWeights permute(const Permutation& p, const InfluenceWeights& w);

} // namespace dfcert
