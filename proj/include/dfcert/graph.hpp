#pragma once

#include "dfcert/matrix.hpp"
#include "dfcert/simplex.hpp"

namespace dfcert {

// Row-stochastic, zero-diagonal interaction matrix of the opinion network.
// The constructor validates shape and entries (each row sums to 1 within
// 1e-12, all entries >= 0, diagonal exactly 0) and throws InvalidMatrix
// otherwise.
class InteractionMatrix {
  public:
    explicit InteractionMatrix(Matrix entries);

    std::size_t size() const noexcept { return entries_.rows(); }
    const Matrix& entries() const noexcept { return entries_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

  private:
    Matrix entries_;
};

// True iff every node reaches every other node along the directed support
// graph (edge j -> i whenever C_ij > 0): two reachability passes, one on the
// graph and one on its reverse.
bool validate_connectivity(const InteractionMatrix& c);

// Left Perron eigenvector of C, normalized to the simplex: the influence
// weights gamma with gamma^T C = gamma^T. Requires strong connectivity;
// throws StarGraphDetected when the resulting weights contain an entry
// >= 1/2 (star-like topologies put half the influence on one hub, and the
// self-confidence dynamics then collapse toward that hub's corner).
InfluenceWeights gamma_from_matrix(const InteractionMatrix& c);

} // namespace dfcert
