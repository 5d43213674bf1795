// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Graph Fourier basis of a real symmetric shift operator.

#ifndef GSAMP_SPECTRAL_HPP_
#define GSAMP_SPECTRAL_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gsamp/common.hpp"
#include "gsamp/graph.hpp"

namespace gsamp {

// Eigenpairs A = V diag(D) V^T plus a selected frequency set K.
// Columns of V are ordered as in D; V_K holds the columns listed in K.
struct SpectralBasis {
  Matrix V;
  Vector D;
  NodeList K;
  Matrix V_K;

  Index n() const { return V.rows(); }
  Index bandwidth() const { return static_cast<Index>(K.size()); }

  // Row i of V_K, i.e. the spectral footprint of node i.
  Vector node_row(Index i) const { return V_K.row(i).transpose(); }

  // ||v_i||^2 for every node.
  Vector leverage_scores() const { return V_K.rowwise().squaredNorm(); }
};

enum class EigenOrder {
  // Descending |lambda|, then descending lambda, then ascending index.
  kMagnitude,
  // Descending lambda, then ascending index (kPCA convention).
  kSigned,
};

// Largest absolute entry of A - A^T.
inline double asymmetry(const Matrix& a) {
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

// Full eigendecomposition of a symmetric matrix, K left empty.
inline SpectralBasis eigenbasis(const Matrix& a,
                                EigenOrder order = EigenOrder::kMagnitude) {
  require(a.rows() == a.cols(), "eigenbasis: matrix must be square");
  const Index n = a.rows();
  if (n == 0) return {};
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (asymmetry(a) > 1e-12 * scale)
    throw DomainError("eigenbasis: shift operator is not symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(a));
  if (solver.info() != Eigen::Success)
    throw DomainError("eigenbasis: eigensolver did not converge");
  const Vector& evals = solver.eigenvalues();
  const Matrix& evecs = solver.eigenvectors();

  // Magnitudes are compared on a grid of 1e-12 * max|lambda| so that
  // +lambda/-lambda pairs differing by round-off still tie on magnitude.
  const double grid = 1e-12 * std::max(1e-300, evals.cwiseAbs().maxCoeff());
  auto magnitude_key = [&](Index i) {
    return std::llround(std::abs(evals(i)) / grid);
  };
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::stable_sort(perm.begin(), perm.end(), [&](Index x, Index y) {
    if (order == EigenOrder::kMagnitude) {
      const long long mx = magnitude_key(x), my = magnitude_key(y);
      if (mx != my) return mx > my;
    }
    const double lx = evals(x), ly = evals(y);
    if (lx != ly) return lx > ly;
    return x < y;
  });

  SpectralBasis basis;
  basis.V.resize(n, n);
  basis.D.resize(n);
  for (Index c = 0; c < n; ++c) {
    const Index src = perm[static_cast<std::size_t>(c)];
    Vector v = evecs.col(src);
    // Sign convention: first entry of non-negligible magnitude is positive.
    for (Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-10) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    basis.V.col(c) = v;
    basis.D(c) = evals(src);
  }
  basis.V_K.resize(n, 0);
  return basis;
}

inline SpectralBasis spectral_basis(const Graph& g) {
  require(g.adjacency.rows() == g.n && g.adjacency.cols() == g.n,
          "spectral_basis: adjacency shape does not match n");
  return eigenbasis(g.adjacency, EigenOrder::kMagnitude);
}

// Restricts the basis to an explicit frequency set (column indices of V).
inline SpectralBasis with_band(SpectralBasis b, const NodeList& K) {
  const Index n = b.n();
  require(static_cast<Index>(K.size()) <= n, "with_band: |K| exceeds n");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Index k : K) {
    require(k >= 0 && k < n, "with_band: frequency index out of range");
    require(!seen[static_cast<std::size_t>(k)],
            "with_band: duplicate frequency index");
    seen[static_cast<std::size_t>(k)] = true;
  }
  b.K = K;
  b.V_K.resize(n, static_cast<Index>(K.size()));
  for (std::size_t c = 0; c < K.size(); ++c)
    b.V_K.col(static_cast<Index>(c)) = b.V.col(K[c]);
  return b;
}

// K = the k leading frequencies of the basis order.
inline SpectralBasis select_band(SpectralBasis b, Index k) {
  require(k >= 1 && k <= b.n(), "select_band: k must lie in [1, n]");
  NodeList K(static_cast<std::size_t>(k));
  std::iota(K.begin(), K.end(), Index{0});
  return with_band(std::move(b), K);
}

inline Vector gft(const SpectralBasis& b, const Vector& x) {
  require(x.size() == b.n(), "gft: signal length does not match basis");
  return b.V.transpose() * x;
}

inline Vector igft(const SpectralBasis& b, const Vector& xbar_K) {
  require(xbar_K.size() == b.bandwidth(),
          "igft: spectrum length does not match |K|");
  return b.V_K * xbar_K;
}

}  // namespace gsamp

#endif  // GSAMP_SPECTRAL_HPP_
