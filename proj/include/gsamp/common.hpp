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

// Shared vocabulary: matrix aliases, error types and small numeric helpers.

#ifndef GSAMP_COMMON_HPP_
#define GSAMP_COMMON_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsamp {

inline constexpr const char* kVersion = "1.0.0";

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Node ids are plain indices into the node ordering of the graph.
using NodeList = std::vector<Index>;

// Invalid argument values or inconsistent dimensions.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Inputs that are well-formed but violate a mathematical hypothesis
// (asymmetric shift operator, singular W, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// An exhaustive oracle would exceed its enumeration cap.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::uint64_t required)
      : std::runtime_error(what), required_(required) {}
  std::uint64_t required() const { return required_; }

 private:
  std::uint64_t required_;
};

// A result contradicts an invariant that must hold by construction.
class ConsistencyError : public std::logic_error {
 public:
  explicit ConsistencyError(const std::string& what)
      : std::logic_error(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ParameterError(message);
}

// (M + M^T) / 2.
inline Matrix symmetrized(const Matrix& m) {
  return 0.5 * (m + m.transpose());
}

// Binomial coefficient saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace gsamp

#endif  // GSAMP_COMMON_HPP_
