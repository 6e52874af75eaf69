// Copyright 2026 The VEAT Authors.
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

#pragma once

#include <algorithm>
#include <string>

#include <Eigen/Dense>

#include "veat/errors.hpp"

namespace veat {

// Cosine similarity clamped to [-1, 1].
template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar cosine(const Eigen::MatrixBase<DerivedU>& u,
                                 const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedU::Scalar;
  if (u.size() != v.size()) {
    throw ValidationError("cosine: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                          std::to_string(v.size()) + ")");
  }
  const Scalar nu = u.norm();
  const Scalar nv = v.norm();
  if (nu == Scalar(0) || nv == Scalar(0)) throw ValidationError("cosine: zero vector");
  const Scalar c = u.dot(v) / (nu * nv);
  return std::clamp(c, Scalar(-1), Scalar(1));
}

// Copy of `m` with every column scaled to unit L2 norm.
template <typename Derived>
typename Derived::PlainObject normalized_columns(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  typename Derived::PlainObject out = m;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const Scalar norm = out.col(j).norm();
    if (norm == Scalar(0)) {
      throw ValidationError("zero vector in column " + std::to_string(j));
    }
    out.col(j) /= norm;
  }
  return out;
}

// Pairwise cosines between the columns of `lhs` (rows of the result) and the
// columns of `rhs` (columns of the result), clamped to [-1, 1].
template <typename DerivedL, typename DerivedR>
Eigen::Matrix<typename DerivedL::Scalar, Eigen::Dynamic, Eigen::Dynamic> cosine_matrix(
    const Eigen::MatrixBase<DerivedL>& lhs, const Eigen::MatrixBase<DerivedR>& rhs) {
  using Scalar = typename DerivedL::Scalar;
  if (lhs.rows() != rhs.rows()) {
    throw ValidationError("cosine_matrix: dimension mismatch (" + std::to_string(lhs.rows()) +
                          " vs " + std::to_string(rhs.rows()) + ")");
  }
  const auto l = normalized_columns(lhs);
  const auto r = normalized_columns(rhs);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = l.transpose() * r;
  return out.cwiseMax(Scalar(-1)).cwiseMin(Scalar(1));
}

}  // namespace veat
