// Copyright 2026 The lingeo Authors
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

#include <cstddef>
#include <iosfwd>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace lingeo {

using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Vector = Eigen::VectorXd;

// Vocabularies up to this size keep R, H and T dense.
inline constexpr Eigen::Index kDenseLimit = 5000;
// Entries below this magnitude are dropped from sparse storage.
inline constexpr double kSparseDropThreshold = 1e-8;

// A matrix that is either dense or sparse. Geometry objects hold one of
// these so that large vocabularies do not allocate n*n doubles.
class GeoMatrix {
 public:
  GeoMatrix() = default;
  explicit GeoMatrix(DenseMatrix m) : storage_(std::move(m)) {}
  explicit GeoMatrix(SparseMatrix m) : storage_(std::move(m)) {}

  static GeoMatrix identity(Eigen::Index n);

  Eigen::Index rows() const;
  Eigen::Index cols() const;
  bool is_sparse() const { return std::holds_alternative<SparseMatrix>(storage_); }

  const DenseMatrix& dense() const { return std::get<DenseMatrix>(storage_); }
  const SparseMatrix& sparse() const { return std::get<SparseMatrix>(storage_); }
  DenseMatrix to_dense() const;
  SparseMatrix to_sparse(double drop = kSparseDropThreshold) const;

  double coeff(Eigen::Index i, Eigen::Index j) const;
  Vector column_sums() const;
  // y += scale * column j.
  void add_column(Eigen::Index j, double scale, Eigen::Ref<Vector> y) const;
  Vector multiply(const Vector& x) const;
  bool all_finite() const;

  // Exact equality of shape, storage kind and values.
  friend bool operator==(const GeoMatrix& a, const GeoMatrix& b);

 private:
  std::variant<DenseMatrix, SparseMatrix> storage_;
};

// "lingeo-matrix v1 <rows> <cols> <dense|sparse>" followed by either one line
// per row (dense) or "i j value" triples (sparse). Values are written with
// 17 significant digits so a round trip is exact.
void write_matrix(std::ostream& out, const GeoMatrix& m);
GeoMatrix read_matrix(std::istream& in);

}  // namespace lingeo
