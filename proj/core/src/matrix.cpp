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

#include "lingeo/matrix.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lingeo/error.hpp"

namespace lingeo {

GeoMatrix GeoMatrix::identity(Eigen::Index n) {
  SparseMatrix m(n, n);
  m.setIdentity();
  return GeoMatrix(std::move(m));
}

Eigen::Index GeoMatrix::rows() const {
  return std::visit([](const auto& m) { return m.rows(); }, storage_);
}

Eigen::Index GeoMatrix::cols() const {
  return std::visit([](const auto& m) { return m.cols(); }, storage_);
}

DenseMatrix GeoMatrix::to_dense() const {
  if (is_sparse()) return DenseMatrix(sparse());
  return dense();
}

SparseMatrix GeoMatrix::to_sparse(double drop) const {
  if (is_sparse()) return sparse();
  return dense().sparseView(1.0, drop);
}

double GeoMatrix::coeff(Eigen::Index i, Eigen::Index j) const {
  if (is_sparse()) return sparse().coeff(i, j);
  return dense()(i, j);
}

Vector GeoMatrix::column_sums() const {
  if (is_sparse()) {
    Vector sums = Vector::Zero(cols());
    const SparseMatrix& s = sparse();
    for (Eigen::Index j = 0; j < s.outerSize(); ++j) {
      for (SparseMatrix::InnerIterator it(s, j); it; ++it) sums[j] += it.value();
    }
    return sums;
  }
  return dense().colwise().sum().transpose();
}

void GeoMatrix::add_column(Eigen::Index j, double scale, Eigen::Ref<Vector> y) const {
  if (is_sparse()) {
    for (SparseMatrix::InnerIterator it(sparse(), j); it; ++it) y[it.row()] += scale * it.value();
  } else {
    y.noalias() += scale * dense().col(j);
  }
}

Vector GeoMatrix::multiply(const Vector& x) const {
  if (is_sparse()) return sparse() * x;
  return dense() * x;
}

bool GeoMatrix::all_finite() const {
  if (is_sparse()) {
    const SparseMatrix& s = sparse();
    for (Eigen::Index k = 0; k < s.nonZeros(); ++k) {
      if (!std::isfinite(s.valuePtr()[k])) return false;
    }
    return true;
  }
  return dense().allFinite();
}

bool operator==(const GeoMatrix& a, const GeoMatrix& b) {
  if (a.is_sparse() != b.is_sparse() || a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.is_sparse()) return DenseMatrix(a.sparse()) == DenseMatrix(b.sparse());
  return a.dense() == b.dense();
}

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.write(buf, end - buf);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw FormatError("malformed matrix value '" + token + "'");
  }
  return v;
}

}  // namespace

void write_matrix(std::ostream& out, const GeoMatrix& m) {
  out << "lingeo-matrix v1 " << m.rows() << ' ' << m.cols() << ' '
      << (m.is_sparse() ? "sparse" : "dense") << '\n';
  if (m.is_sparse()) {
    // Row-major triple order regardless of the column-major storage.
    const SparseMatrix& s = m.sparse();
    Eigen::SparseMatrix<double, Eigen::RowMajor> r(s);
    for (Eigen::Index i = 0; i < r.outerSize(); ++i) {
      for (decltype(r)::InnerIterator it(r, i); it; ++it) {
        out << it.row() << ' ' << it.col() << ' ';
        put(out, it.value());
        out << '\n';
      }
    }
    return;
  }
  const DenseMatrix& d = m.dense();
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (j) out << ' ';
      put(out, d(i, j));
    }
    out << '\n';
  }
}

GeoMatrix read_matrix(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw FormatError("empty matrix file");
  std::istringstream hs(header);
  std::string magic, version, kind;
  long long rows = -1, cols = -1;
  hs >> magic >> version >> rows >> cols >> kind;
  if (magic != "lingeo-matrix" || version != "v1" || rows < 0 || cols < 0 ||
      (kind != "dense" && kind != "sparse")) {
    throw FormatError("bad matrix header '" + header + "'");
  }
  std::string token;
  if (kind == "dense") {
    DenseMatrix d(rows, cols);
    for (long long i = 0; i < rows; ++i) {
      for (long long j = 0; j < cols; ++j) {
        if (!(in >> token)) throw FormatError("truncated dense matrix");
        d(i, j) = parse_double(token);
      }
    }
    return GeoMatrix(std::move(d));
  }
  std::vector<Eigen::Triplet<double>> triplets;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long i = 0, j = 0;
    std::string extra;
    if (!(ls >> i >> j >> token) || (ls >> extra)) throw FormatError("malformed sparse matrix entry '" + line + "'");
    if (i < 0 || j < 0 || i >= rows || j >= cols) throw FormatError("sparse entry out of range");
    triplets.emplace_back(i, j, parse_double(token));
  }
  SparseMatrix s(rows, cols);
  s.setFromTriplets(triplets.begin(), triplets.end());
  return GeoMatrix(std::move(s));
}

}  // namespace lingeo
