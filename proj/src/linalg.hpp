#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Sparse>

namespace ripg {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Symmetric sparse matrix with both triangles stored. Column-compressed
/// storage of a structurally symmetric matrix doubles as its row-compressed
/// form, so offsets/indices are exposed under row names.
class SparseSymmetricMatrix {
 public:
  SparseSymmetricMatrix() = default;
  explicit SparseSymmetricMatrix(SparseMatrix full);

  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::span<const int> row_offsets() const {
    return {matrix_.outerIndexPtr(), dimension() + 1};
  }
  std::span<const int> column_indices() const {
    return {matrix_.innerIndexPtr(), static_cast<std::size_t>(matrix_.nonZeros())};
  }
  std::span<const double> values() const {
    return {matrix_.valuePtr(), static_cast<std::size_t>(matrix_.nonZeros())};
  }
  double coeff(std::size_t i, std::size_t j) const {
    return matrix_.coeff(static_cast<int>(i), static_cast<int>(j));
  }
  const SparseMatrix& eigen() const { return matrix_; }

  double max_abs() const;
  /// max |A_ij - A_ji| / max |A|.
  double relative_asymmetry() const;
  std::vector<double> multiply(std::span<const double> x) const;

 private:
  SparseMatrix matrix_;
};

/// Coordinate-list accumulator; duplicates are summed on build.
class TripletAccumulator {
 public:
  explicit TripletAccumulator(std::size_t dimension) : n_(dimension) {}

  void reserve(std::size_t count) { triplets_.reserve(count); }
  void add(std::int32_t i, std::int32_t j, double v) { triplets_.emplace_back(i, j, v); }
  /// Dense row-major block local(r, c) at (rows[r], cols[c]).
  void add_block(std::span<const std::int32_t> rows, std::span<const std::int32_t> cols,
                 std::span<const double> local);
  SparseMatrix build() const;

 private:
  std::size_t n_;
  std::vector<Eigen::Triplet<double, int>> triplets_;
};

/// Sparse Cholesky with fill-reducing ordering. The symbolic analysis is
/// kept across factorize() calls while the sparsity pattern is unchanged.
class CholeskySolver {
 public:
  CholeskySolver();
  ~CholeskySolver();
  CholeskySolver(CholeskySolver&&) noexcept;
  CholeskySolver& operator=(CholeskySolver&&) noexcept;

  /// False when a non-positive pivot shows up (matrix is not SPD).
  bool factorize(const SparseSymmetricMatrix& a);
  /// Solve against the last factorized matrix, with one step of iterative
  /// refinement when the relative residual exceeds 1e-9.
  std::vector<double> solve(std::span<const double> b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Throws Error(kNotSpd) on a non-positive pivot.
std::vector<double> cholesky_solve(const SparseSymmetricMatrix& a, std::span<const double> b);

bool spd_probe(const SparseSymmetricMatrix& a);

/// Sparse LU for nonsymmetric systems. Throws Error(kSingular).
std::vector<double> lu_solve(const SparseMatrix& a, std::span<const double> b);

/// ||A x - b||_2 / ||b||_2 (or ||A x||_2 when b = 0).
double relative_residual(const SparseMatrix& a, std::span<const double> x,
                         std::span<const double> b);

/// Coordinate text format: "row col value" per line, 0-based; entries with
/// magnitude below 1e-300 are skipped.
void write_coordinate(const SparseMatrix& a, std::ostream& out);

}  // namespace ripg
