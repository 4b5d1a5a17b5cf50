#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace emacfem {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Compressed-row matrix. Column indices are sorted and unique within each
/// row; explicit zeros produced by assembly are kept so patterns stay stable.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols);

  /// Duplicate (row, col) entries are summed.
  static SparseMatrix from_triplets(int rows, int cols, std::span<const Triplet> triplets);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Entry (i, j), zero when not stored.
  double at(int i, int j) const;
  std::vector<double> multiply(std::span<const double> x) const;
  /// y = A^T x
  std::vector<double> multiply_transpose(std::span<const double> x) const;
  bool same_pattern(const SparseMatrix& other) const;

  void write_matrix_market(const std::filesystem::path& path) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> col_indices_;
  std::vector<double> values_;
};

struct LinearSolveReport {
  double residual_norm = 0.0;         // ||Ax - b||_2
  bool reused_factorization = false;  // symbolic analysis reused
};

/// Direct sparse LU (UMFPACK). The symbolic analysis is kept while the
/// sparsity pattern stays the same; values are refactorized on every call to
/// factorize().
class LinearSolver {
 public:
  LinearSolver();
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;
  LinearSolver(const LinearSolver&) = delete;
  LinearSolver& operator=(const LinearSolver&) = delete;

  /// Throws SingularMatrix naming the offending row.
  void factorize(const SparseMatrix& a);
  std::vector<double> solve(std::span<const double> b, LinearSolveReport* report = nullptr) const;
  bool symbolic_reused() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::pair<std::vector<double>, LinearSolveReport> solve(const SparseMatrix& a,
                                                        std::span<const double> b);

double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

}  // namespace emacfem
