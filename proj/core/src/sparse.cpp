#include "emacfem/sparse.hpp"

#include <umfpack.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <string>

#include "emacfem/errors.hpp"

namespace emacfem {

SparseMatrix::SparseMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), row_offsets_(static_cast<std::size_t>(rows) + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::span<const Triplet> triplets) {
  if (rows < 0 || cols < 0) throw InvalidArgument("negative matrix dimensions");
  SparseMatrix m(rows, cols);
  std::vector<int> count(static_cast<std::size_t>(rows) + 1, 0);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw InvalidArgument("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                            ") out of range for " + std::to_string(rows) + "x" +
                            std::to_string(cols) + " matrix");
    }
    ++count[t.row + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());

  // Bucket by row, then sort and merge columns within each row.
  std::vector<std::pair<int, double>> bucket(triplets.size());
  std::vector<int> fill(count.begin(), count.end() - 1);
  for (const auto& t : triplets) bucket[fill[t.row]++] = {t.col, t.value};

  m.col_indices_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (int r = 0; r < rows; ++r) {
    auto first = bucket.begin() + count[r];
    auto last = bucket.begin() + count[r + 1];
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!m.col_indices_.empty() && static_cast<int>(m.col_indices_.size()) > m.row_offsets_[r] &&
          m.col_indices_.back() == it->first) {
        m.values_.back() += it->second;
      } else {
        m.col_indices_.push_back(it->first);
        m.values_.push_back(it->second);
      }
    }
    m.row_offsets_[r + 1] = static_cast<int>(m.col_indices_.size());
  }
  return m;
}

double SparseMatrix::at(int i, int j) const {
  const auto first = col_indices_.begin() + row_offsets_[i];
  const auto last = col_indices_.begin() + row_offsets_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[it - col_indices_.begin()];
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != cols_) throw InvalidArgument("matvec size mismatch");
  std::vector<double> y(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) s += values_[k] * x[col_indices_[k]];
    y[r] = s;
  }
  return y;
}

std::vector<double> SparseMatrix::multiply_transpose(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != rows_) throw InvalidArgument("transpose matvec size mismatch");
  std::vector<double> y(cols_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) y[col_indices_[k]] += values_[k] * x[r];
  }
  return y;
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && row_offsets_ == other.row_offsets_ &&
         col_indices_ == other.col_indices_;
}

void SparseMatrix::write_matrix_market(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << rows_ << " " << cols_ << " " << nnz() << "\n";
  out << std::setprecision(17);
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      out << r + 1 << " " << col_indices_[k] + 1 << " " << values_[k] << "\n";
    }
  }
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

// UMFPACK works on compressed columns. The CSR arrays of A are the CSC arrays
// of A^T, so we factorize A^T and solve with the transposed system flag.
struct LinearSolver::Impl {
  void* symbolic = nullptr;
  void* numeric = nullptr;
  bool reused = false;
  SparseMatrix matrix;
  double control[UMFPACK_CONTROL];

  Impl() { umfpack_di_defaults(control); }
  ~Impl() { release(); }

  void release_numeric() {
    if (numeric) umfpack_di_free_numeric(&numeric);
    numeric = nullptr;
  }
  void release() {
    release_numeric();
    if (symbolic) umfpack_di_free_symbolic(&symbolic);
    symbolic = nullptr;
  }
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

bool LinearSolver::symbolic_reused() const { return impl_->reused; }

void LinearSolver::factorize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("linear solve needs a square matrix");
  const int n = a.rows();
  for (int r = 0; r < n; ++r) {
    bool nonzero = false;
    for (int k = a.row_offsets()[r]; k < a.row_offsets()[r + 1]; ++k) {
      if (a.values()[k] != 0.0) {
        nonzero = true;
        break;
      }
    }
    if (!nonzero) throw SingularMatrix("matrix is singular: row " + std::to_string(r) + " is empty", r);
  }

  Impl& s = *impl_;
  s.reused = s.symbolic != nullptr && s.matrix.same_pattern(a);
  s.release_numeric();
  s.matrix = a;
  const int* ap = s.matrix.row_offsets().data();
  const int* ai = s.matrix.col_indices().data();
  const double* ax = s.matrix.values().data();
  double info[UMFPACK_INFO];

  if (!s.reused) {
    if (s.symbolic) umfpack_di_free_symbolic(&s.symbolic);
    s.symbolic = nullptr;
    const int status = umfpack_di_symbolic(n, n, ap, ai, ax, &s.symbolic, s.control, info);
    if (status != UMFPACK_OK) {
      throw Error("sparse symbolic factorization failed (UMFPACK status " + std::to_string(status) + ")");
    }
  }
  const int status = umfpack_di_numeric(ap, ai, ax, s.symbolic, &s.numeric, s.control, info);
  if (status == UMFPACK_WARNING_singular_matrix) {
    // Locate the zero pivot: P A^T Q = L U, so pivot k corresponds to row Q[k] of A.
    std::vector<int> p(n), q(n);
    std::vector<double> udiag(n);
    int lnz = 0, unz = 0, nrow = 0, ncol = 0, nz_udiag = 0;
    umfpack_di_get_lunz(&lnz, &unz, &nrow, &ncol, &nz_udiag, s.numeric);
    int do_recip = 0;
    long pivot = -1;
    if (umfpack_di_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, p.data(), q.data(),
                               udiag.data(), &do_recip, nullptr, s.numeric) == UMFPACK_OK) {
      for (int k = 0; k < n; ++k) {
        if (udiag[k] == 0.0) {
          pivot = q[k];
          break;
        }
      }
    }
    s.release_numeric();
    throw SingularMatrix("matrix is singular to working precision at pivot row " + std::to_string(pivot),
                         pivot);
  }
  if (status != UMFPACK_OK) {
    s.release_numeric();
    throw Error("sparse numeric factorization failed (UMFPACK status " + std::to_string(status) + ")");
  }
}

std::vector<double> LinearSolver::solve(std::span<const double> b, LinearSolveReport* report) const {
  const Impl& s = *impl_;
  if (!s.numeric) throw InvalidState("solve called before a successful factorize");
  const int n = s.matrix.rows();
  if (static_cast<int>(b.size()) != n) throw InvalidArgument("right-hand side size mismatch");
  std::vector<double> x(n, 0.0);
  double info[UMFPACK_INFO];
  const int status = umfpack_di_solve(UMFPACK_At, s.matrix.row_offsets().data(),
                                      s.matrix.col_indices().data(), s.matrix.values().data(),
                                      x.data(), b.data(), s.numeric, s.control, info);
  if (status != UMFPACK_OK) {
    throw Error("sparse triangular solve failed (UMFPACK status " + std::to_string(status) + ")");
  }
  if (report) {
    auto ax = s.matrix.multiply(x);
    for (int i = 0; i < n; ++i) ax[i] -= b[i];
    report->residual_norm = norm2(ax);
    report->reused_factorization = s.reused;
  }
  return x;
}

std::pair<std::vector<double>, LinearSolveReport> solve(const SparseMatrix& a,
                                                        std::span<const double> b) {
  LinearSolver solver;
  solver.factorize(a);
  LinearSolveReport report;
  auto x = solver.solve(b, &report);
  return {std::move(x), report};
}

}  // namespace emacfem
