#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#if defined(RIPG_HAVE_SUITESPARSE)
#include <Eigen/CholmodSupport>
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#endif

#include "error.hpp"

namespace ripg {

namespace {

using Vector = Eigen::VectorXd;

Eigen::Map<const Vector> as_eigen(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

SparseSymmetricMatrix::SparseSymmetricMatrix(SparseMatrix full) : matrix_(std::move(full)) {
  require(matrix_.rows() == matrix_.cols(), "symmetric matrix must be square");
  matrix_.makeCompressed();
}

double SparseSymmetricMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values()) m = std::max(m, std::abs(v));
  return m;
}

double SparseSymmetricMatrix::relative_asymmetry() const {
  const SparseMatrix diff = matrix_ - SparseMatrix(matrix_.transpose());
  double m = 0.0;
  for (Eigen::Index k = 0; k < diff.nonZeros(); ++k) m = std::max(m, std::abs(diff.valuePtr()[k]));
  const double scale = max_abs();
  return scale > 0.0 ? m / scale : m;
}

std::vector<double> SparseSymmetricMatrix::multiply(std::span<const double> x) const {
  require(x.size() == dimension(), "dimension mismatch in matrix-vector product");
  return to_std(matrix_ * as_eigen(x));
}

void TripletAccumulator::add_block(std::span<const std::int32_t> rows,
                                   std::span<const std::int32_t> cols,
                                   std::span<const double> local) {
  const std::size_t nc = cols.size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < nc; ++c) triplets_.emplace_back(rows[r], cols[c], local[r * nc + c]);
  }
}

SparseMatrix TripletAccumulator::build() const {
  SparseMatrix m(static_cast<int>(n_), static_cast<int>(n_));
  m.setFromTriplets(triplets_.begin(), triplets_.end());
  m.makeCompressed();
  return m;
}

struct CholeskySolver::Impl {
#if defined(RIPG_HAVE_SUITESPARSE)
  Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower> llt;
#else
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
#endif
  SparseMatrix matrix;
  std::vector<int> pattern_outer;
  std::vector<int> pattern_inner;
  bool analyzed = false;
  bool factorized = false;

  Impl() {
#if defined(RIPG_HAVE_SUITESPARSE)
    llt.cholmod().print = 0;
#endif
  }

  bool same_pattern(const SparseMatrix& a) const {
    return analyzed && pattern_outer.size() == static_cast<std::size_t>(a.outerSize() + 1) &&
           std::equal(pattern_outer.begin(), pattern_outer.end(), a.outerIndexPtr()) &&
           pattern_inner.size() == static_cast<std::size_t>(a.nonZeros()) &&
           std::equal(pattern_inner.begin(), pattern_inner.end(), a.innerIndexPtr());
  }
};

CholeskySolver::CholeskySolver() : impl_(std::make_unique<Impl>()) {}
CholeskySolver::~CholeskySolver() = default;
CholeskySolver::CholeskySolver(CholeskySolver&&) noexcept = default;
CholeskySolver& CholeskySolver::operator=(CholeskySolver&&) noexcept = default;

bool CholeskySolver::factorize(const SparseSymmetricMatrix& a) {
  Impl& s = *impl_;
  s.matrix = a.eigen();
  if (!s.same_pattern(s.matrix)) {
    s.llt.analyzePattern(s.matrix);
    s.pattern_outer.assign(s.matrix.outerIndexPtr(), s.matrix.outerIndexPtr() + s.matrix.outerSize() + 1);
    s.pattern_inner.assign(s.matrix.innerIndexPtr(), s.matrix.innerIndexPtr() + s.matrix.nonZeros());
    s.analyzed = true;
  }
  s.llt.factorize(s.matrix);
  s.factorized = s.llt.info() == Eigen::Success;
  return s.factorized;
}

std::vector<double> CholeskySolver::solve(std::span<const double> b) const {
  const Impl& s = *impl_;
  if (!s.factorized) fail(ErrorCode::kNotSpd, "no valid Cholesky factor to solve with");
  require(b.size() == static_cast<std::size_t>(s.matrix.rows()), "right-hand side dimension mismatch");
  const auto rhs = as_eigen(b);
  Vector x = s.llt.solve(rhs);
  Vector r = rhs - s.matrix * x;
  const double bnorm = rhs.norm();
  if (bnorm > 0.0 && r.norm() > 1e-9 * bnorm) x += s.llt.solve(r);
  if (!x.allFinite()) fail(ErrorCode::kNonFinite, "Cholesky solve produced non-finite values");
  return to_std(x);
}

std::vector<double> cholesky_solve(const SparseSymmetricMatrix& a, std::span<const double> b) {
  CholeskySolver solver;
  if (!solver.factorize(a)) fail(ErrorCode::kNotSpd, "matrix is not SPD (non-positive pivot)");
  return solver.solve(b);
}

bool spd_probe(const SparseSymmetricMatrix& a) {
  CholeskySolver solver;
  return solver.factorize(a);
}

std::vector<double> lu_solve(const SparseMatrix& a, std::span<const double> b) {
  require(a.rows() == a.cols(), "LU needs a square matrix");
  require(b.size() == static_cast<std::size_t>(a.rows()), "right-hand side dimension mismatch");
#if defined(RIPG_HAVE_SUITESPARSE)
  Eigen::UmfPackLU<SparseMatrix> lu;
#else
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
#endif
  lu.compute(a);
  if (lu.info() != Eigen::Success) fail(ErrorCode::kSingular, "sparse LU factorization failed");
  const auto rhs = as_eigen(b);
  Vector x = lu.solve(rhs);
  const Vector r = rhs - a * x;
  if (rhs.norm() > 0.0 && r.norm() > 1e-10 * rhs.norm()) x += lu.solve(r);
  if (!x.allFinite()) fail(ErrorCode::kNonFinite, "LU solve produced non-finite values");
  return to_std(x);
}

double relative_residual(const SparseMatrix& a, std::span<const double> x,
                         std::span<const double> b) {
  const Vector r = a * as_eigen(x) - as_eigen(b);
  const double bnorm = as_eigen(b).norm();
  return bnorm > 0.0 ? r.norm() / bnorm : r.norm();
}

void write_coordinate(const SparseMatrix& a, std::ostream& out) {
  out.precision(17);
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      if (std::abs(it.value()) < 1e-300) continue;
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace ripg
