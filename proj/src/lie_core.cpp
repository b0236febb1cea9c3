#include "cohomlab/lie_core.hpp"

#include <algorithm>
#include <cmath>

namespace cohomlab {

namespace {

void require_dim(const Vec& x, int n, const char* what) {
  if (x.size() != n)
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) +
                         ", got " + std::to_string(x.size()));
}

}  // namespace

LieAlgebra::LieAlgebra(std::string name, int dim, std::vector<double> c)
    : name_(std::move(name)), dim_(dim), c_(std::move(c)) {
  if (dim_ <= 0) throw DimensionError("LieAlgebra: dim must be positive");
  if (c_.size() != static_cast<size_t>(dim_) * dim_ * dim_)
    throw DimensionError("LieAlgebra: structure constant array has wrong size");
}

Vec LieAlgebra::bracket(const Vec& x, const Vec& y) const {
  require_dim(x, dim_, "bracket");
  require_dim(y, dim_, "bracket");
  Vec out = Vec::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      const double s = x[i] * y[j];
      if (s == 0.0) continue;
      const double* row = &c_[(i * dim_ + j) * dim_];
      for (int k = 0; k < dim_; ++k) out[k] += s * row[k];
    }
  }
  return out;
}

Mat LieAlgebra::ad(const Vec& x) const {
  require_dim(x, dim_, "ad");
  Mat m = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) m(k, j) += x[i] * c(i, j, k);
  }
  return m;
}

Vec LieAlgebra::basis(int i) const { return Vec::Unit(dim_, i); }

AlgebraDiagnostics check_algebra(const LieAlgebra& A) {
  const int n = A.dim();
  AlgebraDiagnostics d;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        d.antisymmetry = std::max(d.antisymmetry, std::abs(A.c(i, j, k) + A.c(j, i, k)));
        d.biinvariance = std::max(d.biinvariance, std::abs(A.c(i, j, k) + A.c(i, k, j)));
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) {
          double s = 0;
          for (int m = 0; m < n; ++m)
            s += A.c(i, j, m) * A.c(m, l, k) + A.c(j, l, m) * A.c(m, i, k) +
                 A.c(l, i, m) * A.c(m, j, k);
          d.jacobi = std::max(d.jacobi, std::abs(s));
        }
  return d;
}

Mat adjoint_exp(const LieAlgebra& A, const Vec& x) {
  Mat X = A.ad(x);
  const int n = A.dim();
  const double norm = X.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  X /= std::ldexp(1.0, squarings);
  // Taylor to degree 16: remainder below 0.25^17/17! relative.
  Mat E = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (int k = 1; k <= 16; ++k) {
    term = term * X / static_cast<double>(k);
    E += term;
  }
  for (int s = 0; s < squarings; ++s) E = E * E;
  return E;
}

Mat nullspace(const Mat& M, double tol) {
  const int n = static_cast<int>(M.cols());
  if (n == 0) return Mat(0, 0);
  if (M.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  int rank = 0;
  if (smax > 0)
    for (int i = 0; i < s.size(); ++i)
      if (s[i] > tol * smax) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Mat orthonormal_span(const Mat& columns, double tol) {
  const int n = static_cast<int>(columns.rows());
  if (columns.cols() == 0) return Mat(n, 0);
  Eigen::JacobiSVD<Mat> svd(columns, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int rank = 0;
  if (s.size() && s[0] > 0)
    for (int i = 0; i < s.size(); ++i)
      if (s[i] > tol * s[0]) ++rank;
  return svd.matrixU().leftCols(rank);
}

Mat center_basis(const LieAlgebra& A) {
  const int n = A.dim();
  // v in z(g) iff ad_{e_i} v = 0 for all i.
  Mat stacked(n * n, n);
  for (int i = 0; i < n; ++i) stacked.block(i * n, 0, n, n) = A.ad(A.basis(i));
  if (stacked.cwiseAbs().maxCoeff() == 0.0) return Mat::Identity(n, n);
  return nullspace(stacked);
}

BlockDecomposition::BlockDecomposition(AlgebraPtr algebra,
                                       std::vector<std::vector<int>> blocks,
                                       std::vector<bool> prefixFlags)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)), flags_(std::move(prefixFlags)) {
  if (!algebra_) throw std::invalid_argument("BlockDecomposition: null algebra");
  if (blocks_.empty()) throw std::invalid_argument("BlockDecomposition: block 0 (h) required");
  if (flags_.empty()) flags_.assign(blocks_.size(), false);
  if (flags_.size() != blocks_.size())
    throw DimensionError("BlockDecomposition: one prefix flag per block expected");
  owner_.assign(algebra_->dim(), -1);
  for (size_t b = 0; b < blocks_.size(); ++b)
    for (int j : blocks_[b]) {
      if (j < 0 || j >= algebra_->dim())
        throw DimensionError("BlockDecomposition: index out of range");
      if (owner_[j] != -1) throw std::invalid_argument("BlockDecomposition: blocks overlap");
      owner_[j] = static_cast<int>(b);
    }
}

Vec BlockDecomposition::project(const Vec& x, int blockIndex) const {
  require_dim(x, dim(), "project");
  Vec out = Vec::Zero(dim());
  for (int j : blocks_.at(blockIndex)) out[j] = x[j];
  return out;
}

Vec BlockDecomposition::projectM(const Vec& x) const {
  require_dim(x, dim(), "projectM");
  Vec out = Vec::Zero(dim());
  for (int j = 0; j < dim(); ++j)
    if (owner_[j] >= 1) out[j] = x[j];
  return out;
}

Vec BlockDecomposition::projectPrefix(const Vec& x, int i) const {
  require_dim(x, dim(), "projectPrefix");
  Vec out = Vec::Zero(dim());
  for (int j = 0; j < dim(); ++j)
    if (owner_[j] >= 0 && owner_[j] <= i) out[j] = x[j];
  return out;
}

double BlockDecomposition::offMNorm(const Vec& x) const {
  double worst = 0;
  for (int j = 0; j < dim(); ++j)
    if (owner_[j] < 1) worst = std::max(worst, std::abs(x[j]));
  return worst;
}

DecompositionDiagnostics BlockDecomposition::check() const {
  const LieAlgebra& A = *algebra_;
  DecompositionDiagnostics d;
  auto residual = [&](const Vec& v, auto&& inside) {
    double r = 0;
    for (int k = 0; k < dim(); ++k)
      if (!inside(k)) r = std::max(r, std::abs(v[k]));
    return r;
  };
  for (int a : blocks_[0])
    for (int b : blocks_[0]) {
      Vec v = A.bracket(A.basis(a), A.basis(b));
      d.hClosure = std::max(d.hClosure, residual(v, [&](int k) { return owner_[k] == 0; }));
    }
  for (int a : blocks_[0])
    for (int i = 1; i < numBlocks(); ++i)
      for (int b : blocks_[i]) {
        Vec v = A.bracket(A.basis(a), A.basis(b));
        d.invariance = std::max(d.invariance, residual(v, [&](int k) { return owner_[k] == i; }));
      }
  for (int i = 0; i < numBlocks(); ++i) {
    if (!flags_[i]) continue;
    for (int a = 0; a < dim(); ++a)
      for (int b = 0; b < dim(); ++b) {
        if (owner_[a] < 0 || owner_[a] > i || owner_[b] < 0 || owner_[b] > i) continue;
        Vec v = A.bracket(A.basis(a), A.basis(b));
        d.prefixClosure = std::max(
            d.prefixClosure, residual(v, [&](int k) { return owner_[k] >= 0 && owner_[k] <= i; }));
      }
  }
  return d;
}

BiquotientSpec::BiquotientSpec(AlgebraPtr alg, Mat uIn, Mat wIn)
    : algebra(std::move(alg)), u(std::move(uIn)), w(std::move(wIn)) {
  if (!algebra) throw std::invalid_argument("BiquotientSpec: null algebra");
  if (u.rows() != algebra->dim() || w.rows() != algebra->dim() || u.cols() != w.cols())
    throw DimensionError("BiquotientSpec: pair matrices must be dim x k with equal k");
  centerBasis = center_basis(*algebra);
}

double BiquotientSpec::closureResidual() const {
  const int n = algebra->dim();
  const int k = hdim();
  if (k == 0) return 0;
  Mat stacked(2 * n, k);
  stacked << u, w;
  Mat basis = orthonormal_span(stacked);
  double worst = 0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      Vec v(2 * n);
      v << algebra->bracket(u.col(a), u.col(b)), algebra->bracket(w.col(a), w.col(b));
      Vec r = v - basis * (basis.transpose() * v);
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
  return worst;
}

LieAlgebra algebra_from_json(const nlohmann::json& j) {
  const int dim = j.at("dim").get<int>();
  std::vector<double> c = j.at("c").get<std::vector<double>>();
  return LieAlgebra(j.value("name", std::string("unnamed")), dim, std::move(c));
}

nlohmann::json algebra_to_json(const LieAlgebra& A, const std::vector<std::vector<int>>& blocks) {
  nlohmann::json j;
  j["name"] = A.name();
  j["dim"] = A.dim();
  j["c"] = A.constants();
  j["blocks"] = blocks;
  return j;
}

}  // namespace cohomlab
