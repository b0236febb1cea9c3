#pragma once

#include <Eigen/Dense>
#include <memory>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace cohomlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Compact Lie algebra given by structure constants in a Q-orthonormal basis:
/// [e_i, e_j] = sum_k c(i,j,k) e_k.
class LieAlgebra {
 public:
  LieAlgebra(std::string name, int dim, std::vector<double> c);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  double c(int i, int j, int k) const { return c_[(i * dim_ + j) * dim_ + k]; }
  const std::vector<double>& constants() const { return c_; }

  Vec bracket(const Vec& x, const Vec& y) const;
  /// Matrix of ad_x, so that ad(x) * y == bracket(x, y).
  Mat ad(const Vec& x) const;
  Vec basis(int i) const;

 private:
  std::string name_;
  int dim_;
  std::vector<double> c_;
};

using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

struct AlgebraDiagnostics {
  double jacobi = 0;
  double antisymmetry = 0;
  double biinvariance = 0;
  bool pass(double tol = 1e-12) const {
    return jacobi < tol && antisymmetry < tol && biinvariance < tol;
  }
};

AlgebraDiagnostics check_algebra(const LieAlgebra& A);

/// exp(ad_x), i.e. Ad_{exp x} in the orthonormal basis.
Mat adjoint_exp(const LieAlgebra& A, const Vec& x);

/// Orthonormal basis of ker M (as columns); singular values below
/// tol * sigma_max count as zero.
Mat nullspace(const Mat& M, double tol = 1e-9);

/// Orthonormal basis (columns) of the span of the given columns.
Mat orthonormal_span(const Mat& columns, double tol = 1e-9);

/// Basis of the center z(g) as columns.
Mat center_basis(const LieAlgebra& A);

struct DecompositionDiagnostics {
  double hClosure = 0;
  double invariance = 0;
  double prefixClosure = 0;
  bool pass(double tol = 1e-12) const {
    return hClosure < tol && invariance < tol && prefixClosure < tol;
  }
};

/// Ordered orthogonal blocks of basis indices. Block 0 is h, blocks 1..k are
/// m_1..m_k. prefixFlags[i] claims that m_0 + ... + m_i is a subalgebra.
class BlockDecomposition {
 public:
  BlockDecomposition(AlgebraPtr algebra, std::vector<std::vector<int>> blocks,
                     std::vector<bool> prefixFlags = {});

  const LieAlgebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebraPtr() const { return algebra_; }
  int dim() const { return algebra_->dim(); }
  int numBlocks() const { return static_cast<int>(blocks_.size()); }
  const std::vector<int>& block(int i) const { return blocks_.at(i); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<bool>& prefixFlags() const { return flags_; }

  /// Block index of basis vector j, or -1 if unused.
  int blockOf(int j) const { return owner_[j]; }

  Vec project(const Vec& x, int blockIndex) const;
  Vec projectH(const Vec& x) const { return project(x, 0); }
  Vec projectM(const Vec& x) const;
  /// Projection onto m_0 + ... + m_i.
  Vec projectPrefix(const Vec& x, int i) const;
  /// Largest absolute h-component (or unused-index component).
  double offMNorm(const Vec& x) const;

  DecompositionDiagnostics check() const;

 private:
  AlgebraPtr algebra_;
  std::vector<std::vector<int>> blocks_;
  std::vector<bool> flags_;
  std::vector<int> owner_;
};

/// Subalgebra h of g + g given by pairs (u_a, w_a), acting by
/// (h1, h2).g = h1 g h2^{-1}.
struct BiquotientSpec {
  AlgebraPtr algebra;
  Mat u;  ///< columns u_a
  Mat w;  ///< columns w_a
  Mat centerBasis;

  BiquotientSpec(AlgebraPtr algebra, Mat u, Mat w);
  int hdim() const { return static_cast<int>(u.cols()); }
  double closureResidual() const;
};

LieAlgebra algebra_from_json(const nlohmann::json& j);
nlohmann::json algebra_to_json(const LieAlgebra& A,
                               const std::vector<std::vector<int>>& blocks = {});

}  // namespace cohomlab
