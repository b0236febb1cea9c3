#include "cohomlab/curvature_oracle.hpp"

#include <cmath>

namespace cohomlab {

LeftInvariantMetric::LeftInvariantMetric(AlgebraPtr algebra, Mat P)
    : algebra_(std::move(algebra)), P_(std::move(P)) {
  const int n = algebra_->dim();
  if (P_.rows() != n || P_.cols() != n) throw DimensionError("LeftInvariantMetric: P size");
  if ((P_ - P_.transpose()).cwiseAbs().maxCoeff() > 1e-14)
    throw std::invalid_argument("LeftInvariantMetric: P not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> eig(P_, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0))
    throw std::invalid_argument("LeftInvariantMetric: P not positive definite");
  ldlt_.compute(P_);
}

Vec koszul_connection(const LeftInvariantMetric& m, const Vec& x, const Vec& y) {
  const LieAlgebra& A = m.algebra();
  if (x.size() != A.dim() || y.size() != A.dim()) throw DimensionError("koszul_connection");
  const Mat& P = m.P();
  // Coefficient vector of z -> 2<nabla_x y, z>.
  const Vec b = P * A.bracket(x, y) - A.ad(y).transpose() * (P * x) -
                A.ad(x).transpose() * (P * y);
  return m.solve(0.5 * b);
}

double left_invariant_curvature(const LeftInvariantMetric& m, const Vec& x, const Vec& y) {
  const LieAlgebra& A = m.algebra();
  const Vec nyy = koszul_connection(m, y, y);
  const Vec nxy = koszul_connection(m, x, y);
  const Vec v = koszul_connection(m, x, nyy) - koszul_connection(m, y, nxy) -
                koszul_connection(m, A.bracket(x, y), y);
  return m.inner(v, x);
}

namespace {

void require_in_m(const BlockDecomposition& d, const Vec& x, const char* what) {
  if (x.size() != d.dim()) throw DimensionError(what);
  if (d.offMNorm(x) > 1e-12 * std::max(1.0, x.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(std::string(what) + ": vector has a component outside m");
}

Vec diag_from_blocks(const BlockDecomposition& d, const std::vector<double>& phi) {
  if (static_cast<int>(phi.size()) != d.numBlocks())
    throw DimensionError("phi must have one entry per block");
  Vec w = Vec::Ones(d.dim());
  for (int i = 1; i < d.numBlocks(); ++i) {
    if (!(phi[i] > 0) || !std::isfinite(phi[i]))
      throw std::invalid_argument("phi entries must be finite and positive");
    for (int j : d.block(i)) w[j] = phi[i];
  }
  return w;
}

}  // namespace

double homogeneous_curvature(const BlockDecomposition& d, const std::vector<double>& phi,
                             const Vec& x, const Vec& y) {
  require_in_m(d, x, "homogeneous_curvature");
  require_in_m(d, y, "homogeneous_curvature");
  const Vec w = diag_from_blocks(d, phi);
  LeftInvariantMetric g(d.algebraPtr(), w.asDiagonal().toDenseMatrix());
  const Vec bh = d.projectH(d.algebra().bracket(x, y));
  return left_invariant_curvature(g, x, y) + 0.75 * bh.squaredNorm();
}

Vec nomizu_map(const BlockDecomposition& d, const Vec& w, const Vec& x, const Vec& y) {
  const LieAlgebra& A = d.algebra();
  const Vec wx = w.cwiseProduct(d.projectM(x));
  const Vec wy = w.cwiseProduct(d.projectM(y));
  // 2 <U(x,y), z> = <[z,x]_m, y> + <x, [z,y]_m>, <u,v> = Q(w u, v).
  Vec u = -0.5 * (A.ad(x).transpose() * wy + A.ad(y).transpose() * wx);
  u = d.projectM(u).cwiseQuotient(w);
  return 0.5 * d.projectM(A.bracket(x, y)) + u;
}

double gauss_codazzi_curvature(const Cohom1Metric& M, double t, double c, const Vec& x,
                               const Vec& y) {
  M.requireInterior(t);
  const BlockDecomposition& d = M.decomposition();
  require_in_m(d, x, "gauss_codazzi_curvature");
  require_in_m(d, y, "gauss_codazzi_curvature");
  const BlockJets J = M.jets(t);
  const Vec w = M.phiDiag(J.phi);
  const Vec wd = d.projectM(M.phiDiag(J.phidot));
  const Vec wdd = d.projectM(M.phiDiag(J.phiddot));

  const double slice = homogeneous_curvature(d, J.phi, x, y);

  // Second fundamental form of the slice is 1/2 phi'; Gauss equation.
  const double gauss =
      -0.25 * (x.dot(wd.cwiseProduct(x)) * y.dot(wd.cwiseProduct(y)) -
               std::pow(x.dot(wd.cwiseProduct(y)), 2));

  // Codazzi: shape operator L = 1/2 phi^{-1} phi', (nabla_a L) v.
  auto L = [&](const Vec& v) -> Vec { return 0.5 * wd.cwiseQuotient(w).cwiseProduct(v); };
  auto dL = [&](const Vec& a, const Vec& v) -> Vec {
    return nomizu_map(d, w, a, L(v)) - L(nomizu_map(d, w, a, v));
  };
  const Vec cod = dL(x, y) - dL(y, x);
  const double codazzi = -2.0 * c * cod.dot(w.cwiseProduct(y));

  // Radial Riccati term.
  const Vec rad = 2.0 * wdd - wd.cwiseProduct(wd).cwiseQuotient(w);
  const double radial = -0.25 * c * c * y.dot(rad.cwiseProduct(y));

  return slice + gauss + codazzi + radial;
}

}  // namespace cohomlab
