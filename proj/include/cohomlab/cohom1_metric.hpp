#pragma once

#include <vector>

#include "cohomlab/lie_core.hpp"
#include "cohomlab/warp_profile.hpp"

namespace cohomlab {

/// phi, phi', phi'' on each block at one t. Entry 0 is h (phi = 1).
struct BlockJets {
  std::vector<double> phi, phidot, phiddot;
};

/// dt^2 + sum_i f_i(t)^2 Q|m_i on (a, b).
class Cohom1Metric {
 public:
  Cohom1Metric(BlockDecomposition decomposition, double a, double b,
               std::vector<ProfilePtr> profiles);

  /// Two blocks with f_2 == 1.
  static Cohom1Metric two_block(BlockDecomposition decomposition, ProfilePtr f, double a,
                                double b);

  const BlockDecomposition& decomposition() const { return decomposition_; }
  const LieAlgebra& algebra() const { return decomposition_.algebra(); }
  double a() const { return a_; }
  double b() const { return b_; }
  const std::vector<ProfilePtr>& profiles() const { return profiles_; }
  const WarpProfile& profile(int block) const { return *profiles_.at(block - 1); }
  bool twoBlockNormalized() const { return twoBlock_; }

  BlockJets jets(double t) const;
  /// Per-basis-index diagonal of phi (1 on h and unused indices).
  Vec phiDiag(const std::vector<double>& perBlock) const;

  /// g(u, v) on m at t.
  double inner(double t, const Vec& u, const Vec& v) const;

  /// Unnormalized denominator |c d_t + x|^2 |y|^2 - <c d_t + x, y>^2.
  double planeArea(double t, double c, const Vec& x, const Vec& y) const;

  void requireInterior(double t) const;

 private:
  BlockDecomposition decomposition_;
  double a_, b_;
  std::vector<ProfilePtr> profiles_;
  bool twoBlock_ = false;
};

}  // namespace cohomlab
