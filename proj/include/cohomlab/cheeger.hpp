#pragma once

#include <string>
#include <vector>

#include "cohomlab/cohom1_metric.hpp"
#include "cohomlab/curvature_oracle.hpp"
#include "cohomlab/report.hpp"

namespace cohomlab {

/// delta phi / (phi + delta).
double cheeger_deform(double phi, double delta);
std::vector<double> cheeger_deform(const std::vector<double>& phi, double delta);

/// Left-invariant metric c_i Q on m_i for a chain m_0 < m_0 + m_1 < ... < g.
class ChainMetric {
 public:
  ChainMetric(BlockDecomposition chain, std::vector<double> c);

  const BlockDecomposition& decomposition() const { return chain_; }
  const std::vector<double>& weights() const { return c_; }
  bool nondecreasing() const;
  LeftInvariantMetric metric() const;

 private:
  BlockDecomposition chain_;
  std::vector<double> c_;
};

/// Minimum sampled sectional curvature over nPlanes seeded Q-unit pairs.
CurvatureReport chain_metric_curvature_scan(const ChainMetric& m, int nPlanes,
                                            std::uint64_t seed, const std::string& example = "");

/// Chain with submersion constants rho (one per block, rho_0 >= rho_1 >= ...)
/// and target scale mu in (0, rho_last).
struct SphereChainData {
  BlockDecomposition chain;
  std::vector<double> rho;
  double mu;
};

ChainMetric sphere_chain_constants(const SphereChainData& s);

/// Diagonal metric with f_i^2 = lambda mu rho_i / (lambda rho_i + (1 - lambda) mu)
/// on blocks 1..r, over (a, b). lambda is the coefficient of g_0 on the orbits,
/// i.e. the square of the warping function. t0 is the declared point with lambda(t0) = 1.
Cohom1Metric ball_profile(const SphereChainData& s, ProfilePtr lambda, double a, double b,
                          double t0);

/// 4 sin^2(t/2) = 2 - 2 cos t on (0, pi), from the round metric dt^2 + (2 sin(t/2))^2 g_0.
ProfilePtr default_ball_lambda();

/// Blockwise deformation of every profile: f^2 -> delta f^2 / (f^2 + delta).
Cohom1Metric cheeger_deformed(const Cohom1Metric& M, double delta);

/// Sampled minimum of the normalized sectional curvature of a diagonal metric.
CurvatureReport sample_min_sec(const Cohom1Metric& M, const SamplingPlan& plan,
                               const std::string& example = "");

/// Interval length plus pi * max_t max_i f_i(t) kappa_i.
double diameter_proxy(const Cohom1Metric& M, const std::vector<double>& kappa, int gridPoints = 257);

/// One report per delta with diameter and min sec * diam^2 filled in.
std::vector<CurvatureReport> cheeger_family_scan(const Cohom1Metric& M,
                                                 const std::vector<double>& deltas,
                                                 const SamplingPlan& plan,
                                                 const std::vector<double>& kappa,
                                                 const std::string& example = "");

/// True when min sec * diam^2 is nondecreasing as delta decreases (reports ordered by extra["delta"]).
bool product_trend_nondecreasing(const std::vector<CurvatureReport>& reports, double tol = 0.0);

}  // namespace cohomlab
