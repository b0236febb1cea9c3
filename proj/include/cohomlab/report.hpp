#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cohomlab/lie_core.hpp"

namespace cohomlab {

struct SamplingPlan {
  int tCount = 64;
  int pairsPerT = 256;
  std::vector<double> cValues{0.0, 1.0, -1.0, 5.0, -5.0};
  double endpointMargin = 1e-6;  ///< relative to the interval length
  std::uint64_t seed = 42;
};

struct Witness {
  double t = 0, c = 0;
  Vec x, y;
};

struct CurvatureReport {
  std::string example;
  std::uint64_t seed = 0;
  long nSamples = 0;
  double minSec = 0;
  Witness minSecWitness;
  std::optional<double> minRicciBound;
  std::string slackHistogramCsvPath;

  std::optional<double> minSlack;
  long violations = 0;
  std::optional<double> diameter;
  std::optional<double> product;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// n points evenly spread over [a, b] with both ends pulled in by
/// margin * (b - a).
std::vector<double> interior_grid(double a, double b, int n, double margin = 1e-6);

/// Geometric sequence of n points from start to end inclusive.
std::vector<double> log_space(double start, double end, int n);

/// Deterministic generator for sample index i under a run seed.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index);

/// Q-unit vector supported on the given basis indices.
Vec random_unit(std::mt19937_64& rng, int dim, const std::vector<int>& support);

/// Ordinary least squares slope of y on x; residual is the RMS misfit.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y,
                 double* residual = nullptr);

nlohmann::json vec_json(const Vec& v);

}  // namespace cohomlab
