#include "cohomlab/report.hpp"

#include <cmath>
#include <stdexcept>

namespace cohomlab {

nlohmann::json vec_json(const Vec& v) {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

nlohmann::json CurvatureReport::to_json() const {
  nlohmann::json j;
  j["example"] = example;
  j["seed"] = seed;
  j["nSamples"] = nSamples;
  j["minSec"] = minSec;
  j["minSecWitness"] = {{"t", minSecWitness.t},
                        {"c", minSecWitness.c},
                        {"x", vec_json(minSecWitness.x)},
                        {"y", vec_json(minSecWitness.y)}};
  j["minRicciBound"] = minRicciBound ? nlohmann::json(*minRicciBound) : nlohmann::json();
  j["slackHistogramCsvPath"] = slackHistogramCsvPath;
  if (minSlack) j["minSlack"] = *minSlack;
  j["violations"] = violations;
  if (diameter) j["diameter"] = *diameter;
  if (product) j["product"] = *product;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

std::vector<double> interior_grid(double a, double b, int n, double margin) {
  if (n <= 0) return {};
  const double lo = a + margin * (b - a);
  const double hi = b - margin * (b - a);
  if (n == 1) return {0.5 * (lo + hi)};
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

std::vector<double> log_space(double start, double end, int n) {
  if (!(start > 0 && end > 0) || n < 1) throw std::invalid_argument("log_space: bad range");
  if (n == 1) return {start};
  std::vector<double> out(n);
  const double l0 = std::log10(start), l1 = std::log10(end);
  for (int i = 0; i < n; ++i) out[i] = std::pow(10.0, l0 + (l1 - l0) * i / (n - 1));
  out.front() = start;
  out.back() = end;
  return out;
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Vec random_unit(std::mt19937_64& rng, int dim, const std::vector<int>& support) {
  std::normal_distribution<double> normal;
  Vec v = Vec::Zero(dim);
  if (support.empty()) return v;
  double n2 = 0;
  while (n2 < 1e-20) {
    for (int j : support) v[j] = normal(rng);
    n2 = v.squaredNorm();
  }
  return v / std::sqrt(n2);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y, double* residual) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_slope: need >= 2 points");
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  if (residual) {
    double r = 0;
    for (size_t i = 0; i < n; ++i) {
      const double e = y[i] - (my + slope * (x[i] - mx));
      r += e * e;
    }
    *residual = std::sqrt(r / n);
  }
  return slope;
}

}  // namespace cohomlab
