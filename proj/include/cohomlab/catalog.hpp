#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cohomlab/cheeger.hpp"
#include "cohomlab/cohom1_metric.hpp"
#include "cohomlab/lie_core.hpp"
#include "cohomlab/quotients.hpp"
#include "cohomlab/report.hpp"

namespace cohomlab {

/// so(n) in the basis E_ij (i < j, lexicographic), orthonormal for -1/2 tr.
LieAlgebra so_algebra(int n);
/// su(2) with [e_i, e_j] = eps_ijk e_k.
LieAlgebra su2_algebra();
LieAlgebra abelian_algebra(int n);
LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b, std::string name);

/// Basis index of E_ij in so_algebra(n).
int so_index(int n, int i, int j);

struct Scenario {
  Scenario(std::string name, std::string description, AlgebraPtr algebra,
           BlockDecomposition decomposition, Mat l)
      : name(std::move(name)),
        description(std::move(description)),
        algebra(std::move(algebra)),
        decomposition(std::move(decomposition)),
        l(std::move(l)) {}

  std::string name;
  std::string description;
  AlgebraPtr algebra;
  /// Blocks h, m_1, m_2 with k = h + m_1 a subalgebra.
  BlockDecomposition decomposition;
  /// One-sided L as columns; may have zero columns.
  Mat l;
  std::optional<QuotientContext> quotient;

  /// Demo warps for the general formula (one per m-block) on (a, b).
  std::vector<ProfilePtr> demoProfiles;
  /// Demo warp f <= 1 for the two-block formula.
  ProfilePtr demoTwoBlock;
  double a = 0.2, b = 2.2;

  std::vector<double> kappa;  ///< slice scale per m-block, for diameters
  std::vector<double> rho;    ///< submersion constants per block of the chain
  double mu = 0.2;

  SamplingPlan plan;
  std::vector<double> deltas;
  double c0 = 1.0;
  int C = 9;
  bool semisimple = false;
  nlohmann::json metadata = nlohmann::json::object();

  Cohom1Metric demoMetric() const;
  Cohom1Metric twoBlockMetric() const;
  SphereChainData chain() const;
  /// Quotient context with freshly seeded sample points.
  QuotientContext context(int count, std::uint64_t seed) const;
  /// dim N = 1 + dim m - dim l, and C = max(dim N, 9).
  int quotientDimension() const;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

std::vector<ScenarioInfo> list_scenarios();
Scenario load_scenario(const std::string& name);

/// Scenario from a JSON file: the lie_core algebra format (name, dim, c, blocks)
/// plus optional l, kappa, rho, mu, description. Entries of c may be decimal strings.
Scenario load_scenario_file(const std::string& path);
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

}  // namespace cohomlab
