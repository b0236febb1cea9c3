#include "cohomlab/catalog.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace cohomlab {

namespace {

using Blocks = std::vector<std::vector<int>>;

int levi(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((i + 1) % 3 == j) ? 1 : -1;
}

ProfilePtr sine(double amplitude, double frequency, double phase, double offset, double a,
                double b) {
  return make_profile(WarpProfile::single(form::Sine{amplitude, frequency, phase, offset}, a, b));
}

Mat unit_columns(int dim, const std::vector<std::vector<double>>& cols) {
  Mat l(dim, static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (static_cast<int>(cols[j].size()) != dim) throw DimensionError("scenario: l vector size");
    for (int i = 0; i < dim; ++i) l(i, static_cast<int>(j)) = cols[j][i];
    l.col(static_cast<int>(j)).normalize();
  }
  return l;
}

struct Recipe {
  std::string name, description;
  LieAlgebra algebra;
  Blocks blocks;
  std::vector<std::vector<double>> l;
  std::vector<double> rho;
  double mu;
  nlohmann::json metadata = nlohmann::json::object();
};

Scenario build(Recipe r) {
  const AlgebraDiagnostics ad = check_algebra(r.algebra);
  if (!ad.pass()) throw std::runtime_error("scenario " + r.name + ": algebra fails its checks");
  auto alg = std::make_shared<const LieAlgebra>(std::move(r.algebra));
  if (r.blocks.size() != 3) throw DimensionError("scenario: blocks h, m1, m2 expected");
  BlockDecomposition d(alg, r.blocks, {true, true, true});
  std::vector<bool> cover(alg->dim(), false);
  for (const auto& b : r.blocks)
    for (int j : b) cover[j] = true;
  for (bool c : cover)
    if (!c) throw std::invalid_argument("scenario " + r.name + ": blocks must cover g");
  if (!d.check().pass()) throw std::runtime_error("scenario " + r.name + ": decomposition fails its checks");

  const int dim = alg->dim();
  Scenario s(r.name, r.description, alg, d, unit_columns(dim, r.l));
  s.demoProfiles = {sine(0.2, 1.0, 0.0, 0.6, s.a, s.b), sine(0.15, 1.3, 0.4, 0.8, s.a, s.b)};
  s.demoTwoBlock = sine(0.2, 1.0, 0.0, 0.5, s.a, s.b);
  s.kappa = {1.0, 1.0};
  s.rho = r.rho.empty() ? std::vector<double>{1.0, 0.5, 0.4} : r.rho;
  s.mu = r.mu;
  s.deltas = log_space(1e-8, 1e-2, 7);
  s.semisimple = center_basis(*alg).cols() == 0;
  s.metadata = std::move(r.metadata);
  s.quotient = s.context(32, 42);
  s.C = std::max(s.quotientDimension(), 9);
  return s;
}

Recipe recipe(const std::string& name) {
  if (name == "su2-berger")
    return {name, "su(2) with u(1) as the first block; Berger spheres", su2_algebra(),
            {{}, {0}, {1, 2}}, {}, {0.251, 0.251, 0.25}, 0.2};
  if (name == "so3-sphere")
    return {name, "so(2) in so(3); the round 2-sphere slice", so_algebra(3),
            {{0}, {1, 2}, {}}, {}, {1.0, 0.5, 0.5}, 0.25};
  if (name == "so4-stiefel") {
    const int n = 4;
    const int e01 = so_index(n, 0, 1), e23 = so_index(n, 2, 3);
    std::vector<double> j(6, 0.0);
    j[e01] = j[e23] = 1;
    return {name, "so(2) < so(3) < so(4), two blocks, Hopf circle as L", so_algebra(4),
            {{e01}, {so_index(n, 0, 2), so_index(n, 1, 2)},
             {so_index(n, 0, 3), so_index(n, 1, 3), e23}},
            {j}, {1.0, 0.5, 0.4}, 0.25};
  }
  if (name == "so5-two-block") {
    const int n = 5;
    Blocks b(3);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) b[0].push_back(so_index(n, i, j));
    for (int i = 0; i < 3; ++i) b[1].push_back(so_index(n, i, 3));
    for (int i = 0; i < 4; ++i) b[2].push_back(so_index(n, i, 4));
    return {name, "so(3) < so(4) < so(5), two blocks", so_algebra(5), b, {}, {1.0, 0.5, 0.4},
            0.25};
  }
  if (name == "torus2-flat")
    return {name, "abelian T^2 with a circle L; has a flat direction", abelian_algebra(2),
            {{}, {0}, {1}}, {{1.0, 0.0}}, {1.0, 0.5, 0.4}, 0.25};
  if (name == "son-circle") {
    const int n = 4;
    LieAlgebra g = direct_sum(so_algebra(n), abelian_algebra(1), "so(4)+R");
    std::vector<double> j(7, 0.0);
    j[so_index(n, 0, 1)] = j[so_index(n, 2, 3)] = 1;
    nlohmann::json meta = {{"group", "so(2m) + R, m = 2"},
                           {"L", "center circle of u(2), one-sided"},
                           {"nonprincipalCodimensions", "2 and n-1"},
                           {"isotropy", "not modeled; supply a scenario file"}};
    return {name, "so(4) + R with the center circle of u(2) as L", std::move(g),
            {{so_index(n, 2, 3)}, {so_index(n, 1, 2), so_index(n, 1, 3)},
             {so_index(n, 0, 1), so_index(n, 0, 2), so_index(n, 0, 3), 6}},
            {j}, {1.0, 0.5, 0.4}, 0.25, meta};
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

}  // namespace

int so_index(int n, int i, int j) {
  if (!(0 <= i && i < j && j < n)) throw std::invalid_argument("so_index: need 0 <= i < j < n");
  // Pairs before row i, then the offset within row i.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

LieAlgebra so_algebra(int n) {
  if (n < 2) throw std::invalid_argument("so_algebra: n >= 2");
  const int d = n * (n - 1) / 2;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  auto delta = [](int a, int b) { return a == b ? 1 : 0; };
  // [E_ij, E_kl] = d_jk E_il - d_ik E_jl - d_jl E_ik + d_il E_jk, with E_ba = -E_ab.
  auto add = [&](std::vector<int>& out, int coef, int a, int b) {
    if (coef == 0 || a == b) return;
    if (a < b)
      out[so_index(n, a, b)] += coef;
    else
      out[so_index(n, b, a)] -= coef;
  };
  std::vector<double> c(static_cast<std::size_t>(d) * d * d, 0.0);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      const auto [i, j] = pairs[x];
      const auto [k, l] = pairs[y];
      std::vector<int> out(d, 0);
      add(out, delta(j, k), i, l);
      add(out, -delta(i, k), j, l);
      add(out, -delta(j, l), i, k);
      add(out, delta(i, l), j, k);
      for (int z = 0; z < d; ++z) c[(static_cast<std::size_t>(x) * d + y) * d + z] = out[z];
    }
  return LieAlgebra("so(" + std::to_string(n) + ")", d, std::move(c));
}

LieAlgebra su2_algebra() {
  std::vector<double> c(27, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[(i * 3 + j) * 3 + k] = levi(i, j, k);
  return LieAlgebra("su(2)", 3, std::move(c));
}

LieAlgebra abelian_algebra(int n) {
  return LieAlgebra("R^" + std::to_string(n), n,
                    std::vector<double>(static_cast<std::size_t>(n) * n * n, 0.0));
}

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b, std::string name) {
  const int na = a.dim(), nb = b.dim(), n = na + nb;
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  auto at = [&](int i, int j, int k) -> double& {
    return c[(static_cast<std::size_t>(i) * n + j) * n + k];
  };
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < na; ++k) at(i, j, k) = a.c(i, j, k);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      for (int k = 0; k < nb; ++k) at(na + i, na + j, na + k) = b.c(i, j, k);
  return LieAlgebra(std::move(name), n, std::move(c));
}

Cohom1Metric Scenario::demoMetric() const { return Cohom1Metric(decomposition, a, b, demoProfiles); }

Cohom1Metric Scenario::twoBlockMetric() const {
  return Cohom1Metric::two_block(decomposition, demoTwoBlock, a, b);
}

SphereChainData Scenario::chain() const { return {decomposition, rho, mu}; }

QuotientContext Scenario::context(int count, std::uint64_t seed) const {
  return QuotientContext::one_sided(algebra, l, decomposition.block(0),
                                    sample_group_points(algebra->dim(), count, seed));
}

int Scenario::quotientDimension() const {
  return 1 + static_cast<int>(decomposition.block(1).size() + decomposition.block(2).size()) -
         static_cast<int>(l.cols());
}

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  for (const char* n :
       {"su2-berger", "so3-sphere", "so4-stiefel", "so5-two-block", "torus2-flat", "son-circle"}) {
    Recipe r = recipe(n);
    out.push_back({r.name, r.description});
  }
  return out;
}

Scenario load_scenario(const std::string& name) { return build(recipe(name)); }

Scenario scenario_from_json(const nlohmann::json& j) {
  nlohmann::json alg = j;
  nlohmann::json c = nlohmann::json::array();
  for (const auto& v : j.at("c")) {
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      char* end = nullptr;
      const double x = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') throw std::invalid_argument("scenario: bad constant " + s);
      c.push_back(x);
    } else {
      c.push_back(v.get<double>());
    }
  }
  alg["c"] = c;
  Recipe r{j.value("name", std::string("custom")), j.value("description", std::string("user scenario")),
           algebra_from_json(alg), j.at("blocks").get<Blocks>(),
           j.value("l", std::vector<std::vector<double>>{}), j.value("rho", std::vector<double>{}),
           j.value("mu", 0.25), j.value("metadata", nlohmann::json::object())};
  Scenario s = build(std::move(r));
  if (j.contains("kappa")) s.kappa = j.at("kappa").get<std::vector<double>>();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  nlohmann::json j;
  in >> j;
  return scenario_from_json(j);
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j = algebra_to_json(*s.algebra, s.decomposition.blocks());
  j["name"] = s.name;
  j["description"] = s.description;
  nlohmann::json l = nlohmann::json::array();
  for (int c = 0; c < s.l.cols(); ++c) l.push_back(vec_json(s.l.col(c)));
  j["l"] = l;
  j["kappa"] = s.kappa;
  j["rho"] = s.rho;
  j["mu"] = s.mu;
  j["metadata"] = s.metadata;
  return j;
}

}  // namespace cohomlab
