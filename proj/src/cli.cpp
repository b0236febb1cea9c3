#include "cohomlab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "cohomlab/catalog.hpp"
#include "cohomlab/cheeger.hpp"
#include "cohomlab/cohom1.hpp"
#include "cohomlab/curvature_oracle.hpp"
#include "cohomlab/parallel.hpp"
#include "cohomlab/profile_builder.hpp"
#include "cohomlab/quotients.hpp"

namespace cohomlab {

namespace {

using nlohmann::json;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string csv_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Scenario scenario_for(const RunConfig& c, const std::string& fallback) {
  if (!c.scenarioFile.empty()) return load_scenario_file(c.scenarioFile);
  const std::string name = c.scenario.empty() ? fallback : c.scenario;
  for (const auto& info : list_scenarios())
    if (info.name == name) return load_scenario(name);
  throw UsageError("unknown scenario: " + name);
}

std::vector<int> m_support(const BlockDecomposition& d) {
  std::vector<int> s;
  for (int i = 1; i < d.numBlocks(); ++i) s.insert(s.end(), d.block(i).begin(), d.block(i).end());
  return s;
}

json witness_json(const Witness& w) {
  return {{"t", w.t}, {"c", w.c}, {"x", vec_json(w.x)}, {"y", vec_json(w.y)}};
}

// ---- verify-curvature ----

RunResult verify_curvature(const RunConfig& cfg) {
  const Scenario s = scenario_for(cfg, "so4-stiefel");
  const long n = cfg.samples.value_or(10000);
  const double tol = cfg.tol.value_or(1e-8);
  const double tolTwo = 1e-10;
  const Cohom1Metric general = s.demoMetric();
  const Cohom1Metric two = s.twoBlockMetric();
  const std::vector<int> support = m_support(s.decomposition);
  const int dim = s.algebra->dim();
  const double lo = s.a + 1e-6 * (s.b - s.a), hi = s.b - 1e-6 * (s.b - s.a);

  constexpr long kChunk = 256;
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  struct Slot {
    double formula = 0, twoBlock = 0;
    Witness wf, wt;
  };
  std::vector<Slot> slots(chunks);
  parallel_for(chunks, [&](std::size_t ci) {
    Slot& slot = slots[ci];
    for (long i = static_cast<long>(ci) * kChunk; i < std::min(n, (static_cast<long>(ci) + 1) * kChunk); ++i) {
      auto rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(i));
      std::uniform_real_distribution<double> ut(lo, hi), uc(-5.0, 5.0);
      const double t = ut(rng), c = uc(rng);
      const Vec x = random_unit(rng, dim, support);
      const Vec y = random_unit(rng, dim, support);
      for (const Cohom1Metric* M : {&general, &two}) {
        const double g = curvature_general(*M, t, c, x, y);
        const double o = gauss_codazzi_curvature(*M, t, c, x, y);
        const double e = std::abs(g - o) / (1 + std::abs(o));
        if (e > slot.formula) {
          slot.formula = e;
          slot.wf = {t, c, x, y};
        }
      }
      const double g2 = curvature_general(two, t, c, x, y);
      const double tb = curvature_two_block(two, t, c, x, y);
      const double e2 = std::abs(tb - g2) / (1 + std::abs(g2));
      if (e2 > slot.twoBlock) {
        slot.twoBlock = e2;
        slot.wt = {t, c, x, y};
      }
    }
  });
  Slot worst;
  for (const Slot& sl : slots) {
    if (sl.formula > worst.formula) {
      worst.formula = sl.formula;
      worst.wf = sl.wf;
    }
    if (sl.twoBlock > worst.twoBlock) {
      worst.twoBlock = sl.twoBlock;
      worst.wt = sl.wt;
    }
  }
  const bool ok = worst.formula <= tol && worst.twoBlock <= tolTwo;
  RunResult r;
  r.exitCode = ok ? 0 : 2;
  r.report = {{"scenario", s.name},
              {"samples", n},
              {"maxFormulaDiscrepancy", worst.formula},
              {"formulaTolerance", tol},
              {"maxTwoBlockDiscrepancy", worst.twoBlock},
              {"twoBlockTolerance", tolTwo},
              {"formulaWitness", witness_json(worst.wf)},
              {"twoBlockWitness", witness_json(worst.wt)},
              {"pass", ok}};
  return r;
}

// ---- build-profile ----

RunResult build_profile(const RunConfig& cfg) {
  const double delta = cfg.delta.value_or(1e-6);
  const double c0 = cfg.c0.value_or(1.0);
  const int C = cfg.C.value_or(9);
  const int n = cfg.grid.value_or(2001);
  if (n < 2) throw UsageError("--grid must be at least 2");
  const BuiltDiscProfile p = build_disc_profile(delta, c0, C);
  const auto grid = interior_grid(1.0, p.R, n);
  const json inv = check_disc_profile(p, grid).to_json();
  std::vector<double> tail;
  for (double t : grid)
    if (t >= p.capStart) tail.push_back(t);
  const InequalityReport ineq = check_inequality(*p.f, C, tail);

  std::ostringstream csv;
  csv << "t,f,f_prime,f_double_prime,ineq_margin\n";
  for (double t : grid) {
    const Jet j = p.f->jet(t);
    csv << csv_num(t) << ',' << csv_num(j.v) << ',' << csv_num(j.d1) << ',' << csv_num(j.d2) << ','
        << csv_num(-j.v * j.d2 - C * j.d1 * j.d1) << '\n';
  }
  RunResult r;
  r.exitCode = inv.at("pass").get<bool>() ? 0 : 2;
  r.report = disc_profile_json(p);
  r.report["invariants"] = inv;
  r.report["inequalityOnCap"] = {{"maxViolation", ineq.maxViolation},
                                 {"maxConcavity", ineq.maxConcavity},
                                 {"signMismatches", ineq.signMismatches}};
  r.csv = csv.str();
  return r;
}

// ---- scaling ----

RunResult scaling(const RunConfig& cfg) {
  const Scenario s = scenario_for(cfg, "su2-berger");
  const std::vector<double> deltas =
      parse_deltas(cfg.deltas.empty() ? "1e-8:1e-2:logstep7" : cfg.deltas);
  if (deltas.size() < 2) throw UsageError("scaling needs at least two deltas");
  const double c0 = cfg.c0.value_or(s.c0);
  const int C = cfg.C.value_or(s.C);
  SamplingPlan plan;
  plan.seed = cfg.seed;
  plan.tCount = 32;
  plan.pairsPerT = static_cast<int>(cfg.samples.value_or(64));
  const QuotientContext ctx = s.context(4, cfg.seed);

  std::vector<double> ld, lr, lp;
  json rows = json::array();
  std::ostringstream csv;
  csv << "delta,R0,R,certified_min_sec,sampled_min_sec,diameter,product\n";
  for (double d : deltas) {
    const BuiltDiscProfile p = build_disc_profile(d, c0, C);
    const GlueInput in{p, s.decomposition};
    const GlueReport g = glue_check(in, in, ctx, plan, s.kappa, s.name, 2, 4);
    ld.push_back(std::log(d));
    lr.push_back(std::log(p.R));
    lp.push_back(std::log(std::abs(g.product)));
    rows.push_back({{"delta", d},
                    {"R0", p.R0},
                    {"R", p.R},
                    {"concaveFromR0", p.concaveFromR0()},
                    {"certifiedMinSec", g.certifiedMinSec},
                    {"sampledMinSec", g.report.minSec},
                    {"diameter", g.diameter},
                    {"product", g.product}});
    csv << csv_num(d) << ',' << csv_num(p.R0) << ',' << csv_num(p.R) << ','
        << csv_num(g.certifiedMinSec) << ',' << csv_num(g.report.minSec) << ','
        << csv_num(g.diameter) << ',' << csv_num(g.product) << '\n';
  }
  double resR = 0, resP = 0;
  const double slopeR = fit_slope(ld, lr, &resR);
  const double slopeP = fit_slope(ld, lp, &resP);
  const bool okR = slopeR >= -0.1867 && slopeR <= -0.1467;
  const bool okP = slopeP >= 0.62 && slopeP <= 0.72;
  RunResult r;
  r.exitCode = okR && okP ? 0 : 2;
  r.report = {{"scenario", s.name},
              {"c0", c0},
              {"C", C},
              {"rows", rows},
              {"slopeR", {{"value", slopeR}, {"residual", resR}, {"window", {-0.1867, -0.1467}}, {"pass", okR}}},
              {"slopeProduct", {{"value", slopeP}, {"residual", resP}, {"window", {0.62, 0.72}}, {"pass", okP}}}};
  r.csv = csv.str();
  return r;
}

// ---- biquotient ----

RunResult biquotient(const RunConfig& cfg) {
  const Scenario s = scenario_for(cfg, "torus2-flat");
  const QuotientContext ctx = s.context(32, cfg.seed);
  const QuotientContext dense = s.context(static_cast<int>(cfg.samples.value_or(200)), cfg.seed);
  RunResult r;
  int rank = -1;
  std::string rankError;
  try {
    rank = torus_rank(ctx);
  } catch (const std::runtime_error& e) {
    rankError = e.what();
  }
  const double rate = flat_free_rate(dense);

  const BuiltDiscProfile p = build_disc_profile(cfg.delta.value_or(1e-4), cfg.c0.value_or(s.c0),
                                                cfg.C.value_or(s.C));
  const Cohom1Metric M = Cohom1Metric::two_block(s.decomposition, p.f, 1.0, p.R);
  const PositiveSearch search =
      positive_point_search(M, ctx, interior_grid(1.0, p.R, cfg.grid.value_or(16)));
  json witness = nullptr;
  if (search.witness)
    witness = {{"t", search.witness->t},
               {"point", search.witness->point},
               {"minEigenvalue", search.witness->minEigenvalue}};

  bool ok = rankError.empty();
  if (s.semisimple) ok = ok && rank == 0 && search.witness.has_value();
  r.exitCode = ok ? 0 : 2;
  r.report = {{"scenario", s.name},
              {"semisimple", s.semisimple},
              {"torusRank", rank < 0 ? json(nullptr) : json(rank)},
              {"torusRankError", rankError.empty() ? json(nullptr) : json(rankError)},
              {"flatDirectionRate", 1.0 - rate},
              {"flatFreeRate", rate},
              {"densityProxyPass", rate >= 0.95},
              {"densitySamples", dense.samplePoints().size()},
              {"ricciPositiveWitness", witness},
              {"search",
               {{"pointsTried", search.pointsTried},
                {"flatFreePoints", search.flatFreePoints},
                {"tWithSlope", search.tWithSlope}}},
              {"metadata", s.metadata}};
  return r;
}

// ---- cheeger-demo ----

RunResult cheeger_demo(const RunConfig& cfg) {
  const Scenario s = scenario_for(cfg, "su2-berger");
  const ChainMetric chain = sphere_chain_constants(s.chain());
  const CurvatureReport chainScan = chain_metric_curvature_scan(
      chain, static_cast<int>(cfg.samples.value_or(10000)), cfg.seed, s.name);

  double identity = 0;
  for (double c0 : {0.5, 1.0, 2.0})
    for (double t : interior_grid(0.0, 10.0, 1000)) {
      const double f = c0 * t / std::sqrt(1 + c0 * c0 * t * t);
      identity = std::max(identity, std::abs(cheeger_deform(c0 * c0 * t * t, 1.0) - f * f));
    }

  const std::vector<double> deltas =
      parse_deltas(cfg.deltas.empty() ? "1e-2:1e2:logstep5" : cfg.deltas);
  SamplingPlan plan;
  plan.seed = cfg.seed;
  plan.tCount = cfg.grid.value_or(32);
  plan.pairsPerT = 64;
  const auto family = cheeger_family_scan(s.demoMetric(), deltas, plan, s.kappa, s.name);
  std::ostringstream csv;
  csv << "delta,min_sec,diam_est,product\n";
  json rows = json::array();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const CurvatureReport& f = family[i];
    csv << csv_num(deltas[i]) << ',' << csv_num(f.minSec) << ',' << csv_num(*f.diameter) << ','
        << csv_num(*f.product) << '\n';
    rows.push_back(f.to_json());
  }
  const bool ok = chainScan.minSec >= -1e-10 && identity <= 1e-15;
  RunResult r;
  r.exitCode = ok ? 0 : 2;
  r.report = {{"scenario", s.name},
              {"chainWeights", chain.weights()},
              {"chainScan", chainScan.to_json()},
              {"cheegerIdentityMaxError", identity},
              {"family", rows},
              {"productTrendNondecreasing", product_trend_nondecreasing(family)},
              {"pass", ok}};
  r.csv = csv.str();
  return r;
}

// ---- glue ----

RunResult glue(const RunConfig& cfg) {
  const Scenario s = scenario_for(cfg, "su2-berger");
  const double delta = cfg.delta.value_or(1e-4);
  const BuiltDiscProfile p =
      build_disc_profile(delta, cfg.c0.value_or(s.c0), cfg.C.value_or(s.C));
  const GlueInput in{p, s.decomposition};
  SamplingPlan plan;
  plan.seed = cfg.seed;
  plan.pairsPerT = static_cast<int>(cfg.samples.value_or(256));
  plan.tCount = cfg.grid.value_or(64);
  const GlueReport g = glue_check(in, in, s.context(8, cfg.seed), plan, s.kappa, s.name);
  const bool secOk = g.report.minSec >= -delta * (1 + 1e-6);
  const bool ricciOk = !g.report.minRicciBound || *g.report.minRicciBound >= -1e-10;
  const bool ok = secOk && ricciOk && g.boundaryMismatch < 1e-12;
  RunResult r;
  r.exitCode = ok ? 0 : 2;
  r.report = {{"scenario", s.name},
              {"delta", delta},
              {"R", p.R},
              {"report", g.report.to_json()},
              {"boundaryMismatch", g.boundaryMismatch},
              {"certifiedMinSec", g.certifiedMinSec},
              {"diameter", g.diameter},
              {"product", g.product},
              {"minSecPass", secOk},
              {"ricciPass", ricciOk}};
  return r;
}

std::string default_csv_path(const RunConfig& c) {
  if (!c.csvPath.empty()) return c.csvPath;
  if (c.outPath.empty()) return "";
  const auto dot = c.outPath.rfind('.');
  const auto slash = c.outPath.rfind('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    return c.outPath.substr(0, dot) + ".csv";
  return c.outPath + ".csv";
}

}  // namespace

json RunConfig::to_json() const {
  json d = nullptr;
  if (!deltas.empty()) d = {{"spec", deltas}, {"values", parse_deltas(deltas)}};
  return {{"command", command},   {"scenario", scenario},     {"scenarioFile", scenarioFile},
          {"seed", seed},         {"samples", opt_json(samples)}, {"tol", opt_json(tol)},
          {"out", outPath},       {"csv", csvPath},           {"deltas", d},
          {"grid", opt_json(grid)}, {"c0", opt_json(c0)},     {"C", opt_json(C)},
          {"delta", opt_json(delta)}};
}

std::vector<double> parse_deltas(const std::string& spec) {
  std::vector<double> out;
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("bad number in delta spec: " + s);
    }
    if (used != s.size() || !(v > 0)) throw UsageError("bad delta: " + s);
    return v;
  };
  const auto first = spec.find(':');
  if (first != std::string::npos) {
    const auto second = spec.find(':', first + 1);
    if (second == std::string::npos) throw UsageError("range spec is start:end:logstepN");
    const std::string step = spec.substr(second + 1);
    if (step.rfind("logstep", 0) != 0) throw UsageError("range spec is start:end:logstepN");
    int n = 0;
    try {
      n = std::stoi(step.substr(7));
    } catch (const std::exception&) {
      throw UsageError("bad point count in " + spec);
    }
    if (n < 1) throw UsageError("logstep needs at least one point");
    const double a = num(spec.substr(0, first)), b = num(spec.substr(first + 1, second - first - 1));
    if (n == 1) return {a};
    return log_space(a, b, n);
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(num(item));
  if (out.empty()) throw UsageError("empty delta list");
  return out;
}

RunResult run(const RunConfig& config) {
  RunResult r;
  if (config.command == "verify-curvature")
    r = verify_curvature(config);
  else if (config.command == "build-profile")
    r = build_profile(config);
  else if (config.command == "scaling")
    r = scaling(config);
  else if (config.command == "biquotient")
    r = biquotient(config);
  else if (config.command == "cheeger-demo")
    r = cheeger_demo(config);
  else if (config.command == "glue")
    r = glue(config);
  else
    throw UsageError("unknown command: " + config.command);
  json out = {{"version", kVersion},
              {"command", config.command},
              {"config", config.to_json()},
              {"results", r.report}};
  r.report = std::move(out);
  return r;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Curvature experiments on cohomogeneity one metrics and their quotients"};
  app.require_subcommand(0, 1);
  RunConfig cfg;
  bool list = false;
  app.add_flag("--list-scenarios", list, "Print the scenario registry and exit");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify-curvature", "Cross-check the curvature formulas against the Gauss-Codazzi oracle"},
      {"build-profile", "Build a disc warping profile and check its invariants"},
      {"scaling", "Sweep delta and fit the R and min sec * diam^2 power laws"},
      {"biquotient", "Torus rank, flat-direction rate and a positive-Ricci witness"},
      {"cheeger-demo", "Chain metrics and a Cheeger-deformed family"},
      {"glue", "Glue two disc profiles and check the doubled metric"}};
  long samples = 0;
  double tol = 0, c0 = 0, delta = 0;
  int grid = 0, C = 0;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario,--example", cfg.scenario, "Scenario name");
    sub->add_option("--scenario-file", cfg.scenarioFile, "Scenario JSON file")->check(CLI::ExistingFile);
    sub->add_option("--seed", cfg.seed, "Run seed")->capture_default_str();
    sub->add_option("--samples", samples, "Sample count")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "Tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.outPath, "JSON report path (stdout if absent)");
    sub->add_option("--csv", cfg.csvPath, "CSV path (defaults next to --out)");
    sub->add_option("--deltas", cfg.deltas, "start:end:logstepN or a comma list");
    sub->add_option("--grid", grid, "Grid size")->check(CLI::PositiveNumber);
    sub->add_option("--c0", c0, "Cone slope c0")->check(CLI::PositiveNumber);
    sub->add_option("--C", C, "Exponent C (>= 9)");
    sub->add_option("--delta", delta, "Curvature budget delta")->check(CLI::PositiveNumber);
    sub->add_flag("--timings", cfg.timings, "Record wall-clock timings (breaks byte-identity)");
    sub->callback([&cfg, name = name]() { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (list) {
    for (const auto& s : list_scenarios()) std::cout << s.name << "\t" << s.description << "\n";
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 1;
  }
  CLI::App* active = app.get_subcommands().front();
  if (active->count("--samples")) cfg.samples = samples;
  if (active->count("--tol")) cfg.tol = tol;
  if (active->count("--grid")) cfg.grid = grid;
  if (active->count("--c0")) cfg.c0 = c0;
  if (active->count("--C")) cfg.C = C;
  if (active->count("--delta")) cfg.delta = delta;

  const auto start = std::chrono::steady_clock::now();
  RunResult r;
  try {
    r = run(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 2;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.report["timings"] = cfg.timings ? json{{"recorded", true}, {"totalSeconds", secs}}
                                    : json{{"recorded", false}};

  const std::string text = r.report.dump(2) + "\n";
  if (cfg.outPath.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.outPath, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << cfg.outPath << "\n";
      return 1;
    }
    out << text;
  }
  const std::string csvPath = default_csv_path(cfg);
  if (!r.csv.empty() && !csvPath.empty()) {
    std::ofstream out(csvPath, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << csvPath << "\n";
      return 1;
    }
    out << r.csv;
  }
  if (r.exitCode != 0) std::cerr << "assertion failed; see the report for the worst witness\n";
  return r.exitCode;
}

}  // namespace cohomlab
