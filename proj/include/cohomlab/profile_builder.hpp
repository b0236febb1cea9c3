#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cohomlab/cohom1.hpp"
#include "cohomlab/report.hpp"
#include "cohomlab/warp_profile.hpp"

namespace cohomlab {

struct InequalityPoint {
  double t;
  double margin;     ///< -f f'' - C f'^2
  double concavity;  ///< (f^{C+1})''
};

struct InequalityReport {
  double maxViolation = 0;   ///< max of C f'^2 + f f''
  double maxConcavity = 0;   ///< max of (f^{C+1})''
  long signMismatches = 0;   ///< grid points where the two tests disagree
  std::vector<InequalityPoint> points;
  bool passes(double tol = 1e-12) const { return maxViolation <= tol; }
};

/// -f f'' >= C f'^2 and, independently, (f^{C+1})'' <= 0 on the grid.
InequalityReport check_inequality(const WarpProfile& f, int C, const std::vector<double>& grid);

/// Root of t (1 + c0^2 t^2) = delta^{-1/2}; throws when the root is below 1.
double solve_R0(double delta, double c0);

struct BuiltDiscProfile {
  double delta, c0;
  int C;
  double R0;        ///< root of (f0'/f0)^2 = delta
  double capStart;  ///< where the concave cap leaves f0 (R0 unless h0 is convex there)
  double capEnd;    ///< h == 1 from here to R
  double R;
  ProfilePtr f;
  bool concaveFromR0() const { return capStart == R0; }
};

/// f = f0 on [1, capStart], f = h^{1/(C+1)} with h concave up to capEnd,
/// f == 1 on [capEnd, R]. If (f0^{C+1})'' >= 0 at R0 the cap starts at the
/// inflection point instead, unless strict is set, in which case it throws.
BuiltDiscProfile build_disc_profile(double delta, double c0, int C, bool strict = false);

nlohmann::json disc_profile_json(const BuiltDiscProfile& p);

struct DiscProfileInvariants {
  double f0Mismatch = 0;             ///< max |f - f0| on [1, R0]; must be exactly 0
  std::optional<double> maxConcavity;  ///< max (f^{C+1})'' on (R0, R]
  double minF = 0, maxF = 0, minSlope = 0;
  double terminalLength = 0;         ///< R - capEnd
  JoinDiagnostics joins;
  bool pass() const;
  nlohmann::json to_json() const;
};

DiscProfileInvariants check_disc_profile(const BuiltDiscProfile& p, const std::vector<double>& grid);

struct DeformationReport {
  double cond1 = 0;  ///< min over grid and i of eps - |ft_i - c0|
  double cond2 = 0;  ///< min of |f'_i| + eps - |ft'_i|
  double cond3 = 0;  ///< min of f''_i + eps - ft''_i
  double cond4 = 0;  ///< min over grid of the better branch margin
  bool pass() const { return cond1 > 0 && cond2 > 0 && cond3 > 0 && cond4 > 0; }
};

/// Conditions (i)-(iv). With correctedRho, rho_i uses ft'_i - ft'_1 in the
/// numerator instead of ft'_i - f'_1.
DeformationReport deformation_conditions(const std::vector<ProfilePtr>& f,
                                 const std::vector<ProfilePtr>& ft, double c0, double eps,
                                 const std::vector<double>& grid, bool correctedRho = false);

struct AbcScan {
  long samples = 0;
  long failures = 0;
  double minA = 0, minC = 0, minDisc = 0;  ///< normalized by plane size
  Witness worst;
  bool pass() const { return failures == 0; }
};

/// Positivity of A, C and AC - B^2/4 over seeded Q-unit pairs at each t.
AbcScan abc_positivity_scan(const Cohom1Metric& M, const std::vector<double>& ts, int pairsPerT,
                            std::uint64_t seed);

struct EqualizeOptions {
  double t0 = 0;           ///< common-value point
  double t1Offset = 0.15;  ///< t1 = t0 + offset
  double blendHalfWidth = 0.05;
  std::optional<ProfilePtr> target;  ///< final common warp; built when absent
  int scanPoints = 64;
  int scanPairs = 64;
  std::uint64_t seed = 42;
};

struct EqualizeResult {
  Cohom1Metric metric;
  ProfilePtr target;
  double t1;
  std::vector<double> Ci;
  bool orderingHolds = false;  ///< fbar_k <= f_1, f_k and fbar_k' > f_1' before t1
  AbcScan scan;
};

EqualizeResult equalize_profiles(const Cohom1Metric& M, const EqualizeOptions& opt);

struct GlueInput {
  BuiltDiscProfile profile;
  BlockDecomposition decomposition;
};

struct GlueReport {
  CurvatureReport report;
  double boundaryMismatch;
  double certifiedMinSec;  ///< -max (f'/f)^2 over the caps
  double diameter;
  double product;          ///< certifiedMinSec * diameter^2
};

/// Doubles the interval, joining the two profiles where both are constant 1.
Cohom1Metric glue_metric(const GlueInput& left, const GlueInput& right);

}  // namespace cohomlab
