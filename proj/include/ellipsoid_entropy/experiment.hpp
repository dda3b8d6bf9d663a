#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ellipsoid_entropy/bound.hpp"
#include "ellipsoid_entropy/codec.hpp"
#include "ellipsoid_entropy/lattice.hpp"

namespace ellipsoid_entropy::experiment {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ProfileSpec {
  enum class Kind { uniform, explicit_list, balanced_random };
  Kind kind = Kind::uniform;
  double uniform_eps = 1.0;
  std::vector<double> eps;     // explicit_list
  double balance_c = 1.0;      // balanced_random
  double eps_total = -1.0;     // balanced_random target; < 0 means k * 1.0
};

enum class RunMode { certified, empirical, both };

struct ExperimentConfig {
  std::vector<int> k_list{2, 3, 4};
  std::vector<double> R_list{2.0, 4.0};
  ProfileSpec profile{};
  bound::ConstantsLedger ledger{};
  RunMode mode = RunMode::certified;
  std::uint64_t count_budget = 10'000'000;
  std::uint64_t spectrum_budget = 10'000'000;
  std::uint64_t seed = 1;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
};

struct ResultRow {
  int k = 0;
  double R = 0.0;
  double eps_geom = 1.0;
  double eps_total = 0.0;
  std::optional<lattice::BigInt> tau_exact;
  std::optional<double> ln_tau_over_k;
  std::optional<double> normalized_bound;
  std::optional<double> residual;      // normalized_bound - (ln R - ln eps_geom - (1/2) ln k)
  std::optional<double> residual_tau;  // ln_tau_over_k  - (ln R - ln eps_geom - (1/2) ln k)
  std::optional<double> c_eff;
  std::string regime;
  std::string dominant_term;
  std::string scheme;  // counting scheme used for tau
  std::string reason;  // skip or budget note
  std::optional<double> alt_normalized_bound;  // (k-1)/(2k) ln R - ln eps_geom
  double runtime_ms = 0.0;
  bool bound_violated = false;
};

struct RunOutput {
  std::vector<ResultRow> rows;
  std::vector<bound::BoundReport> reports;
  bool any_violation = false;
};

/// count: exact tau per instance.
RunOutput run_count(const ExperimentConfig& config);
/// bound: full reports + residual columns; tau attempted within budget.
RunOutput run_bound(const ExperimentConfig& config);
/// sweep: bound rows plus the alternate-regime normalized form where it applies.
RunOutput run_sweep(const ExperimentConfig& config);

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;  // first counterexample, or a note
};

struct VerifyOptions {
  std::string bessel_samples_path;  // when set, write (nu, x, sqrt(x)|J|, bound) rows
};

/// Runs the invariant suites (codec round trip, oracle equivalence,
/// DP/recursion agreement, Bessel envelope, difference-operator identities,
/// Abel inequalities, sandwich inequality, certified-bound domination).
std::vector<SuiteResult> run_verify(const ExperimentConfig& config,
                                    const VerifyOptions& opts = {});

/// Fixed, versioned CSV schema; timings excluded by default so identical
/// config + seed gives byte-identical output.
std::string rows_to_csv(const RunOutput& out, bool include_timings = false);
nlohmann::json output_to_json(const RunOutput& out, bool include_timings = false);
nlohmann::json verify_to_json(const std::vector<SuiteResult>& suites);

/// Independent full-box reference counter (no pruning, no DP); used by the
/// verification suites as the oracle side of the equivalence check.
lattice::BigInt naive_count(std::span<const double> diag, double x,
                            bool include_origin);

/// Effective parallelism cap: ELLIPSOID_ENTROPY_THREADS, else hardware (<= 8).
int thread_cap();

}  // namespace ellipsoid_entropy::experiment
