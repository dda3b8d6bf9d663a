#include "ellipsoid_entropy/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <thread>

#include "ellipsoid_entropy/detail/numeric.hpp"
#include "ellipsoid_entropy/io.hpp"
#include "ellipsoid_entropy/special_functions.hpp"

namespace ellipsoid_entropy::experiment {

using nlohmann::json;

namespace {

/// Seeded generator with a platform-independent uniform double.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

codec::PrecisionProfile make_profile(int k, const ProfileSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case ProfileSpec::Kind::uniform:
      return codec::PrecisionProfile(std::vector<double>(k, spec.uniform_eps), 1.0);
    case ProfileSpec::Kind::explicit_list:
      if (static_cast<int>(spec.eps.size()) != k)
        throw ConfigError("explicit profile has " + std::to_string(spec.eps.size()) +
                          " entries but k=" + std::to_string(k));
      return codec::PrecisionProfile(spec.eps);
    case ProfileSpec::Kind::balanced_random: {
      const double target = spec.eps_total > 0.0 ? spec.eps_total : k * 1.0;
      const double mean = target / k;
      const double lc = std::log(spec.balance_c);
      // Renormalizing to the target total can push a draw outside the declared
      // C; reject those so the declared constant is honored exactly.
      for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<double> eps(k);
        detail::NeumaierSum sum;
        for (int i = 0; i < k; ++i) {
          eps[i] = mean * std::exp(rng.uniform(-lc, lc));
          sum.add(eps[i]);
        }
        const double scale = target / sum.value();
        bool ok = true;
        for (double& e : eps) {
          e *= scale;
          if (e < mean / spec.balance_c || e > mean * spec.balance_c) ok = false;
        }
        if (ok) return codec::PrecisionProfile(std::move(eps), spec.balance_c);
      }
      throw std::runtime_error("balanced_random: no admissible draw after 10000 tries");
    }
  }
  throw std::logic_error("unreachable profile kind");
}

const char* scheme_name(lattice::CountScheme s) {
  return s == lattice::CountScheme::dynamic_programming ? "dp" : "recursive";
}

double explicit_part(int k, double R, double eps_geom) {
  return std::log(R) - std::log(eps_geom) - 0.5 * std::log(static_cast<double>(k));
}

struct Instance {
  int k;
  double R;
  codec::PrecisionProfile profile;
};

std::vector<Instance> build_instances(const ExperimentConfig& config) {
  Rng rng(config.seed);
  std::vector<Instance> out;
  for (int k : config.k_list) {
    if (k < 1) throw ConfigError("k_list entries must be >= 1");
    for (double R : config.R_list) {
      if (!(R > 0.0)) throw ConfigError("R_list entries must be > 0");
      out.push_back({k, R, make_profile(k, config.profile, rng)});
    }
  }
  return out;
}

bound::ConstantsLedger ledger_for(const ExperimentConfig& config,
                                  const codec::PrecisionProfile& profile) {
  bound::ConstantsLedger ledger = config.ledger;
  const double measured = profile.balance_c().value_or(profile.min_balance_constant());
  ledger.balance_c = std::max(ledger.balance_c, measured);
  return ledger;
}

lattice::CountOptions count_options(const ExperimentConfig& config) {
  lattice::CountOptions opts;
  opts.node_budget = config.count_budget;
  opts.dp_cell_budget = std::max<std::uint64_t>(config.count_budget * 10, 100'000'000);
  return opts;
}

void attach_count(const ExperimentConfig& config, const Instance& inst,
                  ResultRow& row) {
  try {
    const auto form = lattice::DiagonalForm::primal(inst.profile);
    const auto res =
        lattice::count_points(form, inst.R * inst.R, true, count_options(config));
    row.tau_exact = res.count;
    row.ln_tau_over_k = lattice::log_big(res.count) / inst.k;
    row.scheme = scheme_name(res.scheme_used);
    row.residual_tau = *row.ln_tau_over_k -
                       explicit_part(inst.k, inst.R, inst.profile.geom());
  } catch (const lattice::BudgetExceeded& e) {
    row.reason = std::string("count_budget_exceeded: ") + e.what();
  }
}

ResultRow base_row(const Instance& inst) {
  ResultRow row;
  row.k = inst.k;
  row.R = inst.R;
  row.eps_geom = inst.profile.geom();
  row.eps_total = inst.profile.total();
  return row;
}

struct BoundEval {
  ResultRow row;
  std::vector<bound::BoundReport> reports;
};

BoundEval eval_bound_instance(const ExperimentConfig& config, const Instance& inst,
                              bool sweep) {
  BoundEval out;
  out.row = base_row(inst);
  ResultRow& row = out.row;
  const auto t0 = std::chrono::steady_clock::now();

  attach_count(config, inst, row);

  const bound::ConstantsLedger ledger = ledger_for(config, inst.profile);
  row.regime = bound::regime_check(inst.k, inst.R, ledger).label;

  bound::BoundParameters params;
  try {
    params = bound::compute_parameters(inst.k, inst.R, inst.profile, ledger);
  } catch (const std::exception& e) {
    row.reason = row.reason.empty() ? std::string("hypothesis: ") + e.what()
                                    : row.reason + "; hypothesis: " + e.what();
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return out;
  }

  auto finalize = [&](bound::BoundReport rep) {
    if (row.tau_exact)
      rep.residual_vs_exact = rep.normalized - *row.ln_tau_over_k;
    out.reports.push_back(std::move(rep));
  };

  if (config.mode == RunMode::certified || config.mode == RunMode::both) {
    const auto ints =
        bound::integrals_I(params, bound::BoundMode::certified_envelope);
    const auto i4 = bound::package_I4(params, ints);
    finalize(bound::bound_terms(params, inst.profile, i4, ledger,
                                bound::BoundMode::certified_envelope, ints));
  }
  if (config.mode == RunMode::empirical || config.mode == RunMode::both) {
    try {
      const auto dual = lattice::DiagonalForm::dual(inst.profile);
      const auto spec =
          lattice::spectrum(dual, params.y * 1.0625, config.spectrum_budget);
      const auto ints = bound::integrals_I(
          params, bound::BoundMode::empirical_spectrum, &spec);
      const auto i4 = bound::package_I4(params, ints);
      finalize(bound::bound_terms(params, inst.profile, i4, ledger,
                                  bound::BoundMode::empirical_spectrum, ints));
    } catch (const lattice::BudgetExceeded& e) {
      row.reason = row.reason.empty()
                       ? std::string("empirical_skipped: ") + e.what()
                       : row.reason + "; empirical_skipped: " + e.what();
    }
  }

  // Row columns come from the certified report when present.
  const bound::BoundReport* primary = nullptr;
  for (const auto& rep : out.reports) {
    if (rep.mode == bound::BoundMode::certified_envelope) primary = &rep;
  }
  if (primary == nullptr && !out.reports.empty()) primary = &out.reports.front();
  if (primary != nullptr) {
    row.normalized_bound = primary->normalized;
    row.c_eff = primary->c_eff;
    row.dominant_term = primary->dominant_term;
    row.residual = primary->normalized -
                   explicit_part(inst.k, inst.R, inst.profile.geom());
    if (sweep && row.regime == "alternate") {
      row.alt_normalized_bound = (inst.k - 1.0) / (2.0 * inst.k) * std::log(inst.R) -
                                 std::log(inst.profile.geom());
    }
    if (primary->mode == bound::BoundMode::certified_envelope && row.tau_exact &&
        primary->total_log_bound <
            lattice::log_big(*row.tau_exact) - 1e-9) {
      row.bound_violated = true;
    }
  }
  row.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return out;
}

}  // namespace

int thread_cap() {
  if (const char* s = std::getenv("ELLIPSOID_ENTROPY_THREADS")) {
    const long v = std::strtol(s, nullptr, 10);
    if (v >= 1) return static_cast<int>(std::min<long>(v, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp<unsigned>(hw, 1u, 8u));
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("k_list")) c.k_list = j.at("k_list").get<std::vector<int>>();
    if (j.contains("R_list")) c.R_list = j.at("R_list").get<std::vector<double>>();
    if (j.contains("profile")) {
      const auto& p = j.at("profile");
      const std::string type = p.value("type", "uniform");
      if (type == "uniform") {
        c.profile.kind = ProfileSpec::Kind::uniform;
        c.profile.uniform_eps = p.value("eps", 1.0);
        if (!(c.profile.uniform_eps > 0.0))
          throw ConfigError("profile.eps must be > 0");
      } else if (type == "explicit") {
        c.profile.kind = ProfileSpec::Kind::explicit_list;
        c.profile.eps = p.at("eps").get<std::vector<double>>();
      } else if (type == "balanced_random") {
        c.profile.kind = ProfileSpec::Kind::balanced_random;
        c.profile.balance_c = p.value("C", 2.0);
        c.profile.eps_total = p.value("eps_total", -1.0);
        if (!(c.profile.balance_c >= 1.0))
          throw ConfigError("profile.C must be >= 1");
      } else {
        throw ConfigError("unknown profile.type '" + type + "'");
      }
    }
    if (j.contains("ledger")) {
      const auto& l = j.at("ledger");
      c.ledger.c0_regime = l.value("c0_regime", c.ledger.c0_regime);
      c.ledger.balance_c = l.value("balance_c", c.ledger.balance_c);
      if (l.contains("sigma_c")) c.ledger.sigma_c = l.at("sigma_c").get<double>();
      c.ledger.c5 = l.value("c5", c.ledger.c5);
      c.ledger.c3 = l.value("c3", c.ledger.c3);
      c.ledger.c4 = l.value("c4", c.ledger.c4);
      c.ledger.c10 = l.value("c10", c.ledger.c10);
      c.ledger.c11 = l.value("c11", c.ledger.c11);
    }
    if (j.contains("mode")) {
      const std::string m = j.at("mode").get<std::string>();
      if (m == "certified") c.mode = RunMode::certified;
      else if (m == "empirical") c.mode = RunMode::empirical;
      else if (m == "both") c.mode = RunMode::both;
      else throw ConfigError("unknown mode '" + m + "'");
    }
    c.count_budget = j.value("count_budget", c.count_budget);
    c.spectrum_budget = j.value("spectrum_budget", c.spectrum_budget);
    c.seed = j.value("seed", c.seed);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  // Fail fast on explicit-profile dimension mismatches.
  if (c.profile.kind == ProfileSpec::Kind::explicit_list) {
    for (int k : c.k_list) {
      if (static_cast<int>(c.profile.eps.size()) != k)
        throw ConfigError("explicit profile has " +
                          std::to_string(c.profile.eps.size()) +
                          " entries but k_list contains " + std::to_string(k));
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

RunOutput run_count(const ExperimentConfig& config) {
  RunOutput out;
  for (const Instance& inst : build_instances(config)) {
    const auto t0 = std::chrono::steady_clock::now();
    ResultRow row = base_row(inst);
    attach_count(config, inst, row);
    row.regime = bound::regime_check(inst.k, inst.R, ledger_for(config, inst.profile))
                     .label;
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    out.rows.push_back(std::move(row));
  }
  return out;
}

namespace {

RunOutput run_bound_impl(const ExperimentConfig& config, bool sweep) {
  const std::vector<Instance> instances = build_instances(config);
  std::vector<BoundEval> evals(instances.size());
  const int threads =
      std::min<int>(thread_cap(), static_cast<int>(instances.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < instances.size(); ++i)
      evals[i] = eval_bound_instance(config, instances[i], sweep);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    for (int t = 0; t < threads; ++t) {
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next.fetch_add(1); i < instances.size();
             i = next.fetch_add(1)) {
          evals[i] = eval_bound_instance(config, instances[i], sweep);
        }
      }));
    }
    for (auto& w : workers) w.get();
  }
  RunOutput out;
  for (auto& e : evals) {
    out.any_violation = out.any_violation || e.row.bound_violated;
    out.rows.push_back(std::move(e.row));
    for (auto& rep : e.reports) out.reports.push_back(std::move(rep));
  }
  return out;
}

}  // namespace

RunOutput run_bound(const ExperimentConfig& config) {
  return run_bound_impl(config, false);
}

RunOutput run_sweep(const ExperimentConfig& config) {
  return run_bound_impl(config, true);
}

lattice::BigInt naive_count(std::span<const double> diag, double x,
                            bool include_origin) {
  const std::size_t k = diag.size();
  std::vector<std::int64_t> max_u(k);
  std::vector<std::int64_t> u(k);
  for (std::size_t i = 0; i < k; ++i) {
    max_u[i] = static_cast<std::int64_t>(std::floor(std::sqrt(x / diag[i]))) + 1;
    u[i] = -max_u[i];
  }
  lattice::BigInt count = 0;
  while (true) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += diag[i] * static_cast<double>(u[i]) * u[i];
    if (detail::tie_leq(s, x)) ++count;
    std::size_t level = 0;
    while (level < k && ++u[level] > max_u[level]) {
      u[level] = -max_u[level];
      ++level;
    }
    if (level == k) break;
  }
  if (!include_origin) count -= 1;
  return count;
}

std::string rows_to_csv(const RunOutput& out, bool include_timings) {
  std::string csv = "# ellipsoid-entropy results csv v1\n";
  csv +=
      "k,R,eps_geom,eps_total,tau_exact,ln_tau_over_k,normalized_bound,residual,"
      "residual_tau,c_eff,regime,dominant_term,scheme,reason,alt_normalized_bound";
  if (include_timings) csv += ",runtime_ms";
  csv += '\n';
  auto opt = [](const std::optional<double>& v) {
    return v ? io::format_double(*v) : std::string();
  };
  for (const auto& r : out.rows) {
    csv += std::to_string(r.k);
    csv += ',';
    csv += io::format_double(r.R);
    csv += ',';
    csv += io::format_double(r.eps_geom);
    csv += ',';
    csv += io::format_double(r.eps_total);
    csv += ',';
    csv += r.tau_exact ? r.tau_exact->str() : std::string();
    csv += ',';
    csv += opt(r.ln_tau_over_k);
    csv += ',';
    csv += opt(r.normalized_bound);
    csv += ',';
    csv += opt(r.residual);
    csv += ',';
    csv += opt(r.residual_tau);
    csv += ',';
    csv += opt(r.c_eff);
    csv += ',';
    csv += r.regime;
    csv += ',';
    csv += r.dominant_term;
    csv += ',';
    csv += r.scheme;
    csv += ',';
    csv += r.reason;
    csv += ',';
    csv += opt(r.alt_normalized_bound);
    if (include_timings) {
      csv += ',';
      csv += io::format_double(r.runtime_ms);
    }
    csv += '\n';
  }
  return csv;
}

json output_to_json(const RunOutput& out, bool include_timings) {
  json rows = json::array();
  for (const auto& r : out.rows) {
    json row;
    row["k"] = r.k;
    row["R"] = r.R;
    row["eps_geom"] = r.eps_geom;
    row["eps_total"] = r.eps_total;
    if (r.tau_exact) row["tau_exact"] = r.tau_exact->str();
    if (r.ln_tau_over_k) row["ln_tau_over_k"] = *r.ln_tau_over_k;
    if (r.normalized_bound) row["normalized_bound"] = *r.normalized_bound;
    if (r.residual) row["residual"] = *r.residual;
    if (r.residual_tau) row["residual_tau"] = *r.residual_tau;
    if (r.c_eff) row["c_eff"] = *r.c_eff;
    row["regime"] = r.regime;
    if (!r.dominant_term.empty()) row["dominant_term"] = r.dominant_term;
    if (!r.scheme.empty()) row["scheme"] = r.scheme;
    if (!r.reason.empty()) row["reason"] = r.reason;
    if (r.alt_normalized_bound) row["alt_normalized_bound"] = *r.alt_normalized_bound;
    if (include_timings) row["runtime_ms"] = r.runtime_ms;
    if (r.bound_violated) row["bound_violated"] = true;
    rows.push_back(std::move(row));
  }
  json reports = json::array();
  for (const auto& rep : out.reports) reports.push_back(io::report_to_json(rep));
  json j;
  j["schema"] = "ellipsoid-entropy results v1";
  j["rows"] = std::move(rows);
  j["reports"] = std::move(reports);
  j["any_violation"] = out.any_violation;
  return j;
}

json verify_to_json(const std::vector<SuiteResult>& suites) {
  json arr = json::array();
  bool all = true;
  for (const auto& s : suites) {
    arr.push_back({{"suite", s.name}, {"pass", s.pass}, {"detail", s.detail}});
    all = all && s.pass;
  }
  return json{{"schema", "ellipsoid-entropy verify v1"},
              {"all_pass", all},
              {"suites", std::move(arr)}};
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------
namespace {

SuiteResult suite_codec_round_trip(const ExperimentConfig& config) {
  SuiteResult res{"codec_round_trip", true, ""};
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  if (config.k_list.empty()) {
    res.detail = "vacuous: empty k_list";
    return res;
  }
  Rng profile_rng(config.seed);
  for (int k : config.k_list) {
    const auto profile = make_profile(k, config.profile, profile_rng);
    for (int trial = 0; trial < 10'000; ++trial) {
      std::vector<double> f(k);
      for (int i = 0; i < k; ++i)
        f[i] = rng.uniform(-10.0 * profile.eps()[i], 10.0 * profile.eps()[i]);
      const auto code = codec::quantize(f, profile);
      const auto box = codec::recovery_box(code);
      bool ok = box.contains(f);
      for (int i = 0; ok && i < k; ++i) {
        if (std::fabs(code.u[i] * profile.eps()[i]) > std::fabs(f[i]) * (1 + 1e-12))
          ok = false;
      }
      // Feasibility: rescale onto a random energy level <= R^2, R = 2.
      const double e = codec::energy(f);
      if (ok && e > 0.0) {
        const double target = 4.0 * rng.uniform01();
        const double scale = std::sqrt(target / e);
        std::vector<double> g(f);
        for (double& v : g) v *= scale;
        const auto cg = codec::quantize(g, profile);
        detail::NeumaierSum s;
        for (int i = 0; i < k; ++i) {
          const double t = cg.u[i] * profile.eps()[i];
          s.add(t * t);
        }
        if (!detail::tie_leq(s.value(), 4.0)) ok = false;
      }
      if (!ok) {
        res.pass = false;
        res.detail = "k=" + std::to_string(k) + " trial=" + std::to_string(trial) +
                     " f=" + json(f).dump();
        return res;
      }
    }
  }
  return res;
}

SuiteResult suite_count_oracle(const ExperimentConfig& config) {
  SuiteResult res{"count_oracle_equivalence", true, ""};
  Rng rng(config.seed ^ 0xa5a5a5a55a5a5a5aull);
  for (int trial = 0; trial < 25; ++trial) {
    int k = 2;
    std::vector<double> eps;
    double R = 2.0;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      k = 2 + static_cast<int>(rng.next() % 3);
      eps.assign(k, 0.0);
      for (double& e : eps) e = rng.uniform(0.3, 3.0);
      R = rng.uniform(1.0, 6.0);
      double box = 1.0;
      for (double e : eps) box *= 2.0 * std::floor(R / e) + 3.0;
      if (box <= 2e5) break;  // keep instances cheap
    }
    std::vector<double> diag(k);
    for (int i = 0; i < k; ++i) diag[i] = eps[i] * eps[i];
    lattice::DiagonalForm form{diag, lattice::FormKind::primal};
    const auto fast = lattice::count_points(form, R * R, true);
    const auto slow = naive_count(diag, R * R, true);
    if (fast.count != slow) {
      res.pass = false;
      res.detail = "eps=" + json(eps).dump() + " R=" + io::format_double(R) +
                   " fast=" + fast.count.str() + " naive=" + slow.str();
      return res;
    }
  }
  return res;
}

SuiteResult suite_dp_recursion(const ExperimentConfig& config) {
  SuiteResult res{"dp_recursion_agreement", true, ""};
  Rng rng(config.seed ^ 0x1234567890abcdefull);
  const double grid[] = {0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + static_cast<int>(rng.next() % 2);
    std::vector<double> diag(k);
    for (double& d : diag) {
      const double e = grid[rng.next() % 6];
      d = e * e;
    }
    const double x = 1.0 + static_cast<double>(rng.next() % 30);
    lattice::DiagonalForm form{diag, lattice::FormKind::primal};
    lattice::CountOptions rec_opts, dp_opts;
    rec_opts.scheme = lattice::CountScheme::recursive;
    dp_opts.scheme = lattice::CountScheme::dynamic_programming;
    const auto a = lattice::count_points(form, x, true, rec_opts);
    const auto b = lattice::count_points(form, x, true, dp_opts);
    if (a.count != b.count) {
      res.pass = false;
      res.detail = "diag=" + json(diag).dump() + " x=" + io::format_double(x) +
                   " recursive=" + a.count.str() + " dp=" + b.count.str();
      return res;
    }
  }
  return res;
}

SuiteResult suite_bessel_envelope(const VerifyOptions& opts) {
  SuiteResult res{"bessel_envelope", true, ""};
  std::string samples = "nu,x,sqrt_x_absJ,bound\n";
  const double nus[] = {1.0, 2.0, 3.5, 5.0, 10.0, 17.0, 50.0};
  for (double nu : nus) {
    const double bnd = specfun::olenko_rhs(nu);
    for (int i = 0; i < 1000; ++i) {
      const double x = 1e-3 * std::pow(1e7, i / 999.0);
      const double v = std::sqrt(x) * std::fabs(specfun::bessel_j(nu, x));
      if (!opts.bessel_samples_path.empty()) {
        samples += io::format_double(nu) + "," + io::format_double(x) + "," +
                   io::format_double(v) + "," + io::format_double(bnd) + "\n";
      }
      if (v > bnd + 1e-9) {
        res.pass = false;
        res.detail = "nu=" + io::format_double(nu) + " x=" + io::format_double(x) +
                     " sqrt(x)|J|=" + io::format_double(v) +
                     " bound=" + io::format_double(bnd);
        return res;
      }
    }
  }
  if (!opts.bessel_samples_path.empty()) {
    std::ofstream out(opts.bessel_samples_path);
    out << samples;
  }
  return res;
}

SuiteResult suite_delta_identities() {
  SuiteResult res{"delta_identities", true, ""};
  const double zs[] = {0.5, 1.0, 2.5198420997897464};
  const double xs[] = {1.0, 4.0, 16.0};
  for (int rho = 1; rho <= 4; ++rho) {
    for (double z : zs) {
      for (double x : xs) {
        const double got = bound::delta_apply(
            [rho](double t) { return std::pow(t, rho); }, x, z, rho);
        const double want = std::tgamma(rho + 1.0) * std::pow(z, rho);
        if (std::fabs(got - want) > 1e-9 * want) {
          res.pass = false;
          res.detail = "rho=" + std::to_string(rho) + " z=" + io::format_double(z) +
                       " x=" + io::format_double(x) + " got=" + io::format_double(got);
          return res;
        }
      }
    }
  }
  // Mean-value bracket of Delta(t^{k/2+rho}).
  for (int k : {2, 3, 4}) {
    for (double x : {4.0, 16.0}) {
      codec::PrecisionProfile unit(std::vector<double>(k, 1.0));
      const auto params = bound::compute_parameters(
          k, std::sqrt(x), unit, bound::ConstantsLedger{});
      const double gamma_ratio =
          std::exp(specfun::log_gamma(0.5 * k + params.rho + 1.0) -
                   specfun::log_gamma(0.5 * k + 1.0));
      const double raw = bound::delta_apply(
          [&](double t) { return std::pow(t, 0.5 * k + params.rho); }, params.x,
          params.z, params.rho);
      const double val = raw / (std::pow(params.z, params.rho) * gamma_ratio);
      const double lo = std::pow(params.x, 0.5 * k);
      const double hi = std::pow(params.x + params.rho * params.z, 0.5 * k);
      if (!(val >= lo * (1 - 1e-9) && val <= hi * (1 + 1e-9))) {
        res.pass = false;
        res.detail = "bracket k=" + std::to_string(k) + " x=" + io::format_double(x);
        return res;
      }
    }
  }
  return res;
}

SuiteResult suite_abel(const ExperimentConfig& config) {
  SuiteResult res{"abel_inequalities", true, ""};
  for (int k : {2, 3}) {
    codec::PrecisionProfile unit(std::vector<double>(k, 1.0));
    const auto dual = lattice::DiagonalForm::dual(unit);
    const auto spec = lattice::spectrum(dual, 100.0, config.spectrum_budget);
    for (double x : {4.0, 16.0, 100.0}) {
      const auto params = bound::compute_parameters(k, std::sqrt(x), unit,
                                                    bound::ConstantsLedger{});
      const double w_lo = 0.25 * k + 0.25;
      const double w_hi = 0.25 * k + 0.5 * params.rho + 0.25;
      const auto lower = bound::abel_lower(spec, params.y, w_lo);
      const auto upper = bound::abel_upper(spec, params.y, w_hi, params);
      const double tol = 1e-9 * std::max(1.0, std::fabs(lower.rhs));
      if (lower.lhs > lower.rhs + tol || !lower.stau_ok ||
          upper.lhs > upper.rhs + 1e-9 * std::max(1.0, std::fabs(upper.rhs))) {
        res.pass = false;
        res.detail = "k=" + std::to_string(k) + " x=" + io::format_double(x) +
                     " lower=(" + io::format_double(lower.lhs) + "," +
                     io::format_double(lower.rhs) + ") upper=(" +
                     io::format_double(upper.lhs) + "," +
                     io::format_double(upper.rhs) + ")";
        return res;
      }
    }
  }
  return res;
}

SuiteResult suite_sandwich(const ExperimentConfig& config) {
  SuiteResult res{"sandwich_inequality", true, ""};
  for (int k : {2, 3}) {
    codec::PrecisionProfile unit(std::vector<double>(k, 1.0));
    for (double x : {4.0, 16.0}) {
      const auto params =
          bound::compute_parameters(k, std::sqrt(x), unit, bound::ConstantsLedger{});
      const auto primal = lattice::DiagonalForm::primal(unit);
      const auto spec = lattice::spectrum(
          primal, params.x + params.rho * params.z + 1.0, config.spectrum_budget);
      const auto rep = bound::verify_sandwich(spec, params);
      if (!rep.ok || !rep.delta_rho_ok || !rep.bracket_ok) {
        res.pass = false;
        res.detail = "k=" + std::to_string(k) + " x=" + io::format_double(x) +
                     " lhs=" + io::format_double(rep.lhs) +
                     " rhs=" + io::format_double(rep.rhs);
        return res;
      }
    }
  }
  return res;
}

SuiteResult suite_certified_domination(const ExperimentConfig& config) {
  SuiteResult res{"certified_bound_domination", true, ""};
  if (config.k_list.empty() || config.R_list.empty()) {
    res.detail = "vacuous: no instances";
    return res;
  }
  ExperimentConfig c = config;
  c.mode = RunMode::certified;
  const RunOutput out = run_bound_impl(c, false);
  int checked = 0;
  for (const auto& row : out.rows) {
    if (row.tau_exact && row.normalized_bound) ++checked;
    if (row.bound_violated) {
      res.pass = false;
      res.detail = "k=" + std::to_string(row.k) + " R=" + io::format_double(row.R) +
                   " tau=" + row.tau_exact->str() + " normalized_bound=" +
                   io::format_double(*row.normalized_bound);
      return res;
    }
  }
  res.detail = std::to_string(checked) + " instances checked";
  return res;
}

SuiteResult suite_envelope_vs_empirical(const ExperimentConfig& config) {
  SuiteResult res{"envelope_dominates_empirical", true, ""};
  for (double R : {2.0, 4.0}) {
    codec::PrecisionProfile unit(std::vector<double>{1.0, 1.0});
    const auto params =
        bound::compute_parameters(2, R, unit, bound::ConstantsLedger{});
    const auto cert =
        bound::integrals_I(params, bound::BoundMode::certified_envelope);
    const auto dual = lattice::DiagonalForm::dual(unit);
    const auto spec = lattice::spectrum(dual, std::max(100.0, params.y * 2.0),
                                        config.spectrum_budget);
    const auto emp = bound::integrals_I(
        params, bound::BoundMode::empirical_spectrum, &spec);
    if (emp.i1 > cert.i1 || emp.i2 > cert.i2 || emp.i3 > cert.i3) {
      res.pass = false;
      res.detail = "R=" + io::format_double(R);
      return res;
    }
  }
  return res;
}

}  // namespace

std::vector<SuiteResult> run_verify(const ExperimentConfig& config,
                                    const VerifyOptions& opts) {
  std::vector<SuiteResult> suites;
  suites.push_back(suite_codec_round_trip(config));
  suites.push_back(suite_count_oracle(config));
  suites.push_back(suite_dp_recursion(config));
  suites.push_back(suite_bessel_envelope(opts));
  suites.push_back(suite_delta_identities());
  suites.push_back(suite_abel(config));
  suites.push_back(suite_sandwich(config));
  suites.push_back(suite_envelope_vs_empirical(config));
  suites.push_back(suite_certified_domination(config));
  return suites;
}

}  // namespace ellipsoid_entropy::experiment
