#include "ellipsoid_entropy/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ellipsoid_entropy::io {

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    // trim whitespace; skip blanks and comment lines
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    if (tok[0] == '#') continue;
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size())
      throw std::runtime_error("bad signal value '" + tok + "' in " + path);
    out.push_back(v);
  }
  return out;
}

std::vector<double> parse_signal_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_array()) throw std::runtime_error("signal JSON must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw std::runtime_error("signal JSON must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<double> read_signal_json(const std::string& path) {
  return parse_signal_json(slurp(path));
}

std::string code_to_json(const codec::CodeVector& code) {
  return json(code.u).dump();
}

json spectrum_to_json(const lattice::Spectrum& s) {
  json j;
  j["dimension"] = s.dimension;
  j["cutoff"] = s.cutoff;
  json pairs = json::array();
  for (const auto& [v, m] : s.grouped()) pairs.push_back({{"value", v}, {"multiplicity", m}});
  j["values"] = pairs;
  j["count"] = s.values.size();
  return j;
}

std::string spectrum_to_csv(const lattice::Spectrum& s) {
  std::string out = "# ellipsoid-entropy spectrum csv v1\nvalue,multiplicity\n";
  for (const auto& [v, m] : s.grouped()) {
    out += format_double(v);
    out += ',';
    out += std::to_string(m);
    out += '\n';
  }
  return out;
}

json count_to_json(const lattice::CountResult& r) {
  json j;
  j["count"] = r.count.str();
  j["includes_origin"] = r.includes_origin;
  j["scheme"] = r.scheme_used == lattice::CountScheme::dynamic_programming
                    ? "dp"
                    : "recursive";
  j["work"] = r.work;
  return j;
}

json ledger_to_json(const bound::ConstantsLedger& ledger) {
  json j;
  auto put = [&](const std::string& name, double value) {
    for (const auto& [n, note] : bound::ledger_notes()) {
      if (n == name) {
        j[name] = {{"value", value}, {"note", note}};
        return;
      }
    }
    j[name] = {{"value", value}};
  };
  put("c0_regime", ledger.c0_regime);
  put("balance_c", ledger.balance_c);
  put("sigma_c", ledger.effective_sigma_c());
  put("c5", ledger.c5);
  put("c3", ledger.effective_c3());
  put("c4", ledger.effective_c4());
  put("c10", ledger.c10);
  put("c11", ledger.c11);
  return j;
}

json report_to_json(const bound::BoundReport& rep) {
  const auto& p = rep.params;
  json j;
  j["mode"] = rep.mode == bound::BoundMode::certified_envelope
                  ? "certified_envelope"
                  : "empirical_spectrum";
  j["k"] = p.k;
  j["R"] = p.R;
  j["x"] = p.x;
  j["rho"] = p.rho;
  j["z"] = p.z;
  j["y"] = p.y;
  j["sigma"] = p.sigma;
  j["gamma"] = p.gamma_coef;
  j["eta"] = p.eta;
  j["c_landau"] = p.c_landau;
  j["zeta_zero"] = p.zeta_zero;
  j["eps_geom"] = p.eps_geom;
  j["eps_total"] = p.eps_total;
  j["f_envelope"] = rep.f_order;
  j["I1"] = rep.integrals.i1;
  j["I2"] = rep.integrals.i2;
  j["I3"] = rep.integrals.i3;
  j["I4"] = rep.i4.value;
  j["ln_I4"] = rep.i4.ln_value;
  j["i4_normalized_gap"] = rep.i4.normalized_gap;
  j["ln_J1"] = rep.ln_j1;
  j["ln_J2"] = rep.ln_j2;
  j["ln_J3"] = rep.ln_j3;
  j["total_log_bound"] = rep.total_log_bound;
  j["volume_log"] = rep.volume_log;
  j["normalized"] = rep.normalized;
  j["c_eff"] = rep.c_eff;
  j["c5_ok"] = rep.c5_ok;
  j["regime_ok"] = rep.regime_ok;
  j["regime"] = rep.regime_label;
  j["dominant_term"] = rep.dominant_term;
  if (rep.residual_vs_exact) j["residual_vs_exact"] = *rep.residual_vs_exact;
  j["ledger"] = ledger_to_json(rep.ledger);
  return j;
}

}  // namespace ellipsoid_entropy::io
