#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ellipsoid_entropy/bound.hpp"
#include "ellipsoid_entropy/codec.hpp"
#include "ellipsoid_entropy/experiment.hpp"
#include "ellipsoid_entropy/io.hpp"
#include "ellipsoid_entropy/lattice.hpp"
#include "ellipsoid_entropy/special_functions.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
namespace ee = ellipsoid_entropy;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  static py::object loads = py::module_::import("json").attr("loads");
  return loads(j.dump());
}

py::int_ big_to_py(const ee::lattice::BigInt& n) {
  static py::object py_int = py::module_::import("builtins").attr("int");
  return py_int(py::str(n.str()));
}

ee::codec::PrecisionProfile make_profile(const std::vector<double>& eps,
                                         std::optional<double> balance_c) {
  return ee::codec::PrecisionProfile(eps, balance_c);
}

ee::lattice::DiagonalForm make_form(const std::vector<double>& diag, bool dual) {
  return ee::lattice::DiagonalForm{
      diag, dual ? ee::lattice::FormKind::dual : ee::lattice::FormKind::primal};
}

ee::bound::ConstantsLedger ledger_from_dict(const py::dict& overrides) {
  ee::bound::ConstantsLedger ledger;
  for (auto item : overrides) {
    const auto key = item.first.cast<std::string>();
    const double v = item.second.cast<double>();
    if (key == "c0_regime") ledger.c0_regime = v;
    else if (key == "balance_c") ledger.balance_c = v;
    else if (key == "sigma_c") ledger.sigma_c = v;
    else if (key == "c5") ledger.c5 = v;
    else if (key == "c3") ledger.c3 = v;
    else if (key == "c4") ledger.c4 = v;
    else if (key == "c10") ledger.c10 = v;
    else if (key == "c11") ledger.c11 = v;
    else throw std::invalid_argument("unknown ledger constant '" + key + "'");
  }
  return ledger;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "worst-case quantization codec, exact ellipsoid lattice counts, "
            "and the dimension-explicit entropy bound";

  // ---- codec ----
  m.def("forward_difference",
        [](const std::vector<double>& g) { return ee::codec::forward_difference(g); },
        py::arg("g"), "f(i) = g(i) - g(i-1) from g rooted at 0");
  m.def("energy",
        [](const std::vector<double>& f) { return ee::codec::energy(f); },
        py::arg("f"));
  m.def(
      "quantize",
      [](const std::vector<double>& f, const std::vector<double>& eps) {
        return ee::codec::quantize(f, make_profile(eps, std::nullopt)).u;
      },
      py::arg("f"), py::arg("eps"),
      "round toward zero in units of eps_i; returns the integer code");
  m.def(
      "recovery_box",
      [](const std::vector<std::int64_t>& u, const std::vector<double>& eps) {
        ee::codec::CodeVector code{u, make_profile(eps, std::nullopt)};
        const auto box = ee::codec::recovery_box(code);
        return py::make_tuple(box.lo, box.hi);
      },
      py::arg("u"), py::arg("eps"));
  m.def(
      "box_contains",
      [](const std::vector<std::int64_t>& u, const std::vector<double>& eps,
         const std::vector<double>& f) {
        ee::codec::CodeVector code{u, make_profile(eps, std::nullopt)};
        return ee::codec::recovery_box(code).contains(f);
      },
      py::arg("u"), py::arg("eps"), py::arg("f"));

  // ---- lattice ----
  py::class_<ee::lattice::Spectrum>(m, "Spectrum")
      .def_readonly("dimension", &ee::lattice::Spectrum::dimension)
      .def_readonly("cutoff", &ee::lattice::Spectrum::cutoff)
      .def_readonly("values", &ee::lattice::Spectrum::values)
      .def("count_at", &ee::lattice::Spectrum::count_at, py::arg("x"))
      .def("value_at", &ee::lattice::Spectrum::value_at, py::arg("n"))
      .def("grouped", &ee::lattice::Spectrum::grouped);

  m.def(
      "count_points",
      [](const std::vector<double>& diag, double x, bool include_origin,
         const std::string& scheme, std::uint64_t node_budget,
         std::uint64_t dp_cell_budget) {
        ee::lattice::CountOptions opts;
        opts.node_budget = node_budget;
        opts.dp_cell_budget = dp_cell_budget;
        if (scheme == "recursive") opts.scheme = ee::lattice::CountScheme::recursive;
        else if (scheme == "dp")
          opts.scheme = ee::lattice::CountScheme::dynamic_programming;
        else if (scheme != "auto")
          throw std::invalid_argument("scheme must be auto|recursive|dp");
        const auto r = ee::lattice::count_points(make_form(diag, false), x,
                                                 include_origin, opts);
        py::dict out;
        out["count"] = big_to_py(r.count);
        out["includes_origin"] = r.includes_origin;
        out["scheme"] = r.scheme_used == ee::lattice::CountScheme::dynamic_programming
                            ? "dp"
                            : "recursive";
        out["work"] = r.work;
        return out;
      },
      py::arg("diag"), py::arg("x"), py::arg("include_origin") = true,
      py::arg("scheme") = "auto", py::arg("node_budget") = 10'000'000,
      py::arg("dp_cell_budget") = 100'000'000,
      "exact count of integer points with sum diag_i u_i^2 <= x");
  m.def(
      "box_bound",
      [](const std::vector<double>& eps, double x) {
        const auto b = ee::lattice::box_bound(eps, x);
        return py::make_tuple(big_to_py(b.exact), b.relaxed);
      },
      py::arg("eps"), py::arg("x"));
  m.def(
      "spectrum",
      [](const std::vector<double>& diag, double cutoff, bool dual,
         std::uint64_t budget) {
        return ee::lattice::spectrum(make_form(diag, dual), cutoff, budget);
      },
      py::arg("diag"), py::arg("cutoff"), py::arg("dual") = false,
      py::arg("budget") = 10'000'000);
  m.def("smoothed_count", &ee::lattice::smoothed_count, py::arg("spectrum"),
        py::arg("x"), py::arg("rho"));

  // ---- special functions ----
  m.def("bessel_j", &ee::specfun::bessel_j, py::arg("nu"), py::arg("x"));
  m.def("olenko_rhs", &ee::specfun::olenko_rhs, py::arg("nu"));
  m.def("envelope_f", &ee::specfun::envelope_f, py::arg("nu"));
  m.def("envelope_ratio", &ee::specfun::envelope_ratio, py::arg("k"));
  m.def("log_gamma", &ee::specfun::log_gamma, py::arg("x"));

  // ---- bound engine ----
  m.def(
      "compute_parameters",
      [](int k, double R, const std::vector<double>& eps, const py::dict& ledger) {
        const auto p = ee::bound::compute_parameters(
            k, R, make_profile(eps, std::nullopt), ledger_from_dict(ledger));
        py::dict out;
        out["k"] = p.k;
        out["R"] = p.R;
        out["x"] = p.x;
        out["rho"] = p.rho;
        out["z"] = p.z;
        out["y"] = p.y;
        out["sigma"] = p.sigma;
        out["eta"] = p.eta;
        out["c_landau"] = p.c_landau;
        out["eps_geom"] = p.eps_geom;
        out["eps_total"] = p.eps_total;
        return out;
      },
      py::arg("k"), py::arg("R"), py::arg("eps"), py::arg("ledger") = py::dict());
  m.def(
      "delta_apply",
      [](const std::function<double(double)>& F, double x, double z, int rho) {
        return ee::bound::delta_apply(F, x, z, rho);
      },
      py::arg("F"), py::arg("x"), py::arg("z"), py::arg("rho"),
      "order-rho alternating binomial difference with step z");
  m.def(
      "evaluate_bound",
      [](int k, double R, const std::vector<double>& eps, const std::string& mode,
         const py::dict& ledger) {
        const auto profile = make_profile(eps, std::nullopt);
        const auto led = ledger_from_dict(ledger);
        if (mode == "certified") {
          return json_to_py(ee::io::report_to_json(ee::bound::evaluate_bound(
              k, R, profile, led, ee::bound::BoundMode::certified_envelope)));
        }
        if (mode != "empirical")
          throw std::invalid_argument("mode must be certified|empirical");
        const auto params = ee::bound::compute_parameters(k, R, profile, led);
        const auto dual = ee::lattice::DiagonalForm::dual(profile);
        const auto spec = ee::lattice::spectrum(dual, params.y * 1.0625);
        return json_to_py(ee::io::report_to_json(ee::bound::evaluate_bound(
            k, R, profile, led, ee::bound::BoundMode::empirical_spectrum, &spec)));
      },
      py::arg("k"), py::arg("R"), py::arg("eps"), py::arg("mode") = "certified",
      py::arg("ledger") = py::dict(),
      "full bound report (J terms, integrals, ledger snapshot) as a dict");
  m.def(
      "regime_check",
      [](int k, double R, const py::dict& ledger) {
        const auto r = ee::bound::regime_check(k, R, ledger_from_dict(ledger));
        py::dict out;
        out["primary"] = r.primary;
        out["alternate"] = r.alternate;
        out["label"] = r.label;
        return out;
      },
      py::arg("k"), py::arg("R"), py::arg("ledger") = py::dict());

#ifdef EE_VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(EE_VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
