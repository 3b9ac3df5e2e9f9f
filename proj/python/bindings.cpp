#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "unidos/combinatorics.hpp"
#include "unidos/selftest.hpp"
#include "unidos/spectrum.hpp"
#include "unidos/thouless.hpp"
#include "unidos/transfer.hpp"

namespace py = pybind11;
using namespace unidos;

namespace {

PhaseField field_from(std::int64_t lo, std::vector<double> eta) { return PhaseField::from_eta(lo, std::move(eta)); }

}  // namespace

PYBIND11_MODULE(_unidos, m) {
  m.doc() = "Random five-diagonal unitary matrices";
  m.attr("__version__") = UNIDOS_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<Coefficients>(m, "Coefficients")
      .def(py::init<double, double>(), py::arg("r"), py::arg("t"))
      .def_static("from_r", &Coefficients::from_r)
      .def_static("balanced", &Coefficients::balanced)
      .def_property_readonly("r", &Coefficients::r)
      .def_property_readonly("t", &Coefficients::t)
      .def_property_readonly("tau", &Coefficients::tau)
      .def_property_readonly("band_edge", &Coefficients::band_edge)
      .def("__repr__", [](const Coefficients& c) {
        return "Coefficients(r=" + std::to_string(c.r()) + ", t=" + std::to_string(c.t()) + ")";
      });

  py::class_<DistributionSpec>(m, "Distribution")
      .def_static("uniform", &DistributionSpec::uniform)
      .def_static("point_mass", &DistributionSpec::point_mass)
      .def_static("arc", &DistributionSpec::arc, py::arg("center"), py::arg("half_width"))
      .def_static("fourier_density", &DistributionSpec::fourier_density, py::arg("A"), py::arg("B"),
                  py::arg("coefficients"))
      .def("characteristic", &DistributionSpec::characteristic)
      .def("density", &DistributionSpec::density)
      .def("__repr__", &DistributionSpec::describe);

  py::class_<PhaseModel>(m, "PhaseModel")
      .def_static("coupled", &PhaseModel::coupled, py::arg("theta"), py::arg("alpha"))
      .def_static("iid", &PhaseModel::iid, py::arg("eta"))
      .def_static("uniform", &PhaseModel::uniform)
      .def_static("free", &PhaseModel::free)
      .def("eta_samples",
           [](const PhaseModel& model, std::uint64_t seed, std::int64_t lo, std::int64_t hi) {
             auto f = PhaseField::materialize(PhaseSource(model, seed), Window{lo, hi});
             return f.eta_values();
           },
           py::arg("seed"), py::arg("lo"), py::arg("hi"))
      .def("__repr__", &PhaseModel::describe);

  m.def("transfer_matrix",
        [](double eta_even, double eta_odd, cplx z, const Coefficients& p) {
          Mat2 t = transfer_matrix(eta_even, eta_odd, SpectralParameter(z), p);
          return std::vector<std::vector<cplx>>{{t.a, t.b}, {t.c, t.d}};
        },
        py::arg("eta_even"), py::arg("eta_odd"), py::arg("z"), py::arg("params"));

  m.def("lyapunov",
        [](cplx z, const PhaseModel& model, const Coefficients& p, std::int64_t n_steps, int n_realizations,
           std::uint64_t seed, unsigned threads) {
          py::gil_scoped_release nogil;
          auto e = lyapunov_estimate(SpectralParameter(z), model, p,
                                     LyapunovBudget{n_steps, n_realizations, seed, MatrixNorm::operator2, threads});
          return std::make_pair(e.gamma, e.stderr_);
        },
        py::arg("z"), py::arg("model"), py::arg("params"), py::arg("n_steps") = 100000, py::arg("n_realizations") = 32,
        py::arg("seed") = 1, py::arg("threads") = 0);
  m.def("lyapunov_free", [](cplx z, const Coefficients& p) { return lyapunov_free(SpectralParameter(z), p); });

  m.def("free_dos", [](double lam, const Coefficients& p) {
    auto d = free_dos(lam, p);
    return std::make_pair(d.density, d.integrated);
  });
  m.def("free_moment", &free_moment);

  m.def("block_eigenphases",
        [](const Coefficients& p, std::int64_t lo, std::vector<double> eta, std::int64_t M, std::int64_t N) {
          return eigenphases(truncate(p, field_from(lo, std::move(eta)), M, N)).phases();
        },
        py::arg("params"), py::arg("lo"), py::arg("eta"), py::arg("M"), py::arg("N"),
        "Eigenphases of the truncation to [M+1, N]; eta[i] is the phase at site lo + i.");
  m.def("secular_roots",
        [](const Coefficients& p, std::int64_t lo, std::vector<double> eta, std::int64_t M, std::int64_t N) {
          return secular_roots(field_from(lo, std::move(eta)), p, M, N).roots;
        },
        py::arg("params"), py::arg("lo"), py::arg("eta"), py::arg("M"), py::arg("N"));
  m.def("pooled_eigenphases",
        [](const PhaseModel& model, const Coefficients& p, std::int64_t size, int n_realizations, std::uint64_t seed,
           unsigned threads) {
          py::gil_scoped_release nogil;
          return pooled_eigenphases(model, p, PoolBudget{size, 0, n_realizations, seed, threads}).phases();
        },
        py::arg("model"), py::arg("params"), py::arg("size") = 500, py::arg("n_realizations") = 100,
        py::arg("seed") = 1, py::arg("threads") = 0);
  m.def("dos_moments",
        [](const PhaseModel& model, const Coefficients& p, int s_max, int n_realizations, std::uint64_t seed) {
          py::gil_scoped_release nogil;
          return dos_moments(model, p, s_max, n_realizations, seed).m;
        },
        py::arg("model"), py::arg("params"), py::arg("s_max"), py::arg("n_realizations"), py::arg("seed") = 1);

  m.def("thouless_rhs",
        [](cplx z, std::vector<double> phases, const Coefficients& p) {
          return thouless_rhs(SpectralParameter(z), SpectralMeasure::from_phases(std::move(phases)), p);
        },
        py::arg("z"), py::arg("phases"), py::arg("params"));
  m.def("thouless_rhs_free", [](cplx z, const Coefficients& p) { return thouless_rhs_free(SpectralParameter(z), p); });

  m.def("path_sum_bruteforce", &path_sum_bruteforce, py::arg("n"), py::arg("j"), py::arg("params"),
        py::arg("start") = 0);
  m.def("gen_poly", [](int n, const Coefficients& p) {
    auto [pp, pm] = gen_poly(n, p);
    return std::make_pair(std::make_pair(pp.low(), pp.coefficients()), std::make_pair(pm.low(), pm.coefficients()));
  });
  m.def("s_center", [](int n, const Coefficients& p) { return s_center(n, p); });
  m.def("s_exact_balanced", [](int n, std::int64_t j) {
    auto v = s_exact_balanced(n, j);
    return std::make_pair(numerator(v.value).str(), denominator(v.value).str());
  });
  m.def("analyticity_margin", [](double A, double B, const Coefficients& p) {
    auto v = analyticity_margin(A, B, p);
    py::dict d;
    d["margin"] = v.margin;
    d["analytic"] = v.analytic;
    d["all_r"] = v.all_r;
    d["r_minus"] = v.r_minus ? py::cast(*v.r_minus) : py::none();
    d["r_plus"] = v.r_plus ? py::cast(*v.r_plus) : py::none();
    return d;
  });

  m.def("selftest", []() {
    std::vector<CheckResult> res;
    {
      py::gil_scoped_release nogil;
      res = run_selftest();
    }
    py::list out;
    for (const auto& r : res) out.append(py::make_tuple(r.name, r.pass, r.detail));
    return out;
  });
}
