#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sphiso/circle.hpp"
#include "sphiso/errors.hpp"
#include "sphiso/hardy.hpp"
#include "sphiso/polydisc.hpp"
#include "sphiso/runner.hpp"
#include "sphiso/spectra.hpp"
#include "sphiso/szego.hpp"

namespace py = pybind11;
using namespace sphiso;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

CArray to_numpy(const CMatrix& m) {
  CArray out({m.rows(), m.cols()});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v(i, j) = m(i, j);
  return out;
}

CMatrix from_numpy(const CArray& a) {
  if (a.ndim() != 2) throw PreconditionError("expected a 2-d array");
  auto v = a.unchecked<2>();
  CMatrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = v(i, j);
  return m;
}

LaurentPoly symbol(const std::string& text) { return parse_laurent(text, 1); }

py::object from_json(const json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

json to_cpp_json(const py::object& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Toeplitz algebras of spherical isometries";
  m.attr("__version__") = version();

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<ConditioningError>(m, "ConditioningError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());

  py::class_<LaurentPoly>(m, "Symbol")
      .def(py::init([](const std::string& text) { return symbol(text); }), py::arg("text"))
      .def("__str__", &LaurentPoly::to_string)
      .def("__repr__", [](const LaurentPoly& p) { return "Symbol('" + p.to_string() + "')"; })
      .def("__call__", [](const LaurentPoly& p, cplx z) { return p.eval(z); })
      .def("__eq__", [](const LaurentPoly& a, const LaurentPoly& b) { return a == b; })
      .def("__add__", [](const LaurentPoly& a, const LaurentPoly& b) { return a + b; })
      .def("__mul__", [](const LaurentPoly& a, const LaurentPoly& b) { return a * b; })
      .def("conj", &LaurentPoly::conj)
      .def("l1_norm", &LaurentPoly::l1_norm)
      .def("is_analytic", &LaurentPoly::is_analytic)
      .def_property_readonly("band", &LaurentPoly::max_abs_exponent)
      .def_property_readonly("coefficients", [](const LaurentPoly& p) {
        std::map<int, cplx> out;
        for (const auto& [e, c] : p.terms()) out[e[0]] = c;
        return out;
      });

  py::class_<ToeplitzElement>(m, "ToeplitzElement")
      .def(py::init([](const std::string& text) { return make_toeplitz(symbol(text)); }),
           py::arg("symbol"))
      .def(py::init([](const std::string& text, const CArray& f) {
             return ToeplitzElement(symbol(text), from_numpy(f));
           }),
           py::arg("symbol"), py::arg("correction"))
      .def_static("identity", &ToeplitzElement::identity)
      .def_static("unit", &ToeplitzElement::unit, py::arg("i"), py::arg("j"), py::arg("c") = cplx{1.0})
      .def_property_readonly("symbol", &ToeplitzElement::symbol)
      .def_property_readonly("correction", [](const ToeplitzElement& x) { return to_numpy(x.correction()); })
      .def("truncation", [](const ToeplitzElement& x, std::size_t n) { return to_numpy(x.truncation(n)); })
      .def("__matmul__", &mul)
      .def("__add__", [](const ToeplitzElement& a, const ToeplitzElement& b) { return a + b; })
      .def("__sub__", [](const ToeplitzElement& a, const ToeplitzElement& b) { return a - b; })
      .def("__mul__", [](const ToeplitzElement& a, cplx s) { return a * s; })
      .def("__rmul__", [](const ToeplitzElement& a, cplx s) { return s * a; })
      .def("__eq__", [](const ToeplitzElement& a, const ToeplitzElement& b) { return a == b; })
      .def("adjoint", &adjoint)
      .def("__repr__", [](const ToeplitzElement& x) {
        std::ostringstream os;
        os << "ToeplitzElement('" << x.symbol().to_string() << "', correction "
           << x.correction().rows() << "x" << x.correction().cols() << ")";
        return os.str();
      });

  m.def("symbol_map", &symbol_map);
  m.def("phi_map", &phi_map, "X -> T_z* X T_z");
  m.def("project", &project_phi, "projection onto Toeplitz operators");
  m.def("is_toeplitz", &is_toeplitz);
  m.def("semicommutator", [](const std::string& a, const std::string& b) {
    return semicommutator(symbol(a), symbol(b));
  });
  m.def("commutant_class", [](const ToeplitzElement& x, std::size_t truncation) {
    return to_string(commutant_character(x, truncation).classification);
  }, py::arg("x"), py::arg("truncation") = 256);
  m.def("cross_section_norms", [](const std::string& text, std::size_t max_trunc) {
    const auto r = cross_section_isometry(symbol(text), max_trunc, 1e-3);
    return py::make_tuple(r.truncations, r.lower_bounds, r.grid_sup);
  }, py::arg("symbol"), py::arg("max_truncation") = 256);

  m.def("symbol_eval", [](const std::string& text, int grid) {
    const auto r = eval_grid(symbol(text), grid);
    py::array_t<cplx> out(static_cast<py::ssize_t>(r.samples.size()));
    std::copy(r.samples.begin(), r.samples.end(), out.mutable_data());
    return out;
  }, py::arg("symbol"), py::arg("grid") = 1024);
  m.def("spectrum_membership", [](const std::string& text, cplx lambda, int grid) {
    return to_string(spectrum_membership(symbol(text), lambda, grid));
  }, py::arg("symbol"), py::arg("lam"), py::arg("grid") = 1024);

  m.def("sphere_moment", [](int n, const Exponent& alpha) {
    const Rational r = sphere_moment(n, alpha);
    return py::module_::import("fractions").attr("Fraction")(
        py::int_(py::str(numerator(r).str())), py::int_(py::str(denominator(r).str())));
  }, py::arg("n"), py::arg("alpha"));
  m.def("szego_defect", [](int n, int d) {
    const auto t = szego_tuple(n, d);
    const auto r = defect_report(t);
    py::dict out;
    out["interior"] = r.interior_defect;
    out["top_shell"] = r.top_shell_defect;
    out["off_diagonal"] = r.off_diagonal;
    out["commutator"] = commutator_defect(t);
    return out;
  });
  m.def("sphere_fixed_point_residual", [](const std::string& text, int n, int d) {
    const auto r = fixed_point_residual(toeplitz_graded(parse_bipoly(text, n), n, d), szego_tuple(n, d));
    return py::make_tuple(r.interior, r.boundary);
  }, py::arg("symbol"), py::arg("n"), py::arg("d"));

  m.def("gamma_residual", [](const std::vector<std::pair<ToeplitzElement, ToeplitzElement>>& terms,
                             std::size_t n) {
    TensorElement x;
    for (const auto& [a, b] : terms) x += TensorElement::elementary(a, b);
    const auto r = gamma_equation_residual(x, n);
    py::dict out;
    out["zero"] = r.residual.is_zero();
    out["bracket"] = py::make_tuple(r.bracket.lower, r.bracket.upper);
    out["verdict"] = to_string(r.verdict);
    return out;
  }, py::arg("terms"), py::arg("truncation") = 32);

  m.def("weighted_toeplitz", [](const std::string& text, const std::map<int, cplx>& density, int d) {
    return to_numpy(truncated_toeplitz(symbol(text), CircleMeasure(density), d));
  }, py::arg("symbol"), py::arg("density"), py::arg("d"));

  m.def("check_ids", [] {
    std::vector<std::string> ids;
    for (const auto& e : catalog()) ids.push_back(e.id);
    return ids;
  });
  m.def("explain", &explain);
  m.def("run_scenario", [](const py::object& scenario) {
    const Scenario s = scenario_from_json(to_cpp_json(scenario));
    RunResult r;
    {
      py::gil_scoped_release release;
      r = run_scenario(s);
    }
    return from_json(r.report);
  }, py::arg("scenario"), "run a scenario given as a dict; returns the report");
}
