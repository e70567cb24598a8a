#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ttl/error.hpp"
#include "ttl/hecke.hpp"
#include "ttl/job.hpp"
#include "ttl/json_io.hpp"
#include "ttl/lfactor.hpp"
#include "ttl/transfer.hpp"
#include "ttl/weil.hpp"

namespace py = pybind11;
using namespace ttl;

// Values cross the boundary as JSON text; the Python package wraps this in dicts.
namespace {

Json parse(const std::string& s) {
  try {
    return Json::parse(s);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
}

QuadSpace space(const std::string& s) { return quadspace_from_json(parse(s)); }
SchwartzFn phi(const std::string& s, const QuadSpace& Q) { return schwartz_from_json(parse(s), Q.p()); }
Rational rat(const std::string& s) { return rational_from_json(parse(s)); }

Json density_json(const DensityResult& d) {
  return {{"value", cycnum_to_json(d.value)}, {"stabilized_at", d.stabilized_at}, {"certified", d.certified}};
}

Json lvalue_json(const LFactorValue& v) {
  Json j{{"approx", {v.approx.real(), v.approx.imag()}}, {"description", v.description}};
  if (v.exact) j["exact"] = cycnum_to_json(*v.exact);
  return j;
}

SatakeData satake(long p, const std::string& alpha) {
  Json a = parse(alpha);
  if (a.is_array()) return SatakeData::numeric(p, {a.at(0).get<double>(), a.at(1).get<double>()});
  return SatakeData::exact(p, cycnum_from_json(a));
}

MetaplecticConvention convention(const std::string& c) {
  if (c == "shimura") return MetaplecticConvention::Shimura;
  if (c == "same-shape") return MetaplecticConvention::SameShape;
  throw Error(ErrorKind::ConfigError, "unknown metaplectic convention " + c);
}

}  // namespace

PYBIND11_MODULE(_ttl, m) {
  static py::exception<Error> err(m, "TtlError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object kind = py::str(error_name(e.kind()));
      PyErr_SetObject(err.ptr(), py::make_tuple(kind, py::str(e.what())).ptr());
    }
  });

  m.def("quadspace", [](const std::string& s) { return quadspace_to_json(space(s)).dump(); });
  m.def("basic_phi", [](const std::string& s) { return schwartz_to_json(basic_phi(space(s))).dump(); });
  m.def("cycnum_add", [](const std::string& a, const std::string& b) {
    return cycnum_to_json(cycnum_from_json(parse(a)) + cycnum_from_json(parse(b))).dump();
  });
  m.def("cycnum_mul", [](const std::string& a, const std::string& b) {
    return cycnum_to_json(cycnum_from_json(parse(a)) * cycnum_from_json(parse(b))).dump();
  });
  m.def("cycnum_str", [](const std::string& a) { return to_string(cycnum_from_json(parse(a))); });
  m.def("fourier", [](const std::string& f, const std::string& q) {
    QuadSpace Q = space(q);
    return schwartz_to_json(act_weyl(phi(f, Q), Q)).dump();
  });
  m.def("weil_index", [](const std::string& q) { return cycnum_to_json(weil_index(space(q))).dump(); });
  m.def("p_value",
        [](const std::string& f, const std::string& g, const std::string& q, bool allow_metaplectic) {
          QuadSpace Q = space(q);
          return cycnum_to_json(p_value(phi(f, Q), sl2_from_json(parse(g)), Q, allow_metaplectic)).dump();
        },
        py::arg("phi"), py::arg("g"), py::arg("space"), py::arg("allow_metaplectic") = false);
  m.def("fiber_volume", [](const std::string& f, const std::string& a, const std::string& q, int m_max) {
    QuadSpace Q = space(q);
    return density_json(fiber_volume(Q, phi(f, Q), rat(a), m_max)).dump();
  });
  m.def("whittaker_orbital", [](const std::string& f, const std::string& a, const std::string& q, int n_max) {
    QuadSpace Q = space(q);
    return density_json(whittaker_orbital(phi(f, Q), rat(a), Q, n_max)).dump();
  });
  m.def("x_transfer_value", [](const std::string& f, const std::string& a, const std::string& q, int m_max) {
    QuadSpace Q = space(q);
    return cycnum_to_json(x_transfer_value(phi(f, Q), rat(a), Q, m_max)).dump();
  });
  m.def("hecke_translate", [](const std::string& f, const std::string& q) {
    QuadSpace Q = space(q);
    HeckeResult r = hecke_translate(phi(f, Q), Q);
    Json j{{"value", schwartz_to_json(r.value)},
           {"cosets", r.cosets.reps.size()},
           {"input_k_invariant", r.input_k_invariant},
           {"k_invariant", r.k_invariant}};
    return j.dump();
  });
  m.def("lx_sharp", [](const std::string& q, const std::string& alpha, const std::string& conv) {
    QuadSpace Q = space(q);
    return lvalue_json(lx_sharp(Q, satake(Q.p(), alpha), convention(conv))).dump();
  });
  m.def("x_volume_from_groups",
        [](const std::string& q) { return rational_to_json(x_volume_from_groups(space(q))).dump(); });
  m.def("assembly_check", [](const std::string& q, const std::string& alpha, const std::string& conv) {
    QuadSpace Q = space(q);
    AssemblyResult r = assembly_check(Q, satake(Q.p(), alpha), convention(conv));
    Json j{{"lhs", lvalue_json(r.lhs)}, {"rhs", lvalue_json(r.rhs)}, {"residual", r.residual}, {"pass", r.pass}};
    if (r.exact_equal) j["exact_equal"] = *r.exact_equal;
    return j.dump();
  });
  m.def("run_job", [](const std::string& cfg) {
    Report r;
    {
      py::gil_scoped_release release;
      r = run_job(parse_job_config(parse(cfg)));
    }
    return py::make_tuple(r.json.dump(), r.exit_code);
  });
}
