#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "normsurf/branched.hpp"
#include "normsurf/errors.hpp"
#include "normsurf/genus.hpp"
#include "normsurf/hilbert.hpp"
#include "normsurf/json_io.hpp"
#include "normsurf/normal_coords.hpp"
#include "normsurf/surface_topology.hpp"
#include "normsurf/triangulation.hpp"

namespace py = pybind11;
using namespace normsurf;
using io::json;

namespace {

py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& x : j) out.append(to_py(x));
      return std::move(out);
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return std::move(out);
    }
    default: return py::none();
  }
}

SurfaceVector to_vector(const std::vector<std::int64_t>& coords) {
  return SurfaceVector::from_coords(coords);
}

std::vector<std::int64_t> to_list(const SurfaceVector& v) {
  return {v.coords().begin(), v.coords().end()};
}

std::vector<SurfaceVector> to_vectors(const std::vector<std::vector<std::int64_t>>& vs) {
  std::vector<SurfaceVector> out;
  for (const auto& v : vs) out.push_back(to_vector(v));
  return out;
}

DiskDirection parse_direction(const std::string& d) {
  if (d == "inward") return DiskDirection::inward;
  if (d == "outward") return DiskDirection::outward;
  throw py::value_error("direction must be 'inward' or 'outward'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Normal and almost normal surface toolkit";

  static py::handle base = py::exception<Error>(m, "Error").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = base(py::str(e.what()));
      err.attr("code") = e.code();
      PyErr_SetObject(base.ptr(), err.ptr());
    }
  });

  py::class_<Triangulation>(m, "Triangulation")
      .def_static("parse", &parse_triangulation, py::arg("text"))
      .def_property_readonly("num_tets", &Triangulation::num_tets)
      .def("serialize", &serialize_triangulation)
      .def("is_orientable", &is_orientable)
      .def("is_one_vertex", &is_one_vertex)
      .def("skeleton", [](const Triangulation& t) { return to_py(io::skeleton_json(compute_skeleton(t))); })
      .def("relabeled", &Triangulation::relabeled, py::arg("relabel"));

  m.def("matching_system", [](const Triangulation& t) { return to_py(io::matching_json(matching_system(t))); });
  m.def("vertex_link", [](const Triangulation& t) { return to_list(vertex_link(t)); });
  m.def("is_admissible", [](const Triangulation& t, const std::vector<std::int64_t>& v) {
    return to_py(io::admissibility_json(check_admissible(to_vector(v), matching_system(t))));
  });
  m.def("haken_sum", [](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    return to_list(haken_sum(to_vector(a), to_vector(b)));
  });
  m.def("weight", [](const std::vector<std::int64_t>& v) { return weight(to_vector(v)); });

  m.def(
      "enumerate",
      [](const Triangulation& t, const std::string& mode, int workers) {
        EnumerationLimits lim;
        lim.workers = workers;
        const auto sys = matching_system(t);
        if (mode == "vertex") {
          std::vector<std::vector<std::int64_t>> out;
          for (const auto& v : enumerate_vertex_solutions(t, sys, lim)) out.push_back(to_list(v));
          return py::object(py::cast(out));
        }
        if (mode != "fundamental") throw py::value_error("mode must be 'vertex' or 'fundamental'");
        auto fund = enumerate_fundamental(t, sys, lim);
        classify_fundamental(t, fund);
        py::dict d;
        std::vector<std::vector<std::int64_t>> members;
        for (const auto& v : fund.members) members.push_back(to_list(v));
        d["members"] = members;
        d["tori"] = fund.tori;
        d["non_tori"] = fund.non_tori;
        d["other"] = fund.other;
        return py::object(d);
      },
      py::arg("tri"), py::arg("mode") = "fundamental", py::arg("workers") = 1);

  m.def("euler", [](const Triangulation& t, const std::vector<std::int64_t>& v) {
    return euler_functional(t).evaluate(to_vector(v));
  });
  m.def("classify", [](const Triangulation& t, const std::vector<std::int64_t>& v) {
    py::list out;
    for (const auto& c : classify_components(t, reconstruct(t, to_vector(v))))
      out.append(to_py(io::component_json(c)));
    return out;
  });
  m.def("decompose", [](const Triangulation& t, const std::vector<std::int64_t>& v) {
    auto fund = enumerate_fundamental(t, matching_system(t));
    return to_py(io::decomposition_terms_json(decompose(to_vector(v), fund)));
  });
  m.def("intersect", [](const Triangulation& t, const std::vector<std::vector<std::int64_t>>& vs) {
    return to_py(io::intersection_json(intersection_complexity(t, to_vectors(vs))));
  });

  m.def("carrier", [](const Triangulation& t, const std::vector<int>& columns) {
    return to_py(io::carrier_json(build_carrier(t, columns)));
  });
  m.def(
      "flare_check",
      [](const Triangulation& t, const std::vector<int>& columns, int component,
         const std::string& direction, std::int64_t max_weight, int workers) {
        const auto car = build_carrier(t, columns);
        const auto dir = parse_direction(direction);
        const auto r = disk_search(car, component, dir, max_weight, workers);
        auto j = io::disk_result_json(r);
        j["verified"] = r.disk ? verify_disk(car, component, dir, *r.disk, max_weight) : false;
        return to_py(j);
      },
      py::arg("tri"), py::arg("support"), py::arg("component") = 0,
      py::arg("direction") = "outward", py::arg("max_weight") = 10, py::arg("workers") = 1);

  m.def("balanced_reduce", [](const std::string& signs) {
    return balanced_reduce(BalancedSequence::parse(signs));
  });
  m.def("regular_check", [](const Triangulation& t, const std::vector<std::vector<std::int64_t>>& tori) {
    return to_py(io::regular_json(regular_set_check(t, to_vectors(tori))));
  });
  m.def(
      "genus_scan",
      [](const Triangulation& t, std::int64_t genus, std::int64_t coeff_bound, std::size_t limit,
         std::optional<std::int64_t> arc_budget) {
        auto fund = enumerate_fundamental(t, matching_system(t));
        classify_fundamental(t, fund);
        auto stream = candidate_stream(t, fund, genus, coeff_bound);
        py::list out;
        while (out.size() < limit) {
          auto d = stream.next();
          if (!d) break;
          d->arc_budget = arc_budget;
          out.append(to_py(io::decomposition_json(*d)));
        }
        return out;
      },
      py::arg("tri"), py::arg("genus") = 1, py::arg("coeff_bound") = 3,
      py::arg("limit") = static_cast<std::size_t>(1000), py::arg("arc_budget") = py::none());
}
