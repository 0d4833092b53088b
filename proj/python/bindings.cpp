#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "rmom/curvature.hpp"
#include "rmom/errors.hpp"
#include "rmom/harness.hpp"
#include "rmom/trace_io.hpp"

namespace py = pybind11;

namespace {

rmom::ExperimentConfig config_from(const py::dict& d) {
  rmom::ExperimentConfig cfg;
  std::vector<std::pair<std::string, std::string>> settings;
  for (const auto& [k, v] : d) {
    const std::string key = py::str(k);
    if (v.is_none()) continue;
    std::string text;
    if (py::isinstance<py::bool_>(v)) {
      text = v.cast<bool>() ? "true" : "false";
    } else if (py::isinstance<py::float_>(v)) {
      text = rmom::format_double(v.cast<double>());
    } else {
      text = py::str(v);
    }
    settings.emplace_back(key, text);
  }
  for (const auto& [k, v] : settings) {
    if (k == "problem") rmom::apply_setting(cfg, k, v);
  }
  for (const auto& [k, v] : settings) {
    if (k != "problem") rmom::apply_setting(cfg, k, v);
  }
  cfg.validate();
  return cfg;
}

py::dict trace_columns(const rmom::Trace& t) {
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  Eigen::VectorXd f_x(n), f_y(n), g(n), beta(n), a(n), big_a(n), c2(n), dist(n);
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> k(n), wall(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const rmom::IterRecord& r = t.rows[i];
    k(i) = r.k;
    f_x(i) = r.f_x;
    f_y(i) = r.f_y;
    g(i) = r.grad_norm_y;
    beta(i) = r.beta;
    a(i) = r.a_next;
    big_a(i) = r.big_a;
    c2(i) = r.cond2_margin;
    dist(i) = r.dist_x0;
    wall(i) = r.wall_ns;
  }
  py::dict out;
  out["k"] = k;
  out["f_x"] = f_x;
  out["f_y"] = f_y;
  out["grad_norm_y"] = g;
  out["beta"] = beta;
  out["a_next"] = a;
  out["big_a"] = big_a;
  out["cond2_margin"] = c2;
  out["dist_x0"] = dist;
  out["wall_ns"] = wall;
  return out;
}

/// Sphere and Euclidean points travel as 1-D arrays.
py::object as_array(const rmom::Manifold& m, const rmom::Matrix& a) {
  if (m.type() == rmom::ManifoldType::kSpd) return py::cast(a);
  return py::cast(rmom::Vector(a.col(0)));
}

rmom::Matrix as_coords(const rmom::Manifold& m, const rmom::Matrix& a) {
  if (m.type() != rmom::ManifoldType::kSpd && a.cols() != 1 && a.rows() == 1) {
    return a.transpose();
  }
  return a;
}

template <class M>
void bind_manifold(py::module_& mod, const char* name) {
  py::class_<M>(mod, name)
      .def(py::init<int>(), py::arg("d"))
      .def_property_readonly("dim", &M::dim)
      .def_property_readonly("tangent_dim", &M::tangent_dim)
      .def("exp",
           [](const M& m, const rmom::Matrix& x, const rmom::Matrix& v) {
             const rmom::Matrix xc = as_coords(m, x);
             return as_array(m, m.exp({xc}, {xc, as_coords(m, v)}).coords);
           })
      .def("log",
           [](const M& m, const rmom::Matrix& x, const rmom::Matrix& y) {
             const rmom::Point px{as_coords(m, x)};
             return as_array(m, m.log(px, rmom::Point{as_coords(m, y)}).coords);
           })
      .def("dist",
           [](const M& m, const rmom::Matrix& x, const rmom::Matrix& y) {
             return m.dist(rmom::Point{as_coords(m, x)}, rmom::Point{as_coords(m, y)});
           })
      .def("transport",
           [](const M& m, const rmom::Matrix& x, const rmom::Matrix& y, const rmom::Matrix& v) {
             const rmom::Matrix xc = as_coords(m, x);
             const rmom::Tangent t{xc, as_coords(m, v)};
             return as_array(m, m.transport({xc}, {as_coords(m, y)}, t).coords);
           })
      .def("inner",
           [](const M& m, const rmom::Matrix& x, const rmom::Matrix& u, const rmom::Matrix& v) {
             const rmom::Matrix xc = as_coords(m, x);
             return m.inner({xc}, {xc, as_coords(m, u)}, {xc, as_coords(m, v)});
           })
      .def("random_point", [](const M& m, std::uint64_t seed) {
        rmom::Rng rng(seed);
        return as_array(m, m.random_point(rng).coords);
      }, py::arg("seed") = 0);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Momentum methods on Riemannian manifolds";

  py::register_exception<rmom::ConfigError>(mod, "ConfigError", PyExc_ValueError);
  py::register_exception<rmom::DomainError>(mod, "DomainError", PyExc_ArithmeticError);
  py::register_exception<rmom::NumericalAbort>(mod, "NumericalAbort", PyExc_RuntimeError);

  bind_manifold<rmom::Sphere>(mod, "Sphere");
  bind_manifold<rmom::Spd>(mod, "Spd");
  bind_manifold<rmom::Euclidean>(mod, "Euclidean");

  mod.def(
      "curvature_constants",
      [](double k_min, double k_max, double diameter) {
        const rmom::CurvatureBounds b{k_min, k_max, diameter};
        const rmom::CurvatureConstants c = rmom::curvature_constants(b);
        py::dict out;
        out["zeta"] = c.zeta;
        out["delta"] = c.delta;
        out["discrepancy"] = c.discrepancy;
        out["horizon"] = c.horizon;
        out["rgd_dominance"] = rmom::rgd_dominance_check(b);
        return out;
      },
      py::arg("k_min"), py::arg("k_max"), py::arg("diameter"));

  mod.def("config_keys", &rmom::config_keys);

  mod.def("generate_instance", [](const py::dict& config) {
    return rmom::instance_to_json(rmom::generate_instance(config_from(config)));
  });

  mod.def(
      "run",
      [](const py::dict& config) {
        const rmom::ExperimentConfig cfg = config_from(config);
        const rmom::ProblemSetup setup = rmom::build_problem(cfg);
        rmom::RunOutput run;
        {
          py::gil_scoped_release release;
          run = rmom::execute(cfg, setup);
        }
        py::dict out;
        out["trace"] = trace_columns(run.trace);
        out["metric"] = Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
            run.metric.data(), static_cast<Eigen::Index>(run.metric.size())));
        out["final_f"] = run.trace.final_f;
        out["f_star"] = setup.witness.f_star;
        out["restarts"] = run.trace.restarts;
        out["manifest"] = rmom::manifest_json(cfg, setup, run);
        out["csv"] = rmom::trace_to_csv(run.trace.rows);
        if (run.certificate) {
          out["certificate"] = run.certificate->to_json();
          out["verdict"] = run.certificate->verdict();
        } else {
          out["certificate"] = py::none();
          out["verdict"] = py::none();
        }
        return out;
      },
      py::arg("config"));

  mod.def(
      "compare",
      [](const py::list& configs) {
        std::vector<rmom::ExperimentConfig> cfgs;
        for (const auto& c : configs) cfgs.push_back(config_from(c.cast<py::dict>()));
        rmom::CompareResult res;
        {
          py::gil_scoped_release release;
          res = rmom::compare(cfgs);
        }
        py::dict out;
        out["csv"] = res.csv;
        out["threshold"] = res.threshold;
        py::dict iters;
        for (const auto& [name, k] : res.iterations_to_threshold) iters[py::str(name)] = k;
        out["iterations_to_threshold"] = iters;
        return out;
      },
      py::arg("configs"));
}
