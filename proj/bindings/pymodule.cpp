#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "leafspace/bundle.hpp"
#include "leafspace/completion.hpp"
#include "leafspace/error.hpp"
#include "leafspace/runner.hpp"
#include "leafspace/scenario_io.hpp"

namespace py = pybind11;
using namespace leafspace;

namespace {

Vec to_vec(const std::vector<double>& xs) { return Vec::from(xs); }

py::dict flow_py(const Scenario& sc, const std::vector<double>& coeff, double t,
                 const std::vector<double>& x0) {
    FlowOutcome f = flow(sc.algebra, to_vec(coeff), t, to_vec(x0));
    py::dict out;
    out["reached"] = f.reached();
    if (f.reached())
        out["endpoint"] = f.endpoint.to_std();
    else {
        out["escape_parameter"] = f.escape_parameter;
        out["last_inside"] = f.last_inside.to_std();
    }
    return out;
}

py::dict lift_py(const Scenario& sc, const std::vector<double>& delta,
                 const std::vector<double>& x0) {
    GroupPath path = GroupPath::linear(Vec::zero(sc.group.dim()), to_vec(delta));
    LiftResult r = lift_path(sc.algebra, path, to_vec(x0));
    py::dict out;
    out["liftable"] = r.liftable;
    if (r.liftable) {
        out["group_end"] = r.group_end.to_std();
        out["point_end"] = r.point_end.to_std();
    } else {
        out["escape_s"] = r.escape_s;
        out["escape_group"] = r.escape_group.to_std();
    }
    return out;
}

py::dict leaf_range_py(const Scenario& sc, const std::vector<double>& x0, double window) {
    LeafRange lr = leaf_range(sc.algebra, sc.group, to_vec(x0), window);
    py::dict out;
    out["complete"] = lr.complete;
    if (sc.group.dim() == 1) {
        out["t_plus"] = lr.t_plus();
        out["t_minus"] = lr.t_minus();
    }
    return out;
}

py::list recurrence_py(const Scenario& sc, const std::vector<double>& x0, int budget) {
    IntersectionSet rec = recurrence_set(sc.algebra, sc.group, to_vec(x0), budget);
    py::list members;
    for (const auto& m : rec.members) {
        py::dict e;
        e["point"] = m.point.to_std();
        e["deck"] = m.deck.to_std();
        members.append(e);
    }
    return members;
}

py::dict uniformity_py(const Scenario& sc, const std::vector<double>& x0, double radius,
                       int budget) {
    UniformityReport u = uniformity_check(sc.algebra, sc.group, to_vec(x0), radius, budget);
    py::dict out;
    out["uniform"] = u.uniform;
    out["properly_discontinuous"] = u.properly_discontinuous;
    out["isotropy_order"] = u.isotropy_order;
    out["word_classes"] = u.word_classes;
    return out;
}

py::tuple run_py(const py::dict& kw) {
    RunConfig cfg;
    auto get_str = [&](const char* key, std::string def) {
        return kw.contains(key) ? kw[key].cast<std::string>() : def;
    };
    cfg.command = get_str("command", "example");
    cfg.check = get_str("check", "");
    cfg.example_name = get_str("example", "");
    if (kw.contains("scenario_file")) cfg.scenario_file = kw["scenario_file"].cast<std::string>();
    if (kw.contains("n")) cfg.n = kw["n"].cast<int>();
    cfg.group = get_str("group", "circle");
    if (kw.contains("at")) cfg.at = to_vec(kw["at"].cast<std::vector<double>>());
    if (kw.contains("path_delta")) cfg.path_delta = kw["path_delta"].cast<double>();
    if (kw.contains("budget_K")) cfg.budget_K = kw["budget_K"].cast<int>();
    if (kw.contains("window_B")) cfg.window_B = kw["window_B"].cast<double>();
    if (kw.contains("grid")) cfg.grid_size = kw["grid"].cast<int>();
    if (kw.contains("samples")) cfg.sample_count = kw["samples"].cast<int>();
    if (kw.contains("tol")) cfg.tol = kw["tol"].cast<double>();
    if (kw.contains("seed")) cfg.seed = kw["seed"].cast<uint64_t>();
    if (kw.contains("out_dir")) cfg.out_dir = kw["out_dir"].cast<std::string>();
    if (kw.contains("recurrence")) cfg.want_recurrence = kw["recurrence"].cast<bool>();
    if (kw.contains("lift")) cfg.want_lift = kw["lift"].cast<bool>();
    if (kw.contains("atlas")) cfg.want_atlas = kw["atlas"].cast<bool>();
    if (kw.contains("limit_elements")) cfg.want_limit_elements = kw["limit_elements"].cast<bool>();
    RunResult res = run(cfg);
    return py::make_tuple(res.exit_code, res.report.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "numerical laboratory for incomplete Lie algebra actions and their completions";

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readonly("n", &Scenario::n)
        .def_property_readonly("group_dim", [](const Scenario& sc) { return sc.group.dim(); })
        .def_property_readonly("default_K", [](const Scenario& sc) { return sc.default_K; });

    m.def("scenario", [](const std::string& name, int n, const std::string& group) {
              return make_scenario(name, n, parse_group_kind(group));
          },
          py::arg("name"), py::arg("n") = 4, py::arg("group") = "circle");
    m.def("scenario_names", &scenario_names);
    m.def("flow", &flow_py, py::arg("scenario"), py::arg("coeff"), py::arg("t"), py::arg("x0"));
    m.def("lift", &lift_py, py::arg("scenario"), py::arg("delta"), py::arg("x0"));
    m.def("leaf_range", &leaf_range_py, py::arg("scenario"), py::arg("x0"),
          py::arg("window") = 10.0);
    m.def("recurrence", &recurrence_py, py::arg("scenario"), py::arg("x0"), py::arg("budget") = 8);
    m.def("uniformity", &uniformity_py, py::arg("scenario"), py::arg("x0"),
          py::arg("radius") = 0.05, py::arg("budget") = 8);
    m.def("run", &run_py, py::arg("config"));

    py::register_exception<leafspace::Error>(m, "LeafspaceError");
}
