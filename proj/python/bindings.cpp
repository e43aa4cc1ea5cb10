#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "genpatch/common.hpp"
#include "genpatch/edit_script.hpp"
#include "genpatch/engine.hpp"
#include "genpatch/lang.hpp"
#include "genpatch/pattern.hpp"
#include "genpatch/pipeline.hpp"
#include "genpatch/repair.hpp"

namespace py = pybind11;
using namespace genpatch;

namespace {

py::dict site_dict(const MatchSite& s) {
  py::dict b;
  for (const auto& [name, v] : s.binding) b[py::str(name)] = v.text;
  py::dict d;
  d["rule"] = s.rule;
  d["function"] = s.function;
  d["bindings"] = b;
  return d;
}

py::list sites_of(const std::string& pattern, const std::string& source, bool oracle) {
  GenericPatch gp = parse_generic_patch(pattern);
  AstUnit unit = parse_unit(source, "input.c");
  py::list out;
  for (const auto& rule : gp.rules)
    for (const auto& s : oracle ? brute_force_match(rule, unit) : match_rule(rule, unit))
      out.append(site_dict(s));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generic patch mining, inference and application for C";

  static py::exception<Error> exc(m, "GenpatchError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(exc.ptr())(e.what());
      inst.attr("kind") = e.kind();
      PyErr_SetObject(exc.ptr(), inst.ptr());
    }
  });

  m.def("reprint", [](const std::string& src) { return print_unit(parse_unit(src)); },
        "Parse a C source and print it back.");
  m.def("canon", [](const std::string& src) { return canon(*parse_unit(src).root); },
        "Structural rendering of a whole source.");

  m.def("render_pattern", [](const std::string& text) { return render_generic_patch(parse_generic_patch(text)); });
  m.def("pattern_signature", [](const std::string& text) { return signature(parse_generic_patch(text)); });
  m.def("validate_pattern", [](const std::string& text) {
    py::list out;
    for (const auto& i : validate(parse_generic_patch(text)))
      out.append(py::make_tuple(i.severity == Issue::Severity::Error ? "error" : "warning", i.message));
    return out;
  });

  m.def("match", [](const std::string& pattern, const std::string& source) { return sites_of(pattern, source, false); },
        py::arg("pattern"), py::arg("source"));
  m.def("match_oracle", [](const std::string& pattern, const std::string& source) { return sites_of(pattern, source, true); },
        py::arg("pattern"), py::arg("source"));
  m.def("apply", [](const std::string& pattern, const std::string& source, const std::string& path) {
    PatchsetResult r = apply_patchset(parse_generic_patch(pattern), parse_unit(source, path));
    py::list sites, warnings;
    for (const auto& rr : r.rules) {
      sites.append(rr.sites);
      for (const auto& w : rr.warnings) warnings.append(w);
    }
    py::dict d;
    d["diff"] = r.diff;
    d["after"] = r.after;
    d["sites"] = sites;
    d["warnings"] = warnings;
    return d;
  }, py::arg("pattern"), py::arg("source"), py::arg("path") = "input.c");

  m.def("edit_script", [](const std::string& before, const std::string& after) {
    AstUnit a = parse_unit(before, "before.c"), b = parse_unit(after, "after.c");
    auto actions = diff_trees(a, *a.root, b, *b.root);
    return actions.empty() ? std::string() : serialize_script(actions);
  });
  m.def("reserialize_script", [](const std::string& text) { return serialize_script(parse_script(text)); });

  m.def("mine", [](const std::string& config) {
    PipelineConfig c = load_config(config);
    check_config(c, true);
    MineSummary s = run_mine(c);
    py::dict d;
    d["out"] = c.out;
    d["patches"] = s.patches;
    d["hunks"] = s.hunks;
    d["dropped"] = s.dropped;
    d["warnings"] = s.warnings;
    return d;
  });
  m.def("cluster", [](const std::string& out) {
    ClusterStats st = run_cluster(out);
    py::dict d;
    d["clusters"] = st.cluster_count;
    d["clusterable_hunks"] = st.clusterable_hunks;
    d["vertical"] = st.vertical;
    d["horizontal"] = st.horizontal;
    d["size_histogram"] = st.size_histogram;
    return d;
  });
  m.def("infer", [](const std::string& out, const std::string& db, double timeout, int jobs) {
    InferSummary s = run_infer(out, db, timeout, jobs);
    py::dict d;
    d["clusters"] = s.clusters;
    d["patches"] = s.patches;
    d["timed_out"] = s.timed_out;
    d["uncovered"] = s.uncovered;
    return d;
  }, py::arg("out"), py::arg("db"), py::arg("timeout") = 900.0, py::arg("jobs") = 1);
  m.def("stats", &render_stats);

  m.def("npc", [](const std::vector<std::string>& statuses) {
    RepairReport r;
    int i = 0;
    for (const auto& s : statuses) {
      CandidateOutcome o;
      o.index = ++i;
      if (s == "nonsensical") o.status = Status::Nonsensical;
      else if (s == "in-plausible") o.status = Status::Implausible;
      else if (s == "plausible") o.status = Status::Plausible;
      else if (s == "infrastructure-error") o.status = Status::Infrastructure;
      else throw Error("config", "unknown status '" + s + "'");
      r.outcomes.push_back(o);
    }
    compute_npc(r);
    return py::make_tuple(r.npc_all ? py::object(py::int_(*r.npc_all)) : py::none(),
                          r.npc_sensical ? py::object(py::int_(*r.npc_sensical)) : py::none());
  }, "(npc_all, npc_sensical) of an outcome sequence; None when nothing is plausible.");
}
