#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hacomp/cli.hpp"
#include "hacomp/error.hpp"
#include "hacomp/example.hpp"
#include "hacomp/metrics.hpp"
#include "hacomp/stats.hpp"

namespace py = pybind11;
using namespace hacomp;

namespace {

py::dict to_dict(const ComplementarityBreakdown& b) {
    py::dict d;
    d["participant_id"] = b.participant_id;
    d["condition_id"] = b.condition_id;
    d["t_star"] = to_string(b.t_star);
    d["L_H"] = b.L_H;
    d["L_AI"] = b.L_AI;
    d["L_I"] = b.L_I;
    d["ctp"] = b.ctp;
    d["cp"] = b.cp;
    d["cp_inh"] = b.cp_inh;
    d["cp_coll"] = b.cp_coll;
    d["ce"] = b.ce;
    d["ce_inh"] = b.ce_inh;
    d["ce_coll"] = b.ce_coll;
    d["realization_ratio"] = b.realization_ratio;
    d["n_instances"] = b.n_instances;
    return d;
}

py::dict to_dict(const stats::TestResult& r) {
    py::dict d;
    d["test"] = stats::to_string(r.test_name);
    d["statistic"] = r.statistic;
    d["p_value"] = r.p_value;
    d["effect_size_d"] = r.effect_size_d;
    d["df"] = r.df;
    d["n_a"] = r.n_a;
    d["n_b"] = r.n_b;
    d["exact"] = r.exact;
    return d;
}

std::optional<Member> member(const std::optional<std::string>& name) {
    if (!name) return std::nullopt;
    if (*name == "AI") return Member::ai;
    if (*name == "H") return Member::human;
    throw ValidationError("t_star must be 'AI' or 'H', got '" + *name + "'");
}

stats::PowerDesign power_design(const std::string& s) {
    if (s == "two_sample") return stats::PowerDesign::two_sample;
    if (s == "one_sample") return stats::PowerDesign::one_sample;
    if (s == "mann_whitney") return stats::PowerDesign::mann_whitney;
    throw ValidationError("unknown design '" + s + "'");
}

stats::MwMethod mw_method(const std::string& s) {
    if (s == "automatic") return stats::MwMethod::automatic;
    if (s == "exact") return stats::MwMethod::exact;
    if (s == "asymptotic") return stats::MwMethod::asymptotic;
    throw ValidationError("unknown method '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Complementarity metrics for human-AI decision making";

    static py::exception<Error> base(m, "Error", PyExc_ValueError);
    static py::exception<IoError> io(m, "IoError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const IoError& e) {
            py::set_error(io, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });

    m.def(
        "breakdown",
        [](const std::vector<std::tuple<double, double, double>>& rows,
           const std::string& participant_id, const std::string& condition_id,
           const std::optional<std::string>& t_star) {
            std::vector<InstanceLosses> inst;
            inst.reserve(rows.size());
            for (const auto& [h, a, t] : rows) {
                inst.push_back({"i" + std::to_string(inst.size() + 1), h, a, t});
            }
            return to_dict(
                breakdown(ParticipantProfile(participant_id, condition_id, std::move(inst)),
                          member(t_star)));
        },
        py::arg("rows"), py::arg("participant_id") = "p1", py::arg("condition_id") = "c",
        py::arg("t_star") = py::none(),
        "Metrics of one participant from per-instance (human, ai, team) losses.");

    m.def("worked_example", [] { return to_dict(breakdown(worked_example_profile())); });

    m.def(
        "sample_size",
        [](double d, double alpha, double power, int comparisons, const std::string& design) {
            stats::PowerRequest req;
            req.d = d;
            req.alpha = alpha;
            req.power = power;
            req.comparisons = comparisons;
            req.design = power_design(design);
            const auto s = stats::sample_size(req);
            py::dict out;
            out["per_group"] = s.per_group;
            out["total"] = s.total;
            out["achieved_power"] = s.achieved_power;
            return out;
        },
        py::arg("d") = 0.8, py::arg("alpha") = 0.05, py::arg("power") = 0.8,
        py::arg("comparisons") = 1, py::arg("design") = "two_sample");

    m.def(
        "t_test",
        [](const std::vector<double>& a, const std::vector<double>& b, bool welch) {
            return to_dict(stats::t_test(a, b, welch ? stats::Variance::welch
                                                     : stats::Variance::pooled));
        },
        py::arg("a"), py::arg("b"), py::arg("welch") = false);

    m.def(
        "t_test_one_sample",
        [](const std::vector<double>& a, double reference) {
            return to_dict(stats::t_test(a, reference));
        },
        py::arg("a"), py::arg("reference"));

    m.def(
        "mann_whitney_u",
        [](const std::vector<double>& a, const std::vector<double>& b, const std::string& method) {
            return to_dict(stats::mann_whitney_u(a, b, mw_method(method)));
        },
        py::arg("a"), py::arg("b"), py::arg("method") = "automatic");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args, const std::string& stdin_text) {
            std::istringstream in(stdin_text);
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli::run(args, in, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), py::arg("stdin") = "",
        "Runs a command-line invocation in-process; returns (exit_code, stdout, stderr).");
}
