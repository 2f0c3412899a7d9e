#include "apu/analysis.hpp"
#include "apu/config.hpp"
#include "apu/experiments.hpp"
#include "apu/mobility.hpp"
#include "apu/radio.hpp"
#include "apu/report_io.hpp"
#include "apu/simulator.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

namespace py = pybind11;
using namespace apu;

namespace {

ScenarioConfig scenario(const std::string& json, std::optional<std::uint64_t> seed,
                        std::optional<std::string> strategy)
{
    ScenarioConfig c = parse_scenario(json);
    if (seed) c.seed = *seed;
    if (strategy) c.strategy = strategy_from_string(*strategy);
    validate(c);
    return c;
}

py::dict to_dict(const MetricsReport& r)
{
    py::dict d;
    d["strategy"] = std::string(to_string(r.strategy));
    d["seed"] = r.seed;
    for (const auto& [name, value] : metric_values(r)) {
        if (value) d[py::str(name)] = *value;
        else d[py::str(name)] = py::none();
    }
    d["mobility_hash"] = r.mobility_hash;
    d["traffic_hash"] = r.traffic_hash;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Beaconing simulator and overhead model for geographic routing";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ModelDomainError>(m, "ModelDomainError", PyExc_ArithmeticError);

    m.def(
        "energy_cost",
        [](const std::string& op, std::size_t size) { return energy_cost(energy_op_from_string(op), size); },
        py::arg("op"), py::arg("size_bytes"));

    m.def(
        "predict_position",
        [](std::pair<double, double> position, std::pair<double, double> velocity, double timestamp, double now) {
            const Vec2 p = predict_position({{position.first, position.second}, {velocity.first, velocity.second}, timestamp},
                                            now);
            return std::pair{p.x, p.y};
        },
        py::arg("position"), py::arg("velocity"), py::arg("timestamp"), py::arg("now"));

    m.def("avg_distance", &avg_distance, py::arg("a"), py::arg("b"));
    m.def("hop_progress_fraction", &hop_progress_fraction, py::arg("radio_range"), py::arg("density"));
    m.def("avg_hops", &avg_hops, py::arg("distance"), py::arg("radio_range"), py::arg("density"));
    m.def("forwarding_ops", &forwarding_ops, py::arg("packet_rate"), py::arg("flow_count"), py::arg("duration"),
          py::arg("hops"));
    m.def("odl_overhead", &odl_overhead, py::arg("forwarding_ops"), py::arg("gamma"));
    m.def("total_overhead", &total_overhead, py::arg("mp_overhead"), py::arg("odl_overhead"));
    m.def(
        "monte_carlo_distance",
        [](double a, double b, std::size_t samples, std::uint64_t seed) {
            const MonteCarloEstimate e = monte_carlo_distance(a, b, samples, seed);
            return py::make_tuple(e.mean, e.standard_error, e.samples);
        },
        py::arg("a"), py::arg("b"), py::arg("samples"), py::arg("seed") = 1);

    m.def("normalize_scenario", [](const std::string& json) { return dump_scenario(parse_scenario(json)); },
          py::arg("scenario_json"), "Parses, validates and re-serializes a scenario with all defaults filled in.");

    m.def(
        "run",
        [](const std::string& json, std::optional<std::uint64_t> seed, std::optional<std::string> strategy,
           std::optional<std::string> out) {
            const ScenarioConfig c = scenario(json, seed, strategy);
            MetricsReport r;
            {
                py::gil_scoped_release release;
                r = apu::run(c);
                if (out) emit_report(r, *out);
            }
            return to_dict(r);
        },
        py::arg("scenario_json") = "{}", py::arg("seed") = py::none(), py::arg("strategy") = py::none(),
        py::arg("out") = py::none());

    m.def(
        "compare",
        [](const std::string& json, const std::vector<std::string>& names, std::optional<std::uint64_t> seed,
           unsigned jobs) {
            const ScenarioConfig c = scenario(json, seed, std::nullopt);
            std::vector<Strategy> strategies;
            for (const std::string& n : names) strategies.push_back(strategy_from_string(n));
            std::vector<MetricsReport> reports;
            {
                py::gil_scoped_release release;
                reports = apu::compare(c, strategies, jobs);
            }
            py::list out;
            for (const MetricsReport& r : reports) out.append(to_dict(r));
            return out;
        },
        py::arg("scenario_json") = "{}", py::arg("strategies") = std::vector<std::string>{"PB", "DB", "SB", "APU"},
        py::arg("seed") = py::none(), py::arg("jobs") = 0);
}
