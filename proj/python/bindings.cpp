// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/bytecode.hpp>
#include <evmcfg/cfg.hpp>
#include <evmcfg/dataset.hpp>
#include <evmcfg/disasm.hpp>
#include <evmcfg/encode.hpp>
#include <evmcfg/error.hpp>
#include <evmcfg/gcn.hpp>
#include <evmcfg/metrics.hpp>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace evmcfg;

namespace
{
// JSON crosses the boundary as text and is decoded with the json module, so
// the Python side sees plain dicts and lists.
py::object to_py(const nlohmann::json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_py(const py::object& o)
{
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

bytes to_bytes(const py::bytes& b)
{
    const auto s = static_cast<std::string>(b);
    return bytes(s.begin(), s.end());
}
}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "EVM control-flow recovery and GCN contract classification";

    // The module attribute keeps the type alive.
    static PyObject* error_type = py::exception<Error>(m, "EvmcfgError", PyExc_ValueError).ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const Error& e)
        {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("code") = std::string{to_string(e.code())};
            PyErr_SetObject(error_type, exc.ptr());
        }
    });

    py::enum_<CodeOrigin>(m, "CodeOrigin")
        .value("RuntimeOnly", CodeOrigin::RuntimeOnly)
        .value("CreationWithDeploy", CodeOrigin::CreationWithDeploy);

    m.def("parse_hex", [](const std::string& text) {
        const auto b = parse_hex(text);
        return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
    });

    m.def(
        "split_sections",
        [](const py::bytes& code, CodeOrigin origin) {
            const auto s = split_sections(Bytecode{to_bytes(code), origin});
            const auto pyb = [](const evmcfg::bytes& b) {
                return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
            };
            py::dict d;
            d["deployment"] = pyb(s.deployment);
            d["runtime"] = pyb(s.runtime);
            d["auxdata"] = pyb(s.auxdata);
            d["warnings"] = s.warnings;
            return d;
        },
        py::arg("code"), py::arg("origin") = CodeOrigin::RuntimeOnly);

    m.def("disassemble", [](const py::bytes& code) {
        auto j = nlohmann::json::array();
        for (const auto& i : disassemble(to_bytes(code)))
            j.push_back(to_json(i));
        return to_py(j);
    });

    m.def("disassembly_listing", [](const py::bytes& code) {
        return format_listing(disassemble(to_bytes(code)));
    });

    m.def("build_cfg", [](const py::bytes& code) { return to_py(to_json(build_cfg(to_bytes(code)))); },
        "CFG in the JSON interchange layout");

    m.def("cfg_dot", [](const py::bytes& code) { return to_dot(build_cfg(to_bytes(code))); });

    m.def("normalize", &normalize, py::arg("adjacency"));

    py::class_<EncodedGraph>(m, "EncodedGraph")
        .def_readonly("a_hat", &EncodedGraph::a_hat)
        .def_readonly("features", &EncodedGraph::features)
        .def_readonly("label", &EncodedGraph::label)
        .def_property_readonly("num_nodes", &EncodedGraph::num_nodes)
        .def("to_json", [](const EncodedGraph& g) { return to_py(to_json(g)); });

    m.def(
        "encode",
        [](const py::bytes& code, size_t max_nodes, std::optional<int> label, bool truncate) {
            return encode(build_cfg(to_bytes(code)), max_nodes, label, truncate);
        },
        py::arg("runtime"), py::arg("max_nodes") = default_max_nodes, py::arg("label") = py::none(),
        py::arg("truncate") = false);

    py::class_<GcnConfig>(m, "GcnConfig")
        .def(py::init<>())
        .def_readwrite("num_hidden_layers", &GcnConfig::num_hidden_layers)
        .def_readwrite("hidden_width", &GcnConfig::hidden_width)
        .def_readwrite("input_width", &GcnConfig::input_width)
        .def_readwrite("seed", &GcnConfig::seed)
        .def_readwrite("threshold", &GcnConfig::threshold);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("classification_threshold", &TrainConfig::classification_threshold);

    py::class_<GcnModel>(m, "GcnModel")
        .def(py::init(&GcnModel::initialize), py::arg("config"))
        .def_readonly("config", &GcnModel::config)
        .def_readonly("layers", &GcnModel::layers)
        .def_readonly("readout", &GcnModel::readout)
        .def_readonly("bias", &GcnModel::bias)
        .def("logit", [](const GcnModel& model, const EncodedGraph& g) { return logit(model, g); })
        .def("predict",
            [](const GcnModel& model, const EncodedGraph& g) {
                const auto p = predict(model, g);
                return py::make_tuple(p.label, p.probability);
            })
        .def("to_json", [](const GcnModel& model) { return to_py(to_json(model)); })
        .def_static("from_json", [](const py::object& o) { return model_from_json(from_py(o)); });

    m.def(
        "train",
        [](const GcnModel& model, const std::vector<EncodedGraph>& graphs, const TrainConfig& config) {
            py::gil_scoped_release release;
            auto r = train(model, graphs, config);
            return std::make_pair(std::move(r.model), std::move(r.loss_history));
        },
        py::arg("model"), py::arg("graphs"), py::arg("config") = TrainConfig{});

    m.def("metrics", [](const std::vector<int>& predictions, const std::vector<int>& labels) {
        return to_py(to_json(metrics(confusion(predictions, labels))));
    });

    m.def("synthetic_corpus", [](size_t count, uint64_t seed, double positive_fraction) {
        auto out = py::list();
        for (const auto& r : synthetic_corpus(count, seed, positive_fraction))
            out.append(to_py(to_json(r)));
        return out;
    }, py::arg("count"), py::arg("seed") = 42, py::arg("positive_fraction") = 0.5);

    m.def(
        "load_corpus",
        [](const std::string& path) {
            auto out = py::list();
            for (const auto& r : load_corpus(path))
                out.append(to_py(to_json(r)));
            return out;
        },
        py::arg("path"));

    m.def(
        "preprocess",
        [](const std::string& path, size_t max_nodes, unsigned jobs) {
            const auto records = load_corpus(path);
            auto r = preprocess(records, {max_nodes, false, jobs});
            py::list graphs;
            for (auto& g : r.graphs)
                graphs.append(py::make_tuple(g.id, std::move(g.graph)));
            py::list skipped;
            for (const auto& s : r.skipped)
                skipped.append(py::make_tuple(s.id, s.reason));
            return py::make_tuple(graphs, skipped);
        },
        py::arg("path"), py::arg("max_nodes") = default_max_nodes, py::arg("jobs") = 1);
}
