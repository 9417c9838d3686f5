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

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace evmcfg;

namespace
{
struct GlobalOptions
{
    uint64_t seed = 42;
    size_t max_nodes = default_max_nodes;
    std::string out;
    int verbosity = 0;
    unsigned jobs = 1;
};

struct InputOptions
{
    std::string file;
    std::string hex;
    std::string origin = "runtime";
};

struct ModelOptions
{
    int layers = 2;
    size_t hidden = 64;
    size_t epochs = 100;
    double lr = 1e-3;
    double threshold = 0.5;
};

std::string read_file(const std::string& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw Error{ErrorCode::Io, "cannot open '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content)
{
    if (path.empty() || path == "-")
    {
        std::cout << content;
        return;
    }
    std::ofstream out{path, std::ios::binary};
    if (!out || !(out << content))
        throw Error{ErrorCode::Io, "cannot write '" + path + "'"};
}

ContractSections load_sections(const InputOptions& in, const GlobalOptions& g)
{
    if (in.file.empty() == in.hex.empty())
        throw Error{ErrorCode::InvalidArgument, "give exactly one of an input file or --hex"};
    const auto text = in.hex.empty() ? read_file(in.file) : in.hex;
    const auto origin = parse_origin(in.origin);
    if (!origin)
        throw Error{ErrorCode::InvalidArgument, "origin must be 'runtime' or 'creation'"};
    auto sections = split_sections(parse_bytecode(text, *origin));
    if (g.verbosity > 0)
    {
        for (const auto& w : sections.warnings)
            std::cerr << "warning: " << w << "\n";
        std::cerr << "sections: deployment " << sections.deployment.size() << " B, runtime "
                  << sections.runtime.size() << " B, auxdata " << sections.auxdata.size() << " B\n";
    }
    return sections;
}

void report_skips(const PreprocessResult& r)
{
    for (const auto& s : r.skipped)
        std::cerr << "skipped " << s.id << ": " << s.reason << "\n";
}

std::vector<EncodedGraph> graphs_of(PreprocessResult&& r)
{
    std::vector<EncodedGraph> out;
    out.reserve(r.graphs.size());
    for (auto& p : r.graphs)
        out.push_back(std::move(p.graph));
    return out;
}

MetricsReport evaluate(const GcnModel& model, std::span<const EncodedGraph> graphs)
{
    if (graphs.empty())
        throw Error{ErrorCode::EmptyDataset, "no graphs to evaluate"};
    std::vector<int> preds;
    std::vector<int> labels;
    for (const auto& g : graphs)
    {
        preds.push_back(predict(model, g).label);
        labels.push_back(g.label.value_or(0));
    }
    return metrics(confusion(preds, labels));
}

struct Experiment
{
    GcnModel model;
    MetricsReport report;
    std::vector<double> loss_history;
};

Experiment run_experiment(std::span<const DatasetRecord> records, int layers, const ModelOptions& m,
    const GlobalOptions& g)
{
    if (records.empty())
        throw Error{ErrorCode::EmptyDataset, "corpus has no records"};
    const auto s = split(records, g.seed);
    const PreprocessOptions popts{g.max_nodes, false, g.jobs};
    auto train_pre = preprocess(select(records, s.train), popts);
    auto test_pre = preprocess(select(records, s.test), popts);
    report_skips(train_pre);
    report_skips(test_pre);
    const auto train_graphs = graphs_of(std::move(train_pre));
    const auto test_graphs = graphs_of(std::move(test_pre));

    GcnConfig cfg;
    cfg.num_hidden_layers = layers;
    cfg.hidden_width = m.hidden;
    cfg.input_width = g.max_nodes;
    cfg.seed = g.seed;
    cfg.threshold = m.threshold;

    TrainConfig tc;
    tc.learning_rate = m.lr;
    tc.epochs = m.epochs;
    tc.seed = g.seed;
    tc.classification_threshold = m.threshold;

    auto trained = train(GcnModel::initialize(cfg), train_graphs, tc);
    if (g.verbosity > 0)
    {
        for (size_t e = 0; e < trained.loss_history.size(); ++e)
            std::cerr << "layers " << layers << " epoch " << e + 1 << " loss " << trained.loss_history[e] << "\n";
    }
    auto report = evaluate(trained.model, test_graphs);
    return {std::move(trained.model), std::move(report), std::move(trained.loss_history)};
}

std::pair<int, int> parse_layer_range(const std::string& text)
{
    int lo = 0;
    int hi = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d..%d%c", &lo, &hi, &tail) == 2)
        ;
    else if (std::sscanf(text.c_str(), "%d%c", &lo, &tail) == 1)
        hi = lo;
    else
        throw Error{ErrorCode::InvalidArgument, "layer range must look like 3 or 1..6"};
    if (lo < min_hidden_layers || hi > max_hidden_layers || lo > hi)
        throw Error{ErrorCode::InvalidArgument, "layer range must lie within 1..6"};
    return {lo, hi};
}

std::string format_row(int layers, const MetricsReport& r)
{
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%6d  %8.2f  %6.2f  %9.2f  %6.2f\n", layers, 100 * r.accuracy,
        100 * r.recall, 100 * r.precision, 100 * r.f1);
    return buf;
}

void add_input(CLI::App* cmd, InputOptions& in)
{
    cmd->add_option("input", in.file, "Hex file (one contract)");
    cmd->add_option("--hex", in.hex, "Inline hex bytecode instead of a file");
    cmd->add_option("--origin", in.origin, "Whether the code includes the deployment prologue")
        ->check(CLI::IsMember({"runtime", "creation"}));
}

void add_model_options(CLI::App* cmd, ModelOptions& m)
{
    cmd->add_option("--hidden", m.hidden, "Hidden layer width")->check(CLI::PositiveNumber);
    cmd->add_option("--epochs", m.epochs, "Training epochs")->check(CLI::Range(1, 100000));
    cmd->add_option("--lr", m.lr, "Adam learning rate")->check(CLI::NonNegativeNumber);
    cmd->add_option("--threshold", m.threshold, "Classification threshold")->check(CLI::Range(0.0, 1.0));
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"EVM control-flow recovery and GCN timestamp-dependency classification"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Seed for every random choice")->envname("EVMCFG_SEED");
    app.add_option("--max-nodes", g.max_nodes, "Node limit and feature width")->check(CLI::PositiveNumber);
    app.add_option("-o,--out", g.out, "Output file (default stdout)");
    app.add_flag("-v,--verbose", g.verbosity, "More diagnostics on stderr");
    app.add_option("--jobs", g.jobs, "Preprocessing threads")->check(CLI::Range(1, 256));

    InputOptions in;
    bool as_json = false;

    auto* disasm = app.add_subcommand("disasm", "Disassemble runtime code");
    add_input(disasm, in);
    disasm->add_flag("--json", as_json, "Emit the instruction list as JSON");

    bool as_dot = false;
    auto* cfg_cmd = app.add_subcommand("cfg", "Recover the control-flow graph");
    add_input(cfg_cmd, in);
    cfg_cmd->add_flag("--dot", as_dot, "Graphviz output (default)");
    cfg_cmd->add_flag("--json", as_json, "JSON interchange output");

    std::optional<int> label;
    bool truncate = false;
    auto* encode_cmd = app.add_subcommand("encode", "Emit the normalized adjacency and features");
    add_input(encode_cmd, in);
    encode_cmd->add_option("--label", label, "Attach a 0/1 label")->check(CLI::Range(0, 1));
    encode_cmd->add_flag("--truncate", truncate, "Keep the first --max-nodes blocks instead of failing");

    std::string corpus;
    ModelOptions m;
    std::string metrics_out;
    auto* train_cmd = app.add_subcommand("train", "Train on 80% of a corpus and test on the rest");
    train_cmd->add_option("corpus", corpus, "JSONL corpus")->required();
    train_cmd->add_option("--layers", m.layers, "Hidden GCN layers")->check(CLI::Range(1, 6));
    add_model_options(train_cmd, m);
    train_cmd->add_option("--metrics", metrics_out, "Also write the metrics JSON here");

    std::string model_path;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a corpus");
    eval_cmd->add_option("model", model_path, "Checkpoint JSON")->required();
    eval_cmd->add_option("corpus", corpus, "JSONL corpus")->required();

    std::string layer_range = "1..6";
    bool csv = false;
    auto* sweep_cmd = app.add_subcommand("sweep-layers", "Retrain for each hidden layer count");
    sweep_cmd->add_option("corpus", corpus, "JSONL corpus")->required();
    sweep_cmd->add_option("--layers", layer_range, "Layer count or range, e.g. 1..6");
    sweep_cmd->add_flag("--csv", csv, "CSV output with raw fractions");
    add_model_options(sweep_cmd, m);

    size_t count = 400;
    double positive_fraction = 0.5;
    auto* synth_cmd = app.add_subcommand("synth", "Write a labelled synthetic corpus");
    synth_cmd->add_option("--count", count, "Number of contracts")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--positive-fraction", positive_fraction, "Share labelled 1")
        ->check(CLI::Range(0.0, 1.0));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try
    {
        if (disasm->parsed())
        {
            const auto sections = load_sections(in, g);
            const auto instrs = disassemble(sections.runtime);
            if (as_json)
            {
                auto j = nlohmann::json::array();
                for (const auto& i : instrs)
                    j.push_back(to_json(i));
                write_output(g.out, j.dump(2) + "\n");
            }
            else
                write_output(g.out, format_listing(instrs));
        }
        else if (cfg_cmd->parsed())
        {
            if (as_dot && as_json)
                throw Error{ErrorCode::InvalidArgument, "--dot and --json are exclusive"};
            const auto cfg = build_cfg(load_sections(in, g).runtime);
            write_output(g.out, as_json ? to_json(cfg).dump(2) + "\n" : to_dot(cfg));
        }
        else if (encode_cmd->parsed())
        {
            const auto cfg = build_cfg(load_sections(in, g).runtime);
            write_output(g.out, to_json(encode(cfg, g.max_nodes, label, truncate)).dump() + "\n");
        }
        else if (train_cmd->parsed())
        {
            if (g.out.empty() || g.out == "-")
                throw Error{ErrorCode::InvalidArgument, "train needs --out for the checkpoint"};
            const auto records = load_corpus(corpus);
            const auto ex = run_experiment(records, m.layers, m, g);
            write_output(g.out, to_json(ex.model).dump() + "\n");
            const auto report = to_json(ex.report).dump(2) + "\n";
            if (!metrics_out.empty())
                write_output(metrics_out, report);
            std::cout << report;
        }
        else if (eval_cmd->parsed())
        {
            const auto model = model_from_json(nlohmann::json::parse(read_file(model_path)));
            const auto records = load_corpus(corpus);
            if (records.empty())
                throw Error{ErrorCode::EmptyDataset, "corpus '" + corpus + "' has no records"};
            const bool width_given = app.get_option("--max-nodes")->count() > 0;
            auto pre = preprocess(records,
                {width_given ? g.max_nodes : model.config.input_width, false, g.jobs});
            report_skips(pre);
            const auto graphs = graphs_of(std::move(pre));
            write_output(g.out, to_json(evaluate(model, graphs)).dump(2) + "\n");
        }
        else if (sweep_cmd->parsed())
        {
            const auto [lo, hi] = parse_layer_range(layer_range);
            const auto records = load_corpus(corpus);
            std::string table = csv ? "layers,accuracy,recall,precision,f1\n"
                                    : "layers  accuracy  recall  precision      f1\n";
            for (int layers = lo; layers <= hi; ++layers)
            {
                const auto ex = run_experiment(records, layers, m, g);
                const auto& r = ex.report;
                if (csv)
                {
                    nlohmann::json row{r.accuracy, r.recall, r.precision, r.f1};
                    std::ostringstream line;
                    line << layers;
                    for (const auto& v : row)
                        line << "," << v.dump();
                    table += line.str() + "\n";
                }
                else
                    table += format_row(layers, r);
            }
            write_output(g.out, table);
        }
        else if (synth_cmd->parsed())
        {
            std::ostringstream os;
            write_corpus(os, synthetic_corpus(count, g.seed, positive_fraction));
            write_output(g.out, os.str());
        }
        return 0;
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::Io ? 2 : 1;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
