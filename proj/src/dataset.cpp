// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/cfg.hpp>
#include <evmcfg/dataset.hpp>
#include <evmcfg/error.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <thread>
#include <variant>

namespace evmcfg
{
namespace
{
DatasetRecord parse_record(const std::string& line, size_t line_no)
{
    const auto bad = [line_no](const std::string& why) {
        return Error{ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": " + why};
    };

    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(line);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw bad(e.what());
    }
    if (!j.is_object())
        throw bad("expected a JSON object");

    DatasetRecord r;
    if (!j.contains("id") || !j["id"].is_string())
        throw bad("missing string field 'id'");
    r.id = j["id"].get<std::string>();
    if (!j.contains("bytecode") || !j["bytecode"].is_string())
        throw bad("missing string field 'bytecode'");
    r.bytecode_hex = j["bytecode"].get<std::string>();
    if (!j.contains("label") || !j["label"].is_number_integer())
        throw bad("missing integer field 'label'");
    const auto label = j["label"].get<int64_t>();
    if (label != 0 && label != 1)
        throw bad("label must be 0 or 1, got " + std::to_string(label));
    r.label = static_cast<int>(label);
    if (j.contains("origin"))
    {
        const auto origin = j["origin"].is_string() ? parse_origin(j["origin"].get<std::string>())
                                                    : std::nullopt;
        if (!origin)
            throw bad("origin must be \"runtime\" or \"creation\"");
        r.origin = *origin;
    }
    return r;
}

bool is_blank(const std::string& s)
{
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

using Outcome = std::variant<EncodedGraph, std::string>;

Outcome prepare(const DatasetRecord& r, const PreprocessOptions& options)
{
    if (is_blank(r.bytecode_hex) || r.bytecode_hex == "0x" || r.bytecode_hex == "0X")
        return std::string{to_string(ErrorCode::EmptyRuntime)} + ": empty bytecode";
    try
    {
        const auto sections = split_sections(parse_bytecode(r.bytecode_hex, r.origin));
        const auto cfg = build_cfg(sections.runtime);
        return encode(cfg, options.max_nodes, r.label, options.truncate);
    }
    catch (const Error& e)
    {
        return std::string{e.what()};
    }
}
}  // namespace

std::vector<DatasetRecord> parse_corpus(std::istream& in)
{
    std::vector<DatasetRecord> records;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (is_blank(line))
            continue;
        records.push_back(parse_record(line, line_no));
    }
    return records;
}

std::vector<DatasetRecord> load_corpus(const std::filesystem::path& path)
{
    std::ifstream in{path};
    if (!in)
        throw Error{ErrorCode::Io, "cannot open corpus '" + path.string() + "'"};
    return parse_corpus(in);
}

nlohmann::json to_json(const DatasetRecord& r)
{
    return {{"id", r.id}, {"bytecode", r.bytecode_hex}, {"label", r.label},
        {"origin", to_string(r.origin)}};
}

void write_corpus(std::ostream& out, std::span<const DatasetRecord> records)
{
    for (const auto& r : records)
        out << to_json(r).dump() << '\n';
}

SplitDataset split(std::span<const DatasetRecord> records, uint64_t seed)
{
    if (records.empty())
        throw Error{ErrorCode::EmptyDataset, "cannot split an empty dataset"};

    std::array<std::vector<size_t>, 2> by_class;
    for (size_t i = 0; i < records.size(); ++i)
        by_class[records[i].label == 1 ? 1 : 0].push_back(i);

    // Integer arithmetic: 0.8 * N == 8N / 10.
    const size_t total_train = (8 * records.size() + 5) / 10;
    std::array<size_t, 2> train_count{};
    std::array<size_t, 2> remainder{};
    for (int c = 0; c < 2; ++c)
    {
        train_count[c] = 8 * by_class[c].size() / 10;
        remainder[c] = 8 * by_class[c].size() % 10;
    }
    size_t assigned = train_count[0] + train_count[1];
    const std::array<int, 2> priority =
        remainder[0] > remainder[1] ? std::array{0, 1} : std::array{1, 0};
    for (const int c : priority)
    {
        if (assigned < total_train && train_count[c] < by_class[c].size())
        {
            ++train_count[c];
            ++assigned;
        }
    }

    std::mt19937_64 rng{seed};
    SplitDataset s;
    s.seed = seed;
    for (int c = 1; c >= 0; --c)
    {
        auto& ids = by_class[c];
        std::shuffle(ids.begin(), ids.end(), rng);
        s.train.insert(s.train.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(train_count[c]));
        s.test.insert(s.test.end(), ids.begin() + static_cast<std::ptrdiff_t>(train_count[c]), ids.end());
    }
    std::shuffle(s.train.begin(), s.train.end(), rng);
    std::shuffle(s.test.begin(), s.test.end(), rng);
    return s;
}

std::vector<DatasetRecord> select(std::span<const DatasetRecord> records, std::span<const size_t> indices)
{
    std::vector<DatasetRecord> out;
    out.reserve(indices.size());
    for (const auto i : indices)
        out.push_back(records[i]);
    return out;
}

PreprocessResult preprocess(std::span<const DatasetRecord> records, const PreprocessOptions& options)
{
    std::vector<std::optional<Outcome>> outcomes(records.size());
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(records.size())));
    if (jobs <= 1)
    {
        for (size_t i = 0; i < records.size(); ++i)
            outcomes[i] = prepare(records[i], options);
    }
    else
    {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < jobs; ++t)
        {
            workers.emplace_back([&, t] {
                for (size_t i = t; i < records.size(); i += jobs)
                    outcomes[i] = prepare(records[i], options);
            });
        }
    }

    PreprocessResult result;
    for (size_t i = 0; i < records.size(); ++i)
    {
        if (auto* g = std::get_if<EncodedGraph>(&*outcomes[i]))
            result.graphs.push_back({records[i].id, std::move(*g)});
        else
            result.skipped.push_back({records[i].id, std::get<std::string>(*outcomes[i])});
    }
    return result;
}
}  // namespace evmcfg
