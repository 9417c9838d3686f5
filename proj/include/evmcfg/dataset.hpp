// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmcfg/bytecode.hpp>
#include <evmcfg/encode.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace evmcfg
{
struct DatasetRecord
{
    std::string id;
    std::string bytecode_hex;
    int label = 0;  ///< 1 = contains the target vulnerability.
    CodeOrigin origin = CodeOrigin::RuntimeOnly;

    friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

/// One JSON object per line:
/// `{"id": "...", "bytecode": "0x...", "label": 0, "origin": "runtime"}`.
/// Blank lines are skipped. Throws Error{MalformedRecord} naming the 1-based
/// line number.
std::vector<DatasetRecord> parse_corpus(std::istream& in);

/// Throws Error{Io} if the file cannot be opened.
std::vector<DatasetRecord> load_corpus(const std::filesystem::path& path);

nlohmann::json to_json(const DatasetRecord& r);
void write_corpus(std::ostream& out, std::span<const DatasetRecord> records);

/// Indices into the record list.
struct SplitDataset
{
    std::vector<size_t> train;
    std::vector<size_t> test;
    uint64_t seed = 0;
};

/// Stratified 8:2 split. |train| = round(0.8 N); each class gets floor(0.8 N_c)
/// training records and the leftover training slots go to the classes with
/// the largest fractional remainders (class 1 first on ties). Both lists are
/// shuffled. Throws Error{EmptyDataset}.
SplitDataset split(std::span<const DatasetRecord> records, uint64_t seed);

struct PreparedGraph
{
    std::string id;
    EncodedGraph graph;
};

struct SkippedRecord
{
    std::string id;
    std::string reason;  ///< Error code name followed by detail.
};

struct PreprocessResult
{
    std::vector<PreparedGraph> graphs;
    std::vector<SkippedRecord> skipped;
};

struct PreprocessOptions
{
    size_t max_nodes = default_max_nodes;
    bool truncate = false;
    unsigned jobs = 1;
};

/// parse -> split_sections -> build_cfg -> encode for every record. Records
/// that fail land in `skipped`; output order follows input order whatever
/// the job count.
PreprocessResult preprocess(std::span<const DatasetRecord> records, const PreprocessOptions& options = {});

std::vector<DatasetRecord> select(std::span<const DatasetRecord> records, std::span<const size_t> indices);

/// Labelled synthetic contracts for exercising the pipeline end to end. A
/// contract is labelled 1 iff TIMESTAMP appears in a block reachable from
/// the entry. Vulnerable contracts branch on the timestamp with a two-armed
/// conditional that rejoins; all contracts mix in guard checks, loops,
/// straight-line filler and (for some safe contracts) dead code that reads
/// TIMESTAMP but can never run.
std::vector<DatasetRecord> synthetic_corpus(size_t count, uint64_t seed, double positive_fraction = 0.5);
}  // namespace evmcfg
