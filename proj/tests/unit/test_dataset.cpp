// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/dataset.hpp>
#include <evmcfg/error.hpp>

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <fstream>
#include <set>
#include <sstream>

using namespace evmcfg;

namespace
{
std::vector<DatasetRecord> balanced(size_t n, size_t positives)
{
    std::vector<DatasetRecord> out;
    for (size_t i = 0; i < n; ++i)
        out.push_back({"r" + std::to_string(i), "0x00", i < positives ? 1 : 0, CodeOrigin::RuntimeOnly});
    return out;
}

size_t count_positive(std::span<const DatasetRecord> records, std::span<const size_t> idx)
{
    return static_cast<size_t>(std::count_if(idx.begin(), idx.end(), [&](size_t i) { return records[i].label == 1; }));
}
}  // namespace

TEST_CASE("parse_corpus")
{
    std::istringstream two{
        R"({"id": "a", "bytecode": "0x00", "label": 1})"
        "\n\n"
        R"({"id": "b", "bytecode": "6001", "label": 0, "origin": "creation"})"
        "\n"};
    const auto r = parse_corpus(two);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == DatasetRecord{"a", "0x00", 1, CodeOrigin::RuntimeOnly});
    CHECK(r[1].origin == CodeOrigin::CreationWithDeploy);

    std::istringstream bad_label{R"({"id": "a", "bytecode": "0x00", "label": 2})"};
    try
    {
        parse_corpus(bad_label);
        FAIL("no throw");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::MalformedRecord);
        CHECK(std::string{e.what()}.find("line 1") != std::string::npos);
    }

    std::istringstream not_json{"{"};
    CHECK_THROWS_AS(parse_corpus(not_json), Error);
    std::istringstream missing{R"({"id": "a", "label": 0})"};
    CHECK_THROWS_AS(parse_corpus(missing), Error);

    std::istringstream empty{""};
    CHECK(parse_corpus(empty).empty());
}

TEST_CASE("load_corpus and write_corpus")
{
    const auto path = std::filesystem::temp_directory_path() / "evmcfg_test_corpus.jsonl";
    const auto records = synthetic_corpus(12, 5);
    {
        std::ofstream out{path};
        write_corpus(out, records);
    }
    CHECK(load_corpus(path) == records);
    std::filesystem::remove(path);

    try
    {
        load_corpus(path);
        FAIL("no throw");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::Io);
    }
}

TEST_CASE("split")
{
    const auto ten = balanced(10, 5);
    const auto s = split(ten, 1);
    CHECK(s.train.size() == 8);
    CHECK(s.test.size() == 2);
    CHECK(count_positive(ten, s.train) == 4);
    CHECK(count_positive(ten, s.test) == 1);

    const auto big = balanced(1420, 472);
    const auto b = split(big, 42);
    CHECK(b.train.size() == 1136);
    CHECK(b.test.size() == 284);
    const auto train_pos = count_positive(big, b.train);
    CHECK(train_pos >= 377);
    CHECK(train_pos <= 378);
    CHECK(count_positive(big, b.test) == 472 - train_pos);

    const auto again = split(big, 42);
    CHECK(again.train == b.train);
    CHECK(again.test == b.test);
    CHECK(split(big, 43).train != b.train);
}

TEST_CASE("property: split is a stratified partition")
{
    std::mt19937_64 rng{19};
    for (int iter = 0; iter < 200; ++iter)
    {
        const size_t n = 1 + rng() % 300;
        const size_t pos = rng() % (n + 1);
        const auto records = balanced(n, pos);
        const auto s = split(records, rng());

        std::set<size_t> all(s.train.begin(), s.train.end());
        for (auto i : s.test)
            CHECK(all.insert(i).second);
        CHECK(all.size() == n);
        CHECK(*all.rbegin() == n - 1);
        CHECK(s.train.size() == (8 * n + 5) / 10);

        // Each class is within one record of an exact 80/20 share.
        const double want_pos = 0.8 * double(pos);
        CHECK(std::abs(double(count_positive(records, s.train)) - want_pos) < 1.0 + 1e-9);
    }
}

TEST_CASE("preprocess")
{
    std::vector<DatasetRecord> records = {
        {"ok", "0x6003565b00", 1, CodeOrigin::RuntimeOnly},
        {"empty", "", 0, CodeOrigin::RuntimeOnly},
        {"big", "0x5b5b5b5b", 0, CodeOrigin::RuntimeOnly},
        {"badhex", "0xzz", 0, CodeOrigin::RuntimeOnly},
    };
    const auto r = preprocess(records, {3, false, 1});
    REQUIRE(r.graphs.size() == 1);
    CHECK(r.graphs[0].id == "ok");
    CHECK(r.graphs[0].graph.label == 1);
    CHECK(r.graphs[0].graph.num_nodes() == 2);
    CHECK(r.graphs[0].graph.feature_width() == 3);
    REQUIRE(r.skipped.size() == 3);
    CHECK(r.skipped[0].id == "empty");
    CHECK(r.skipped[0].reason.rfind("EmptyRuntime", 0) == 0);
    CHECK(r.skipped[1].id == "big");
    CHECK(r.skipped[1].reason.rfind("TooManyNodes", 0) == 0);
    CHECK(r.skipped[2].reason.rfind("NonHexCharacter", 0) == 0);

    const auto truncated = preprocess(records, {3, true, 1});
    CHECK(truncated.graphs.size() == 2);
}

TEST_CASE("property: preprocess conserves records and is thread-count independent")
{
    auto records = synthetic_corpus(60, 3);
    records[7].bytecode_hex = "";
    records[20].bytecode_hex = "0x1";
    const auto one = preprocess(records, {64, false, 1});
    const auto four = preprocess(records, {64, false, 4});
    CHECK(one.graphs.size() + one.skipped.size() == records.size());
    REQUIRE(one.graphs.size() == four.graphs.size());
    for (size_t i = 0; i < one.graphs.size(); ++i)
    {
        CHECK(one.graphs[i].id == four.graphs[i].id);
        CHECK(one.graphs[i].graph.a_hat == four.graphs[i].graph.a_hat);
    }
    CHECK(one.skipped.size() == 2);
}

TEST_CASE("synthetic corpus labels follow reachable TIMESTAMP")
{
    const auto records = synthetic_corpus(300, 11);
    CHECK(records.size() == 300);
    CHECK(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.label == 1; }) == 150);
    CHECK(synthetic_corpus(300, 11) == records);

    size_t dead_timestamp = 0;
    for (const auto& r : records)
    {
        const auto sections = split_sections(parse_bytecode(r.bytecode_hex, r.origin));
        const auto g = build_cfg(sections.runtime);
        const auto live = reachable_blocks(g);
        bool reachable_ts = false;
        bool any_ts = false;
        for (const auto& b : g.blocks)
        {
            for (const auto& in : g.block_instructions(b))
            {
                if (in.opcode != OP_TIMESTAMP)
                    continue;
                any_ts = true;
                reachable_ts = reachable_ts || live[b.id];
            }
        }
        CHECK(reachable_ts == (r.label == 1));
        if (any_ts && r.label == 0)
            ++dead_timestamp;
        CHECK(g.blocks.size() <= default_max_nodes);
    }
    // Some safe contracts carry TIMESTAMP in dead code, so the byte alone does not decide the label.
    CHECK(dead_timestamp > 0);
}
