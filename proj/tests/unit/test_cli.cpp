// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/dataset.hpp>

#include <nlohmann/json.hpp>

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace
{
struct Result
{
    int status = -1;
    std::string out;
};

Result cli(const std::string& args)
{
    Result r;
    const std::string cmd = std::string{"'"} + EVMCFG_CLI_PATH + "' " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof(buf), p)) > 0)
        r.out.append(buf, n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

fs::path scratch()
{
    const auto dir = fs::temp_directory_path() / "evmcfg_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write(const std::string& name, const std::string& content)
{
    const auto p = scratch() / name;
    std::ofstream{p} << content;
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in{p};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("disasm")
{
    const auto hex = write("sample.hex", "6001600201\n");
    auto r = cli("disasm " + hex.string());
    CHECK(r.status == 0);
    CHECK(r.out == "0000: PUSH1 0x01\n0002: PUSH1 0x02\n0004: ADD\n");

    r = cli("disasm --json " + hex.string());
    CHECK(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.size() == 3);
    CHECK(j[2]["opcode"] == "ADD");

    r = cli("disasm " + (scratch() / "missing.hex").string());
    CHECK(r.status == 2);
    CHECK(r.out.find("error") != std::string::npos);

    r = cli("disasm --hex 0x6");
    CHECK(r.status == 1);
    CHECK(r.out.find("OddLength") != std::string::npos);
}

TEST_CASE("cfg")
{
    auto r = cli("cfg --hex 0x6003565b00");
    CHECK(r.status == 0);
    CHECK(r.out.find("B0 -> B1") != std::string::npos);
    CHECK(r.out.find("dashed") == std::string::npos);

    r = cli("cfg --json --hex 0x6003565b00");
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["blocks"].size() == 2);
    CHECK(j["edges"].size() == 1);

    r = cli("cfg --hex 0x80565b00");
    CHECK(r.out.find("NoPrecedingPush") != std::string::npos);
}

TEST_CASE("train, eval and flag validation")
{
    const auto dir = scratch();
    CHECK(cli("--seed 3 -o " + (dir / "toy.jsonl").string() + " synth --count 30").status == 0);
    const auto corpus = dir / "toy.jsonl";
    CHECK(evmcfg::load_corpus(corpus).size() == 30);

    auto r = cli("-o " + (dir / "m.json").string() + " train " + corpus.string() + " --layers 0");
    CHECK(r.status == 2);

    const std::string train = "--max-nodes 64 -o " + (dir / "m.json").string() + " train " + corpus.string() +
                              " --epochs 3 --hidden 8";
    const auto a = cli(train + " --metrics " + (dir / "metrics.json").string());
    REQUIRE(a.status == 0);
    const auto ckpt = slurp(dir / "m.json");
    const auto b = cli(train);
    CHECK(a.out == b.out);
    CHECK(ckpt == slurp(dir / "m.json"));
    CHECK(nlohmann::json::parse(slurp(dir / "metrics.json")) == nlohmann::json::parse(a.out));

    r = cli("eval " + (dir / "m.json").string() + " " + corpus.string());
    CHECK(r.status == 0);
    CHECK(nlohmann::json::parse(r.out).contains("f1"));

    r = cli("--max-nodes 32 eval " + (dir / "m.json").string() + " " + corpus.string());
    CHECK(r.status == 1);
    CHECK(r.out.find("ShapeMismatch") != std::string::npos);
    CHECK(r.out.find("64") != std::string::npos);
    CHECK(r.out.find("32") != std::string::npos);

    const auto empty = write("empty.jsonl", "");
    r = cli("eval " + (dir / "m.json").string() + " " + empty.string());
    CHECK(r.status == 1);
    CHECK(r.out.find("EmptyDataset") != std::string::npos);

    r = cli("--max-nodes 64 sweep-layers " + corpus.string() + " --layers 2 --epochs 2 --hidden 8 --csv");
    CHECK(r.status == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);

    r = cli("sweep-layers " + corpus.string() + " --layers 0..7");
    CHECK(r.status == 1);
}
