// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/cfg.hpp>
#include <evmcfg/error.hpp>

#include <algorithm>
#include <sstream>

namespace evmcfg
{
namespace
{
const BasicBlock* block_at(std::span<const BasicBlock> blocks, size_t offset) noexcept
{
    const auto it = std::lower_bound(blocks.begin(), blocks.end(), offset,
        [](const BasicBlock& b, size_t off) { return b.start_offset < off; });
    if (it == blocks.end() || it->start_offset != offset)
        return nullptr;
    return &*it;
}

template <typename Enum, size_t N>
Enum enum_from_string(std::string_view s, const std::array<Enum, N>& values)
{
    for (const auto v : values)
    {
        if (to_string(v) == s)
            return v;
    }
    throw Error{ErrorCode::MalformedFile, "unknown enum value '" + std::string{s} + "'"};
}

uint8_t opcode_from_display_name(const std::string& name)
{
    if (const auto op = opcode_from_mnemonic(name))
        return *op;
    unsigned v = 0;
    if (std::sscanf(name.c_str(), "UNKNOWN(0x%2x)", &v) == 1 && v < 256)
        return static_cast<uint8_t>(v);
    throw Error{ErrorCode::MalformedFile, "unknown opcode '" + name + "'"};
}
}  // namespace

std::string_view to_string(Terminator t) noexcept
{
    switch (t)
    {
    case Terminator::Jump:
        return "Jump";
    case Terminator::CondJump:
        return "CondJump";
    case Terminator::Halt:
        return "Halt";
    case Terminator::FallThrough:
        break;
    }
    return "FallThrough";
}

std::string_view to_string(EdgeKind k) noexcept
{
    return k == EdgeKind::JumpTaken ? "JumpTaken" : "FallThrough";
}

std::string_view to_string(UnresolvedReason r) noexcept
{
    switch (r)
    {
    case UnresolvedReason::NoPrecedingPush:
        return "NoPrecedingPush";
    case UnresolvedReason::TargetNotJumpdest:
        return "TargetNotJumpdest";
    case UnresolvedReason::TargetOutOfRange:
        break;
    }
    return "TargetOutOfRange";
}

Terminator terminator_of(uint8_t opcode) noexcept
{
    switch (opcode)
    {
    case OP_JUMP:
        return Terminator::Jump;
    case OP_JUMPI:
        return Terminator::CondJump;
    case OP_STOP:
    case OP_RETURN:
    case OP_REVERT:
    case OP_SELFDESTRUCT:
    case OP_INVALID:
        return Terminator::Halt;
    default:
        return opcode_info(opcode).defined() ? Terminator::FallThrough : Terminator::Halt;
    }
}

std::vector<BasicBlock> partition_blocks(std::span<const Instruction> instrs)
{
    std::vector<BasicBlock> blocks;
    for (size_t i = 0; i < instrs.size(); ++i)
    {
        const bool leader = i == 0 || instrs[i].opcode == OP_JUMPDEST ||
                            terminator_of(instrs[i - 1].opcode) != Terminator::FallThrough;
        if (leader)
            blocks.push_back(BasicBlock{blocks.size(), instrs[i].offset, i, 0, Terminator::FallThrough});
        auto& b = blocks.back();
        ++b.count;
        b.terminator = terminator_of(instrs[i].opcode);
    }
    return blocks;
}

JumpResolution resolve_jump_targets(
    std::span<const BasicBlock> blocks, std::span<const Instruction> instrs)
{
    JumpResolution r;
    const size_t code_end = instrs.empty() ? 0 : instrs.back().end();
    for (const auto& b : blocks)
    {
        if (b.terminator != Terminator::Jump && b.terminator != Terminator::CondJump)
            continue;

        const auto unresolved = [&](UnresolvedReason why) { r.unresolved.push_back({b.id, why}); };

        if (b.count < 2 || !is_push(instrs[b.first + b.count - 2].opcode))
        {
            unresolved(UnresolvedReason::NoPrecedingPush);
            continue;
        }
        const auto target = instrs[b.first + b.count - 2].push_value();
        if (!target || *target >= code_end)
        {
            unresolved(UnresolvedReason::TargetOutOfRange);
            continue;
        }
        const auto* dst = block_at(blocks, static_cast<size_t>(*target));
        if (dst == nullptr || instrs[dst->first].opcode != OP_JUMPDEST)
        {
            unresolved(UnresolvedReason::TargetNotJumpdest);
            continue;
        }
        r.edges.push_back({b.id, dst->id, EdgeKind::JumpTaken});
    }
    return r;
}

std::vector<CfgEdge> add_sequential_edges(
    std::span<const BasicBlock> blocks, std::vector<CfgEdge> edges)
{
    for (size_t i = 0; i + 1 < blocks.size(); ++i)
    {
        const auto t = blocks[i].terminator;
        if (t == Terminator::CondJump || t == Terminator::FallThrough)
            edges.push_back({blocks[i].id, blocks[i + 1].id, EdgeKind::FallThrough});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

Cfg build_cfg(bytes_view runtime)
{
    Cfg cfg;
    cfg.instructions = disassemble(runtime);
    cfg.blocks = partition_blocks(cfg.instructions);
    auto jumps = resolve_jump_targets(cfg.blocks, cfg.instructions);
    cfg.edges = add_sequential_edges(cfg.blocks, std::move(jumps.edges));
    cfg.unresolved = std::move(jumps.unresolved);
    return cfg;
}

std::vector<bool> reachable_blocks(const Cfg& cfg)
{
    std::vector<bool> seen(cfg.blocks.size(), false);
    if (cfg.blocks.empty())
        return seen;
    std::vector<std::vector<size_t>> succ(cfg.blocks.size());
    for (const auto& e : cfg.edges)
        succ[e.src].push_back(e.dst);

    std::vector<size_t> work{0};
    seen[0] = true;
    while (!work.empty())
    {
        const auto b = work.back();
        work.pop_back();
        for (const auto s : succ[b])
        {
            if (!seen[s])
            {
                seen[s] = true;
                work.push_back(s);
            }
        }
    }
    return seen;
}

std::string to_dot(const Cfg& cfg)
{
    std::ostringstream os;
    os << "digraph cfg {\n";
    os << "  node [shape=box, fontname=\"monospace\"];\n";
    if (!cfg.unresolved.empty())
    {
        os << "  /* unresolved jumps:\n";
        for (const auto& u : cfg.unresolved)
            os << "     B" << u.block << ": " << to_string(u.reason) << "\n";
        os << "  */\n";
    }
    for (const auto& b : cfg.blocks)
    {
        os << "  B" << b.id << " [label=\"B" << b.id << "@" << b.start_offset << "\\l";
        for (const auto& in : cfg.block_instructions(b))
        {
            os << opcode_name(in.opcode);
            if (is_push(in.opcode))
                os << " " << to_hex(in.immediate);
            os << "\\l";
        }
        os << "\"];\n";
    }
    for (const auto& e : cfg.edges)
    {
        os << "  B" << e.src << " -> B" << e.dst
           << (e.kind == EdgeKind::JumpTaken ? " [style=solid];\n" : " [style=dashed];\n");
    }
    os << "}\n";
    return os.str();
}

nlohmann::json to_json(const Cfg& cfg)
{
    using nlohmann::json;
    json blocks = json::array();
    for (const auto& b : cfg.blocks)
    {
        json instrs = json::array();
        for (const auto& in : cfg.block_instructions(b))
            instrs.push_back(to_json(in));
        blocks.push_back({{"id", b.id}, {"start", b.start_offset},
            {"terminator", to_string(b.terminator)}, {"instructions", std::move(instrs)}});
    }
    json edges = json::array();
    for (const auto& e : cfg.edges)
        edges.push_back({{"src", e.src}, {"dst", e.dst}, {"kind", to_string(e.kind)}});
    json unresolved = json::array();
    for (const auto& u : cfg.unresolved)
        unresolved.push_back({{"block", u.block}, {"reason", to_string(u.reason)}});
    return {{"blocks", std::move(blocks)}, {"edges", std::move(edges)},
        {"unresolved", std::move(unresolved)}};
}

Cfg cfg_from_json(const nlohmann::json& j)
{
    static constexpr std::array edge_kinds{EdgeKind::JumpTaken, EdgeKind::FallThrough};
    static constexpr std::array reasons{UnresolvedReason::NoPrecedingPush,
        UnresolvedReason::TargetNotJumpdest, UnresolvedReason::TargetOutOfRange};
    try
    {
        Cfg cfg;
        for (const auto& jb : j.at("blocks"))
        {
            BasicBlock b;
            b.id = jb.at("id").get<size_t>();
            b.start_offset = jb.at("start").get<size_t>();
            b.first = cfg.instructions.size();
            if (b.id != cfg.blocks.size())
                throw Error{ErrorCode::MalformedFile, "block ids must be dense and ordered"};
            for (const auto& ji : jb.at("instructions"))
            {
                Instruction in;
                in.offset = ji.at("offset").get<size_t>();
                in.opcode = opcode_from_display_name(ji.at("opcode").get<std::string>());
                if (const auto imm = ji.value("immediate", std::string{}); imm != "0x" && !imm.empty())
                    in.immediate = parse_hex(imm);
                in.truncated = ji.value("truncated", false);
                cfg.instructions.push_back(std::move(in));
            }
            b.count = cfg.instructions.size() - b.first;
            if (b.count == 0)
                throw Error{ErrorCode::MalformedFile, "empty block " + std::to_string(b.id)};
            b.terminator = terminator_of(cfg.instructions.back().opcode);
            cfg.blocks.push_back(b);
        }
        const auto check_id = [&](size_t id) {
            if (id >= cfg.blocks.size())
                throw Error{ErrorCode::MalformedFile, "edge references block " + std::to_string(id)};
            return id;
        };
        for (const auto& je : j.at("edges"))
        {
            cfg.edges.push_back({check_id(je.at("src").get<size_t>()),
                check_id(je.at("dst").get<size_t>()),
                enum_from_string(je.at("kind").get<std::string>(), edge_kinds)});
        }
        std::sort(cfg.edges.begin(), cfg.edges.end());
        cfg.edges.erase(std::unique(cfg.edges.begin(), cfg.edges.end()), cfg.edges.end());
        for (const auto& ju : j.value("unresolved", nlohmann::json::array()))
        {
            cfg.unresolved.push_back({check_id(ju.at("block").get<size_t>()),
                enum_from_string(ju.at("reason").get<std::string>(), reasons)});
        }
        return cfg;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error{ErrorCode::MalformedFile, e.what()};
    }
}
}  // namespace evmcfg
