// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmcfg/disasm.hpp>

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace evmcfg
{
enum class Terminator
{
    Jump,
    CondJump,
    Halt,         ///< STOP, RETURN, REVERT, SELFDESTRUCT, INVALID or an undefined byte.
    FallThrough,  ///< Block ended because the next instruction is a leader (or code ended).
};

enum class EdgeKind
{
    JumpTaken,
    FallThrough,
};

enum class UnresolvedReason
{
    NoPrecedingPush,
    TargetNotJumpdest,
    TargetOutOfRange,
};

std::string_view to_string(Terminator t) noexcept;
std::string_view to_string(EdgeKind k) noexcept;
std::string_view to_string(UnresolvedReason r) noexcept;

/// Classifies the opcode ending a block. FallThrough for ordinary opcodes.
Terminator terminator_of(uint8_t opcode) noexcept;

/// A contiguous run [first, first + count) of the instruction stream.
struct BasicBlock
{
    size_t id = 0;
    size_t start_offset = 0;
    size_t first = 0;
    size_t count = 0;
    Terminator terminator = Terminator::FallThrough;

    friend bool operator==(const BasicBlock&, const BasicBlock&) = default;
};

struct CfgEdge
{
    size_t src = 0;
    size_t dst = 0;
    EdgeKind kind = EdgeKind::JumpTaken;

    friend auto operator<=>(const CfgEdge&, const CfgEdge&) = default;
};

struct UnresolvedJump
{
    size_t block = 0;
    UnresolvedReason reason = UnresolvedReason::NoPrecedingPush;

    friend bool operator==(const UnresolvedJump&, const UnresolvedJump&) = default;
};

struct JumpResolution
{
    std::vector<CfgEdge> edges;
    std::vector<UnresolvedJump> unresolved;
};

struct Cfg
{
    std::vector<Instruction> instructions;
    std::vector<BasicBlock> blocks;  ///< Address order; blocks[i].id == i.
    std::vector<CfgEdge> edges;      ///< Sorted, no duplicates.
    std::vector<UnresolvedJump> unresolved;

    [[nodiscard]] std::span<const Instruction> block_instructions(const BasicBlock& b) const
    {
        return std::span{instructions}.subspan(b.first, b.count);
    }
};

/// Leaders are offset 0, every JUMPDEST, and every instruction after a
/// terminator. Blocks are returned in address order with dense ids.
std::vector<BasicBlock> partition_blocks(std::span<const Instruction> instrs);

/// Direct targets only: a JUMP/JUMPI whose immediately preceding instruction
/// in the same block is a PUSH of the offset of a JUMPDEST.
JumpResolution resolve_jump_targets(
    std::span<const BasicBlock> blocks, std::span<const Instruction> instrs);

/// Adds a FallThrough edge from every CondJump/FallThrough block to the next
/// block in address order. Returns the merged, sorted, de-duplicated edge set.
std::vector<CfgEdge> add_sequential_edges(
    std::span<const BasicBlock> blocks, std::vector<CfgEdge> edges);

Cfg build_cfg(bytes_view runtime);

/// Blocks reachable from block 0 following both edge kinds.
std::vector<bool> reachable_blocks(const Cfg& cfg);

std::string to_dot(const Cfg& cfg);

/// `{ "blocks": [...], "edges": [...], "unresolved": [...] }`
nlohmann::json to_json(const Cfg& cfg);

/// Reads the interchange format back. Instructions are rebuilt from the
/// listed opcodes and immediates. Throws Error{MalformedFile}.
Cfg cfg_from_json(const nlohmann::json& j);
}  // namespace evmcfg
