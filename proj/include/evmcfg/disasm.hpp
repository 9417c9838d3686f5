// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmcfg/bytecode.hpp>
#include <evmcfg/opcodes.hpp>

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace evmcfg
{
struct Instruction
{
    size_t offset = 0;
    uint8_t opcode = OP_STOP;
    bytes immediate;         ///< Push data; empty for non-PUSH opcodes.
    bool truncated = false;  ///< PUSH whose data runs past the end of code.

    [[nodiscard]] size_t size() const noexcept { return 1 + immediate.size(); }
    [[nodiscard]] size_t end() const noexcept { return offset + size(); }

    /// Big-endian value of the push data, if it fits in 64 bits.
    [[nodiscard]] std::optional<uint64_t> push_value() const noexcept;

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// Linear sweep. Never fails: undefined bytes decode as single-byte unknown
/// instructions and a PUSH cut off by the end of code keeps whatever data
/// bytes remain and is marked truncated.
std::vector<Instruction> disassemble(bytes_view code);

/// Inverse of disassemble().
bytes encode(const std::vector<Instruction>& instructions);

/// `<offset-hex>: <MNEMONIC>[ 0x<immediate-hex>]`
std::string format_instruction(const Instruction& instr);

std::string format_listing(const std::vector<Instruction>& instructions);

nlohmann::json to_json(const Instruction& instr);
}  // namespace evmcfg
