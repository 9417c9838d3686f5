// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/opcodes.hpp>

#include <array>
#include <cstdio>

namespace evmcfg
{
namespace
{
struct NamedOpcode
{
    uint8_t byte;
    const char* name;
};

// Everything outside PUSH/DUP/SWAP/LOG, which are generated.
constexpr NamedOpcode named_opcodes[] = {
    {0x00, "STOP"}, {0x01, "ADD"}, {0x02, "MUL"}, {0x03, "SUB"}, {0x04, "DIV"}, {0x05, "SDIV"},
    {0x06, "MOD"}, {0x07, "SMOD"}, {0x08, "ADDMOD"}, {0x09, "MULMOD"}, {0x0a, "EXP"},
    {0x0b, "SIGNEXTEND"},

    {0x10, "LT"}, {0x11, "GT"}, {0x12, "SLT"}, {0x13, "SGT"}, {0x14, "EQ"}, {0x15, "ISZERO"},
    {0x16, "AND"}, {0x17, "OR"}, {0x18, "XOR"}, {0x19, "NOT"}, {0x1a, "BYTE"}, {0x1b, "SHL"},
    {0x1c, "SHR"}, {0x1d, "SAR"},

    {0x20, "SHA3"},

    {0x30, "ADDRESS"}, {0x31, "BALANCE"}, {0x32, "ORIGIN"}, {0x33, "CALLER"},
    {0x34, "CALLVALUE"}, {0x35, "CALLDATALOAD"}, {0x36, "CALLDATASIZE"},
    {0x37, "CALLDATACOPY"}, {0x38, "CODESIZE"}, {0x39, "CODECOPY"}, {0x3a, "GASPRICE"},
    {0x3b, "EXTCODESIZE"}, {0x3c, "EXTCODECOPY"}, {0x3d, "RETURNDATASIZE"},
    {0x3e, "RETURNDATACOPY"}, {0x3f, "EXTCODEHASH"},

    {0x40, "BLOCKHASH"}, {0x41, "COINBASE"}, {0x42, "TIMESTAMP"}, {0x43, "NUMBER"},
    {0x44, "DIFFICULTY"}, {0x45, "GASLIMIT"}, {0x46, "CHAINID"}, {0x47, "SELFBALANCE"},
    {0x48, "BASEFEE"},

    {0x50, "POP"}, {0x51, "MLOAD"}, {0x52, "MSTORE"}, {0x53, "MSTORE8"}, {0x54, "SLOAD"},
    {0x55, "SSTORE"}, {0x56, "JUMP"}, {0x57, "JUMPI"}, {0x58, "PC"}, {0x59, "MSIZE"},
    {0x5a, "GAS"}, {0x5b, "JUMPDEST"},

    {0xf0, "CREATE"}, {0xf1, "CALL"}, {0xf2, "CALLCODE"}, {0xf3, "RETURN"},
    {0xf4, "DELEGATECALL"}, {0xf5, "CREATE2"}, {0xfa, "STATICCALL"}, {0xfd, "REVERT"},
    {0xfe, "INVALID"}, {0xff, "SELFDESTRUCT"},
};

OpcodeCategory category_of(uint8_t b) noexcept
{
    if (b <= 0x0b)
        return OpcodeCategory::Arithmetic;
    if (b >= 0x10 && b <= 0x1d)
        return OpcodeCategory::Comparison;
    if (b == 0x20)
        return OpcodeCategory::Encryption;
    if (b >= 0x30 && b <= 0x3f)
        return OpcodeCategory::Environment;
    if (b >= 0x40 && b <= 0x48)
        return OpcodeCategory::Block;
    if (b >= 0x50 && b <= 0x5b)
        return OpcodeCategory::StorageExec;
    if (is_push(b))
        return OpcodeCategory::Push;
    if (b >= OP_DUP1 && b <= OP_DUP16)
        return OpcodeCategory::Dup;
    if (b >= OP_SWAP1 && b <= OP_SWAP16)
        return OpcodeCategory::Swap;
    if (b >= OP_LOG0 && b <= OP_LOG4)
        return OpcodeCategory::Log;
    return OpcodeCategory::System;
}

struct OpcodeTable
{
    std::array<std::string, 256> names;
    std::array<OpcodeInfo, 256> infos;
    int defined = 0;

    OpcodeTable()
    {
        for (const auto& op : named_opcodes)
            names[op.byte] = op.name;
        for (int k = 1; k <= 32; ++k)
            names[OP_PUSH1 + k - 1] = "PUSH" + std::to_string(k);
        for (int k = 1; k <= 16; ++k)
        {
            names[OP_DUP1 + k - 1] = "DUP" + std::to_string(k);
            names[OP_SWAP1 + k - 1] = "SWAP" + std::to_string(k);
        }
        for (int k = 0; k <= 4; ++k)
            names[OP_LOG0 + k] = "LOG" + std::to_string(k);

        for (int b = 0; b < 256; ++b)
        {
            auto& info = infos[b];
            info.byte = static_cast<uint8_t>(b);
            if (names[b].empty())
                continue;
            info.mnemonic = names[b];
            info.category = category_of(info.byte);
            info.immediate_width = static_cast<uint8_t>(push_width(info.byte));
            ++defined;
        }
    }
};

const OpcodeTable& table()
{
    static const OpcodeTable t;
    return t;
}
}  // namespace

const OpcodeInfo& opcode_info(uint8_t byte) noexcept
{
    return table().infos[byte];
}

int defined_opcode_count() noexcept
{
    return table().defined;
}

std::string opcode_name(uint8_t byte)
{
    const auto& info = opcode_info(byte);
    if (info.defined())
        return std::string{info.mnemonic};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "UNKNOWN(0x%02X)", byte);
    return buf;
}

std::optional<uint8_t> opcode_from_mnemonic(std::string_view mnemonic) noexcept
{
    for (const auto& info : table().infos)
    {
        if (info.defined() && info.mnemonic == mnemonic)
            return info.byte;
    }
    return std::nullopt;
}

std::string_view to_string(OpcodeCategory category) noexcept
{
    switch (category)
    {
    case OpcodeCategory::Arithmetic:
        return "Arithmetic";
    case OpcodeCategory::Comparison:
        return "Comparison";
    case OpcodeCategory::Encryption:
        return "Encryption";
    case OpcodeCategory::Environment:
        return "Environment";
    case OpcodeCategory::Block:
        return "Block";
    case OpcodeCategory::StorageExec:
        return "StorageExec";
    case OpcodeCategory::Push:
        return "Push";
    case OpcodeCategory::Dup:
        return "Dup";
    case OpcodeCategory::Swap:
        return "Swap";
    case OpcodeCategory::Log:
        return "Log";
    case OpcodeCategory::System:
        return "System";
    case OpcodeCategory::Unknown:
        break;
    }
    return "Unknown";
}
}  // namespace evmcfg
