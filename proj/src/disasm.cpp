// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/disasm.hpp>

#include <cstdio>

namespace evmcfg
{
std::optional<uint64_t> Instruction::push_value() const noexcept
{
    uint64_t v = 0;
    for (const auto b : immediate)
    {
        if (v >> 56)
            return std::nullopt;
        v = (v << 8) | b;
    }
    return v;
}

std::vector<Instruction> disassemble(bytes_view code)
{
    std::vector<Instruction> out;
    out.reserve(code.size());
    size_t i = 0;
    while (i < code.size())
    {
        Instruction instr;
        instr.offset = i;
        instr.opcode = code[i++];
        if (const size_t width = static_cast<size_t>(push_width(instr.opcode)); width > 0)
        {
            const size_t avail = std::min(width, code.size() - i);
            instr.immediate.assign(code.begin() + static_cast<std::ptrdiff_t>(i),
                code.begin() + static_cast<std::ptrdiff_t>(i + avail));
            instr.truncated = avail < width;
            i += avail;
        }
        out.push_back(std::move(instr));
    }
    return out;
}

bytes encode(const std::vector<Instruction>& instructions)
{
    bytes out;
    for (const auto& instr : instructions)
    {
        out.push_back(instr.opcode);
        out.insert(out.end(), instr.immediate.begin(), instr.immediate.end());
    }
    return out;
}

std::string format_instruction(const Instruction& instr)
{
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04zx: ", instr.offset);
    std::string line = buf + opcode_name(instr.opcode);
    if (is_push(instr.opcode))
        line += " " + to_hex(instr.immediate);
    return line;
}

std::string format_listing(const std::vector<Instruction>& instructions)
{
    std::string out;
    for (const auto& instr : instructions)
    {
        out += format_instruction(instr);
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const Instruction& instr)
{
    nlohmann::json j{{"offset", instr.offset}, {"opcode", opcode_name(instr.opcode)}};
    if (is_push(instr.opcode))
        j["immediate"] = to_hex(instr.immediate);
    if (instr.truncated)
        j["truncated"] = true;
    return j;
}
}  // namespace evmcfg
