// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/bytecode.hpp>
#include <evmcfg/disasm.hpp>
#include <evmcfg/error.hpp>

#include <cctype>

namespace evmcfg
{
namespace
{
int hex_value(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

bool is_space(char c) noexcept
{
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

constexpr int max_cbor_depth = 16;

/// Skips one CBOR data item starting at `pos`. Indefinite-length items are
/// rejected; solc never emits them.
std::optional<size_t> skip_cbor_item(bytes_view data, size_t pos, int depth) noexcept
{
    if (depth > max_cbor_depth || pos >= data.size())
        return std::nullopt;

    const auto initial = data[pos++];
    const int major = initial >> 5;
    const int info = initial & 0x1f;

    uint64_t arg = 0;
    if (info < 24)
        arg = static_cast<uint64_t>(info);
    else if (info <= 27)
    {
        const size_t n = size_t{1} << (info - 24);
        if (data.size() - pos < n)
            return std::nullopt;
        for (size_t i = 0; i < n; ++i)
            arg = (arg << 8) | data[pos++];
    }
    else
        return std::nullopt;

    switch (major)
    {
    case 0:
    case 1:
    case 7:
        return pos;
    case 2:
    case 3:
        if (arg > data.size() - pos)
            return std::nullopt;
        return pos + static_cast<size_t>(arg);
    case 4:
    case 5:
    {
        const uint64_t items = major == 5 ? arg * 2 : arg;
        if (items > data.size() - pos)
            return std::nullopt;
        for (uint64_t i = 0; i < items; ++i)
        {
            const auto next = skip_cbor_item(data, pos, depth + 1);
            if (!next)
                return std::nullopt;
            pos = *next;
        }
        return pos;
    }
    case 6:
        return skip_cbor_item(data, pos, depth + 1);
    default:
        return std::nullopt;
    }
}

bool is_halt_or_jump(uint8_t op) noexcept
{
    switch (op)
    {
    case OP_STOP:
    case OP_JUMP:
    case OP_JUMPI:
    case OP_RETURN:
    case OP_REVERT:
    case OP_INVALID:
    case OP_SELFDESTRUCT:
        return true;
    default:
        return !opcode_info(op).defined();
    }
}

/// True when the last `legacy_auxdata_size` bytes contain something that
/// cannot be an instruction.
bool tail_is_data(bytes_view code)
{
    const auto tail_start = code.size() - legacy_auxdata_size;
    for (const auto& instr : disassemble(code))
    {
        if (instr.offset >= tail_start && !opcode_info(instr.opcode).defined())
            return true;
    }
    return false;
}
}  // namespace

std::string_view to_string(CodeOrigin origin) noexcept
{
    return origin == CodeOrigin::RuntimeOnly ? "runtime" : "creation";
}

std::optional<CodeOrigin> parse_origin(std::string_view text) noexcept
{
    if (text == "runtime")
        return CodeOrigin::RuntimeOnly;
    if (text == "creation")
        return CodeOrigin::CreationWithDeploy;
    return std::nullopt;
}

bytes parse_hex(std::string_view text)
{
    size_t pos = 0;
    while (pos < text.size() && is_space(text[pos]))
        ++pos;
    if (text.size() - pos >= 2 && text[pos] == '0' && (text[pos + 1] == 'x' || text[pos + 1] == 'X'))
        pos += 2;

    bytes out;
    out.reserve((text.size() - pos) / 2);
    int pending = -1;
    for (; pos < text.size(); ++pos)
    {
        const char c = text[pos];
        if (is_space(c))
            continue;
        const int v = hex_value(c);
        if (v < 0)
            throw Error{ErrorCode::NonHexCharacter,
                "invalid character '" + std::string(1, c) + "' at position " + std::to_string(pos)};
        if (pending < 0)
            pending = v;
        else
        {
            out.push_back(static_cast<uint8_t>((pending << 4) | v));
            pending = -1;
        }
    }
    if (pending >= 0)
        throw Error{ErrorCode::OddLength, "hex string has an odd number of digits"};
    if (out.empty())
        throw Error{ErrorCode::EmptyInput, "no hex digits"};
    return out;
}

Bytecode parse_bytecode(std::string_view text, CodeOrigin origin)
{
    return Bytecode{parse_hex(text), origin};
}

std::string to_hex(bytes_view data, bool prefix)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(data.size() * 2 + 2);
    if (prefix)
        s += "0x";
    for (const auto b : data)
    {
        s += digits[b >> 4];
        s += digits[b & 0xf];
    }
    return s;
}

std::optional<size_t> cbor_trailer_length(bytes_view code) noexcept
{
    if (code.size() < 3)
        return std::nullopt;
    const size_t len = (size_t{code[code.size() - 2]} << 8) | code[code.size() - 1];
    if (len == 0 || len + 2 > code.size())
        return std::nullopt;

    const auto payload = code.subspan(code.size() - 2 - len, len);
    if ((payload[0] >> 5) != 5)  // must be a map
        return std::nullopt;
    const auto end = skip_cbor_item(payload, 0, 0);
    if (!end || *end != payload.size())
        return std::nullopt;
    return len + 2;
}

std::optional<size_t> find_runtime_offset(bytes_view creation_code)
{
    // Tracks constants on a straight-line run; anything whose stack effect we
    // do not model clears the view.
    std::vector<std::optional<uint64_t>> stack;
    const auto instrs = disassemble(creation_code);
    for (size_t i = 0; i < instrs.size(); ++i)
    {
        const auto& in = instrs[i];
        const auto op = in.opcode;
        if (is_push(op))
        {
            stack.push_back(in.truncated ? std::nullopt : in.push_value());
        }
        else if (op >= OP_DUP1 && op <= OP_DUP16)
        {
            const size_t n = op - OP_DUP1 + 1;
            stack.push_back(n <= stack.size() ? stack[stack.size() - n] : std::nullopt);
        }
        else if (op >= OP_SWAP1 && op <= OP_SWAP16)
        {
            const size_t n = op - OP_SWAP1 + 1;
            if (n + 1 <= stack.size())
                std::swap(stack.back(), stack[stack.size() - 1 - n]);
            else
                stack.clear();
        }
        else if (op == OP_CODECOPY)
        {
            if (stack.size() >= 3)
            {
                const auto src = stack[stack.size() - 2];
                const auto len = stack[stack.size() - 3];
                bool returns = false;
                for (size_t j = i + 1; j < instrs.size() && j <= i + 4; ++j)
                {
                    if (instrs[j].opcode == OP_RETURN)
                    {
                        returns = true;
                        break;
                    }
                    if (is_halt_or_jump(instrs[j].opcode))
                        break;
                }
                if (returns && src && len && *src > 0 && *src < creation_code.size() && *len > 0)
                    return static_cast<size_t>(*src);
            }
            stack.clear();
        }
        else
        {
            stack.clear();
        }
    }
    return std::nullopt;
}

ContractSections split_sections(const Bytecode& code)
{
    if (code.code.empty())
        throw Error{ErrorCode::EmptyInput, "empty bytecode"};

    ContractSections s;
    bytes_view all{code.code};
    size_t runtime_start = 0;
    if (code.origin == CodeOrigin::CreationWithDeploy)
    {
        if (const auto off = find_runtime_offset(all))
            runtime_start = *off;
        else
            s.warnings.emplace_back(
                "deployment epilogue (CODECOPY/RETURN) not resolved; treating all code as runtime");
    }

    const auto body = all.subspan(runtime_start);
    size_t aux = 0;
    if (const auto trailer = cbor_trailer_length(body))
    {
        if (*trailer >= body.size())
            throw Error{ErrorCode::EmptyRuntime, "metadata trailer covers the entire code"};
        aux = *trailer;
    }
    else if (body.size() > legacy_auxdata_size && tail_is_data(body))
    {
        aux = legacy_auxdata_size;
    }

    s.deployment.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(runtime_start));
    s.runtime.assign(body.begin(), body.end() - static_cast<std::ptrdiff_t>(aux));
    s.auxdata.assign(body.end() - static_cast<std::ptrdiff_t>(aux), body.end());
    return s;
}
}  // namespace evmcfg
