// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evmcfg
{
using bytes = std::vector<uint8_t>;
using bytes_view = std::span<const uint8_t>;

enum class CodeOrigin
{
    RuntimeOnly,
    CreationWithDeploy,
};

std::string_view to_string(CodeOrigin origin) noexcept;

/// Accepts "runtime" and "creation".
std::optional<CodeOrigin> parse_origin(std::string_view text) noexcept;

struct Bytecode
{
    bytes code;
    CodeOrigin origin = CodeOrigin::RuntimeOnly;
};

/// Decodes hex text. Surrounding and internal whitespace is ignored, a
/// leading `0x`/`0X` is optional. Throws Error{EmptyInput | OddLength |
/// NonHexCharacter}; the NonHexCharacter message carries the offending
/// position within the original text.
bytes parse_hex(std::string_view text);

Bytecode parse_bytecode(std::string_view text, CodeOrigin origin = CodeOrigin::RuntimeOnly);

std::string to_hex(bytes_view data, bool prefix = true);

/// The three regions of compiled contract code. Their concatenation is the
/// input exactly.
struct ContractSections
{
    bytes deployment;
    bytes runtime;
    bytes auxdata;
    std::vector<std::string> warnings;
};

/// Length of the trailing compiler metadata under the CBOR convention: the
/// last two bytes are a big-endian length L and the L bytes before them hold a
/// single CBOR map. Returns L + 2, or nullopt when the tail does not parse.
std::optional<size_t> cbor_trailer_length(bytes_view code) noexcept;

/// Where the deployment prologue copies runtime code from, found by the
/// PUSH .. CODECOPY .. RETURN pattern. Returns the byte offset of the copied
/// region, or nullopt if the pattern does not resolve statically.
std::optional<size_t> find_runtime_offset(bytes_view creation_code);

/// Fixed auxdata size used when no CBOR trailer is recognised.
inline constexpr size_t legacy_auxdata_size = 43;

/// Throws Error{EmptyInput} for empty code and Error{EmptyRuntime} when the
/// split would leave no runtime code.
ContractSections split_sections(const Bytecode& code);
}  // namespace evmcfg
