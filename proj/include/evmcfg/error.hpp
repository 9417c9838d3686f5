// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evmcfg
{
enum class ErrorCode
{
    OddLength,
    NonHexCharacter,
    EmptyInput,
    EmptyRuntime,
    EmptyGraph,
    TooManyNodes,
    ShapeMismatch,
    EmptyDataset,
    DivergedLoss,
    LengthMismatch,
    MalformedRecord,
    MalformedFile,
    Io,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// The single exception type thrown by the library. The code is stable and
/// machine-checkable; the message is for humans.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message)
      : std::runtime_error{std::string{to_string(code)} + ": " + message}, code_{code}
    {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};
}  // namespace evmcfg
