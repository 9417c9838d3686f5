// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/error.hpp>

namespace evmcfg
{
std::string_view to_string(ErrorCode code) noexcept
{
    switch (code)
    {
    case ErrorCode::OddLength:
        return "OddLength";
    case ErrorCode::NonHexCharacter:
        return "NonHexCharacter";
    case ErrorCode::EmptyInput:
        return "EmptyInput";
    case ErrorCode::EmptyRuntime:
        return "EmptyRuntime";
    case ErrorCode::EmptyGraph:
        return "EmptyGraph";
    case ErrorCode::TooManyNodes:
        return "TooManyNodes";
    case ErrorCode::ShapeMismatch:
        return "ShapeMismatch";
    case ErrorCode::EmptyDataset:
        return "EmptyDataset";
    case ErrorCode::DivergedLoss:
        return "DivergedLoss";
    case ErrorCode::LengthMismatch:
        return "LengthMismatch";
    case ErrorCode::MalformedRecord:
        return "MalformedRecord";
    case ErrorCode::MalformedFile:
        return "MalformedFile";
    case ErrorCode::Io:
        return "Io";
    case ErrorCode::InvalidArgument:
        return "InvalidArgument";
    }
    return "Unknown";
}
}  // namespace evmcfg
