// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace evmcfg
{
/// Outcome counts with class 1 (vulnerable) as the positive class.
struct ConfusionCounts
{
    uint64_t tp = 0;
    uint64_t fn = 0;
    uint64_t fp = 0;
    uint64_t tn = 0;

    [[nodiscard]] uint64_t total() const noexcept { return tp + fn + fp + tn; }

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

enum class MetricFlag
{
    PrecisionUndefined,
    RecallUndefined,
    F1Undefined,
};

std::string_view to_string(MetricFlag f) noexcept;

/// Metrics whose denominator is zero are reported as 0 and flagged.
struct MetricsReport
{
    ConfusionCounts counts;
    double accuracy = 0.0;
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    std::vector<MetricFlag> flags;

    [[nodiscard]] bool has(MetricFlag f) const noexcept;
};

/// Throws Error{LengthMismatch | EmptyInput | InvalidArgument}.
ConfusionCounts confusion(std::span<const int> predictions, std::span<const int> labels);

/// Throws Error{EmptyInput} when all counts are zero.
MetricsReport metrics(const ConfusionCounts& c);

/// `{ "tp", "fn", "fp", "tn", "accuracy", "recall", "precision", "f1", "flags" }`
nlohmann::json to_json(const MetricsReport& r);
}  // namespace evmcfg
