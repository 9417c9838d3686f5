// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/error.hpp>
#include <evmcfg/metrics.hpp>

#include <algorithm>

namespace evmcfg
{
std::string_view to_string(MetricFlag f) noexcept
{
    switch (f)
    {
    case MetricFlag::PrecisionUndefined:
        return "PrecisionUndefined";
    case MetricFlag::RecallUndefined:
        return "RecallUndefined";
    case MetricFlag::F1Undefined:
        break;
    }
    return "F1Undefined";
}

bool MetricsReport::has(MetricFlag f) const noexcept
{
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

ConfusionCounts confusion(std::span<const int> predictions, std::span<const int> labels)
{
    if (predictions.size() != labels.size())
    {
        throw Error{ErrorCode::LengthMismatch, std::to_string(predictions.size()) +
                                                   " predictions vs " +
                                                   std::to_string(labels.size()) + " labels"};
    }
    if (predictions.empty())
        throw Error{ErrorCode::EmptyInput, "nothing to evaluate"};

    ConfusionCounts c;
    for (size_t i = 0; i < predictions.size(); ++i)
    {
        const int p = predictions[i];
        const int y = labels[i];
        if ((p != 0 && p != 1) || (y != 0 && y != 1))
            throw Error{ErrorCode::InvalidArgument, "labels must be 0 or 1 (index " + std::to_string(i) + ")"};
        if (p == 1)
            ++(y == 1 ? c.tp : c.fp);
        else
            ++(y == 1 ? c.fn : c.tn);
    }
    return c;
}

MetricsReport metrics(const ConfusionCounts& c)
{
    if (c.total() == 0)
        throw Error{ErrorCode::EmptyInput, "confusion counts are all zero"};

    MetricsReport r;
    r.counts = c;
    const auto ratio = [](uint64_t num, uint64_t den) {
        return static_cast<double>(num) / static_cast<double>(den);
    };
    r.accuracy = ratio(c.tp + c.tn, c.total());

    if (c.tp + c.fn == 0)
        r.flags.push_back(MetricFlag::RecallUndefined);
    else
        r.recall = ratio(c.tp, c.tp + c.fn);

    if (c.tp + c.fp == 0)
        r.flags.push_back(MetricFlag::PrecisionUndefined);
    else
        r.precision = ratio(c.tp, c.tp + c.fp);

    if (r.has(MetricFlag::RecallUndefined) || r.has(MetricFlag::PrecisionUndefined) ||
        r.precision + r.recall == 0.0)
        r.flags.push_back(MetricFlag::F1Undefined);
    else
        r.f1 = 2.0 * (r.precision * r.recall) / (r.precision + r.recall);

    std::sort(r.flags.begin(), r.flags.end());
    return r;
}

nlohmann::json to_json(const MetricsReport& r)
{
    auto flags = nlohmann::json::array();
    for (const auto f : r.flags)
        flags.push_back(to_string(f));
    return {{"tp", r.counts.tp}, {"fn", r.counts.fn}, {"fp", r.counts.fp}, {"tn", r.counts.tn},
        {"accuracy", r.accuracy}, {"recall", r.recall}, {"precision", r.precision}, {"f1", r.f1},
        {"flags", std::move(flags)}};
}
}  // namespace evmcfg
