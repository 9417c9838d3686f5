// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmcfg/encode.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace evmcfg
{
inline constexpr int min_hidden_layers = 1;
inline constexpr int max_hidden_layers = 6;

struct GcnConfig
{
    int num_hidden_layers = 2;
    size_t hidden_width = 64;
    size_t input_width = default_max_nodes;
    uint64_t seed = 42;
    double threshold = 0.5;  ///< Predict 1 iff probability >= threshold.

    /// Throws Error{InvalidArgument}.
    void validate() const;
};

/// Graph convolution stack followed by mean pooling over nodes and a single
/// logistic output unit.
///
/// Layer l computes H[l+1] = ReLU(A_hat * H[l] * W[l]) with H[0] = X, so
/// layers[0] is input_width x hidden_width and the rest are
/// hidden_width x hidden_width.
struct GcnModel
{
    GcnConfig config;
    std::vector<Matrix> layers;
    Vector readout;
    double bias = 0.0;

    /// Glorot-uniform weights drawn from `config.seed`; zero bias.
    static GcnModel initialize(const GcnConfig& config);

    /// All-zero parameters of the configured shape.
    static GcnModel zeros(const GcnConfig& config);

    [[nodiscard]] size_t parameter_count() const noexcept;
};

struct ForwardTrace
{
    std::vector<Matrix> pre_activations;  ///< Z[l] = A_hat H[l] W[l]
    std::vector<Matrix> activations;      ///< H[0] = X, ..., H[L]
    Vector pooled;
    double logit = 0.0;
    double probability = 0.5;
};

struct Gradients
{
    std::vector<Matrix> layers;
    Vector readout;
    double bias = 0.0;

    static Gradients zeros_like(const GcnModel& model);
};

struct Prediction
{
    int label = 0;
    double probability = 0.5;
};

double sigmoid(double z) noexcept;

/// Binary cross-entropy in the logit form max(z, 0) - z*y + log(1 + e^-|z|).
double bce_loss_with_logit(double logit, int label) noexcept;

/// Binary cross-entropy of a probability in (0, 1).
double bce_loss(double probability, int label) noexcept;

/// Throws Error{ShapeMismatch} when the graph's feature width differs from the
/// model's input width or the matrices are inconsistent.
ForwardTrace forward(const GcnModel& model, const EncodedGraph& g);

double logit(const GcnModel& model, const EncodedGraph& g);

/// Analytic gradient of bce_loss_with_logit(forward(model, g).logit, label).
Gradients backward(const GcnModel& model, const EncodedGraph& g, int label,
    const ForwardTrace& trace);
Gradients backward(const GcnModel& model, const EncodedGraph& g, int label);

Prediction predict(const GcnModel& model, const EncodedGraph& g);

struct TrainConfig
{
    double learning_rate = 1e-3;
    size_t epochs = 100;
    uint64_t seed = 42;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double classification_threshold = 0.5;

    void validate() const;
};

/// Adam with bias-corrected moments.
class AdamOptimizer
{
public:
    AdamOptimizer(const GcnModel& model, const TrainConfig& config);

    void step(GcnModel& model, const Gradients& grads);

    [[nodiscard]] uint64_t steps() const noexcept { return t_; }

private:
    TrainConfig config_;
    Gradients m_;
    Gradients v_;
    uint64_t t_ = 0;
};

struct TrainResult
{
    GcnModel model;
    std::vector<double> loss_history;  ///< Mean training loss per epoch.
};

/// Per-graph updates; the visiting order is reshuffled each epoch from
/// `config.seed`. Deterministic for a given model and seed. Every graph must
/// carry a label. Throws Error{EmptyDataset | ShapeMismatch | DivergedLoss |
/// InvalidArgument}.
TrainResult train(GcnModel model, std::span<const EncodedGraph> dataset, const TrainConfig& config);

nlohmann::json to_json(const GcnModel& model);

/// Throws Error{MalformedFile}.
GcnModel model_from_json(const nlohmann::json& j);
}  // namespace evmcfg
