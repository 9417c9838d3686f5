// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/error.hpp>
#include <evmcfg/gcn.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace evmcfg
{
namespace
{
Eigen::Index idx(size_t v) noexcept
{
    return static_cast<Eigen::Index>(v);
}

size_t layer_input_width(const GcnConfig& c, int layer) noexcept
{
    return layer == 0 ? c.input_width : c.hidden_width;
}

void check_shapes(const GcnModel& model, const EncodedGraph& g)
{
    if (g.a_hat.rows() != g.a_hat.cols() || g.a_hat.rows() != g.features.rows() || g.a_hat.rows() == 0)
    {
        throw Error{ErrorCode::ShapeMismatch,
            "propagation matrix is " + std::to_string(g.a_hat.rows()) + "x" +
                std::to_string(g.a_hat.cols()) + " but features have " +
                std::to_string(g.features.rows()) + " rows"};
    }
    if (g.feature_width() != model.config.input_width)
    {
        throw Error{ErrorCode::ShapeMismatch,
            "graph feature width " + std::to_string(g.feature_width()) +
                " does not match model input width " + std::to_string(model.config.input_width)};
    }
}
}  // namespace

void GcnConfig::validate() const
{
    if (num_hidden_layers < min_hidden_layers || num_hidden_layers > max_hidden_layers)
    {
        throw Error{ErrorCode::InvalidArgument,
            "hidden layer count " + std::to_string(num_hidden_layers) + " outside [1, 6]"};
    }
    if (hidden_width == 0 || input_width == 0)
        throw Error{ErrorCode::InvalidArgument, "layer widths must be positive"};
    if (!(threshold > 0.0 && threshold < 1.0))
        throw Error{ErrorCode::InvalidArgument, "threshold must lie in (0, 1)"};
}

GcnModel GcnModel::zeros(const GcnConfig& config)
{
    config.validate();
    GcnModel m;
    m.config = config;
    for (int l = 0; l < config.num_hidden_layers; ++l)
        m.layers.push_back(Matrix::Zero(idx(layer_input_width(config, l)), idx(config.hidden_width)));
    m.readout = Vector::Zero(idx(config.hidden_width));
    return m;
}

GcnModel GcnModel::initialize(const GcnConfig& config)
{
    auto m = zeros(config);
    std::mt19937_64 rng{config.seed};
    const auto fill = [&rng](auto& params, double fan_in, double fan_out) {
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist{-limit, limit};
        for (Eigen::Index i = 0; i < params.size(); ++i)
            params.data()[i] = dist(rng);
    };
    for (auto& w : m.layers)
        fill(w, static_cast<double>(w.rows()), static_cast<double>(w.cols()));
    fill(m.readout, static_cast<double>(m.readout.size()), 1.0);
    return m;
}

size_t GcnModel::parameter_count() const noexcept
{
    size_t n = static_cast<size_t>(readout.size()) + 1;
    for (const auto& w : layers)
        n += static_cast<size_t>(w.size());
    return n;
}

Gradients Gradients::zeros_like(const GcnModel& model)
{
    Gradients g;
    for (const auto& w : model.layers)
        g.layers.push_back(Matrix::Zero(w.rows(), w.cols()));
    g.readout = Vector::Zero(model.readout.size());
    return g;
}

double sigmoid(double z) noexcept
{
    if (z >= 0)
        return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double bce_loss_with_logit(double logit, int label) noexcept
{
    return std::max(logit, 0.0) - logit * label + std::log1p(std::exp(-std::abs(logit)));
}

double bce_loss(double probability, int label) noexcept
{
    return label == 1 ? -std::log(probability) : -std::log1p(-probability);
}

ForwardTrace forward(const GcnModel& model, const EncodedGraph& g)
{
    check_shapes(model, g);
    ForwardTrace t;
    t.activations.reserve(model.layers.size() + 1);
    t.pre_activations.reserve(model.layers.size());
    t.activations.push_back(g.features);
    for (const auto& w : model.layers)
    {
        Matrix z = g.a_hat * (t.activations.back() * w);
        t.activations.push_back(z.cwiseMax(0.0));
        t.pre_activations.push_back(std::move(z));
    }
    t.pooled = t.activations.back().colwise().mean().transpose();
    t.logit = t.pooled.dot(model.readout) + model.bias;
    t.probability = sigmoid(t.logit);
    return t;
}

double logit(const GcnModel& model, const EncodedGraph& g)
{
    return forward(model, g).logit;
}

Gradients backward(const GcnModel& model, const EncodedGraph& g, int label, const ForwardTrace& trace)
{
    Gradients grads = Gradients::zeros_like(model);
    const double dlogit = trace.probability - label;
    grads.readout = dlogit * trace.pooled;
    grads.bias = dlogit;

    const auto n = static_cast<double>(g.num_nodes());
    // Mean pooling spreads the pooled gradient evenly over the node rows.
    Matrix upstream = (dlogit / n * model.readout).transpose().replicate(g.a_hat.rows(), 1);
    for (size_t l = model.layers.size(); l-- > 0;)
    {
        const Matrix dz =
            upstream.cwiseProduct((trace.pre_activations[l].array() > 0.0).cast<double>().matrix());
        const Matrix propagated = g.a_hat.transpose() * dz;
        grads.layers[l] = trace.activations[l].transpose() * propagated;
        if (l > 0)
            upstream = propagated * model.layers[l].transpose();
    }
    return grads;
}

Gradients backward(const GcnModel& model, const EncodedGraph& g, int label)
{
    return backward(model, g, label, forward(model, g));
}

Prediction predict(const GcnModel& model, const EncodedGraph& g)
{
    const double p = forward(model, g).probability;
    return {p >= model.config.threshold ? 1 : 0, p};
}

void TrainConfig::validate() const
{
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw Error{ErrorCode::InvalidArgument, "learning rate must be finite and non-negative"};
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0))
        throw Error{ErrorCode::InvalidArgument, "invalid optimizer hyperparameters"};
    if (!(classification_threshold > 0.0 && classification_threshold < 1.0))
        throw Error{ErrorCode::InvalidArgument, "threshold must lie in (0, 1)"};
}

AdamOptimizer::AdamOptimizer(const GcnModel& model, const TrainConfig& config)
  : config_{config}, m_{Gradients::zeros_like(model)}, v_{Gradients::zeros_like(model)}
{}

void AdamOptimizer::step(GcnModel& model, const Gradients& grads)
{
    ++t_;
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    const double lr = config_.learning_rate;
    const double eps = config_.epsilon;

    const auto update = [&](auto param, auto m, auto v, auto g) {
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g.square();
        param -= lr * (m / c1) / ((v / c2).sqrt() + eps);
    };
    for (size_t l = 0; l < model.layers.size(); ++l)
        update(model.layers[l].array(), m_.layers[l].array(), v_.layers[l].array(), grads.layers[l].array());
    update(model.readout.array(), m_.readout.array(), v_.readout.array(), grads.readout.array());

    m_.bias = b1 * m_.bias + (1.0 - b1) * grads.bias;
    v_.bias = b2 * v_.bias + (1.0 - b2) * grads.bias * grads.bias;
    model.bias -= lr * (m_.bias / c1) / (std::sqrt(v_.bias / c2) + eps);
}

TrainResult train(GcnModel model, std::span<const EncodedGraph> dataset, const TrainConfig& config)
{
    config.validate();
    if (dataset.empty())
        throw Error{ErrorCode::EmptyDataset, "no training graphs"};
    for (size_t i = 0; i < dataset.size(); ++i)
    {
        check_shapes(model, dataset[i]);
        if (!dataset[i].label || (*dataset[i].label != 0 && *dataset[i].label != 1))
            throw Error{ErrorCode::InvalidArgument, "graph " + std::to_string(i) + " has no 0/1 label"};
    }

    model.config.threshold = config.classification_threshold;
    AdamOptimizer opt{model, config};
    std::mt19937_64 rng{config.seed};
    std::vector<size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), size_t{0});

    TrainResult result;
    result.loss_history.reserve(config.epochs);
    for (size_t epoch = 0; epoch < config.epochs; ++epoch)
    {
        std::shuffle(order.begin(), order.end(), rng);
        double total = 0.0;
        for (const auto i : order)
        {
            const auto& g = dataset[i];
            const auto trace = forward(model, g);
            const double loss = bce_loss_with_logit(trace.logit, *g.label);
            if (!std::isfinite(loss))
            {
                throw Error{ErrorCode::DivergedLoss, "non-finite loss at epoch " +
                                                         std::to_string(epoch) + ", graph " +
                                                         std::to_string(i)};
            }
            total += loss;
            opt.step(model, backward(model, g, *g.label, trace));
        }
        result.loss_history.push_back(total / static_cast<double>(dataset.size()));
    }
    result.model = std::move(model);
    return result;
}

nlohmann::json to_json(const GcnModel& model)
{
    const auto& c = model.config;
    auto layers = nlohmann::json::array();
    for (const auto& w : model.layers)
        layers.push_back(matrix_to_json(w));
    return {
        {"config", {{"num_hidden_layers", c.num_hidden_layers}, {"hidden_width", c.hidden_width},
                       {"input_width", c.input_width}, {"seed", c.seed}, {"threshold", c.threshold}}},
        {"layers", std::move(layers)},
        {"readout", {{"weights", std::vector<double>(model.readout.data(),
                                     model.readout.data() + model.readout.size())},
                        {"bias", model.bias}}},
    };
}

GcnModel model_from_json(const nlohmann::json& j)
{
    try
    {
        const auto& jc = j.at("config");
        GcnConfig c;
        c.num_hidden_layers = jc.at("num_hidden_layers").get<int>();
        c.hidden_width = jc.at("hidden_width").get<size_t>();
        c.input_width = jc.at("input_width").get<size_t>();
        c.seed = jc.value("seed", uint64_t{42});
        c.threshold = jc.value("threshold", 0.5);

        auto m = GcnModel::zeros(c);
        const auto& jl = j.at("layers");
        if (jl.size() != m.layers.size())
            throw Error{ErrorCode::MalformedFile, "layer count disagrees with config"};
        for (size_t l = 0; l < m.layers.size(); ++l)
        {
            Matrix w = matrix_from_json(jl[l]);
            if (w.rows() != m.layers[l].rows() || w.cols() != m.layers[l].cols())
                throw Error{ErrorCode::MalformedFile, "layer " + std::to_string(l) + " has the wrong shape"};
            m.layers[l] = std::move(w);
        }
        const auto weights = j.at("readout").at("weights").get<std::vector<double>>();
        if (weights.size() != c.hidden_width)
            throw Error{ErrorCode::MalformedFile, "readout width disagrees with config"};
        m.readout = Eigen::Map<const Vector>(weights.data(), idx(weights.size()));
        m.bias = j.at("readout").at("bias").get<double>();
        return m;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error{ErrorCode::MalformedFile, e.what()};
    }
    catch (const Error& e)
    {
        if (e.code() == ErrorCode::InvalidArgument)
            throw Error{ErrorCode::MalformedFile, e.what()};
        throw;
    }
}
}  // namespace evmcfg
