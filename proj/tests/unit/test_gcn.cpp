// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/error.hpp>
#include <evmcfg/gcn.hpp>

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace evmcfg;

namespace
{
GcnConfig small_config(int layers = 2, size_t width = 8, size_t input = 8, uint64_t seed = 1)
{
    GcnConfig c;
    c.num_hidden_layers = layers;
    c.hidden_width = width;
    c.input_width = input;
    c.seed = seed;
    return c;
}

EncodedGraph random_graph(std::mt19937_64& rng, size_t n, size_t width, int label)
{
    return encode_adjacency(test::to_matrix(test::random_adjacency(rng, n, 0.4)), width, label);
}

bool same_parameters(const GcnModel& a, const GcnModel& b)
{
    if (a.layers.size() != b.layers.size())
        return false;
    for (size_t l = 0; l < a.layers.size(); ++l)
    {
        if (a.layers[l] != b.layers[l])
            return false;
    }
    return a.readout == b.readout && a.bias == b.bias;
}
}  // namespace

TEST_CASE("config validation")
{
    CHECK_NOTHROW(small_config(1).validate());
    CHECK_NOTHROW(small_config(6).validate());
    CHECK_THROWS_AS(small_config(0).validate(), Error);
    CHECK_THROWS_AS(small_config(7).validate(), Error);
    CHECK_THROWS_AS(small_config(2, 0).validate(), Error);

    TrainConfig t;
    t.learning_rate = -1.0;
    CHECK_THROWS_AS(t.validate(), Error);
    t.learning_rate = 0.0;
    CHECK_NOTHROW(t.validate());
}

TEST_CASE("initialization shapes and determinism")
{
    const auto m = GcnModel::initialize(small_config(3, 5, 7, 9));
    REQUIRE(m.layers.size() == 3);
    CHECK(m.layers[0].rows() == 7);
    CHECK(m.layers[0].cols() == 5);
    CHECK(m.layers[2].rows() == 5);
    CHECK(m.readout.size() == 5);
    CHECK(m.bias == 0.0);
    CHECK(m.parameter_count() == 7 * 5 + 5 * 5 * 2 + 5 + 1);

    const double limit = std::sqrt(6.0 / (7 + 5));
    CHECK(m.layers[0].cwiseAbs().maxCoeff() <= limit);
    CHECK(same_parameters(m, GcnModel::initialize(small_config(3, 5, 7, 9))));
    CHECK_FALSE(same_parameters(m, GcnModel::initialize(small_config(3, 5, 7, 10))));
}

TEST_CASE("forward examples")
{
    // All-zero weights.
    std::mt19937_64 rng{1};
    const auto g = random_graph(rng, 4, 8, 1);
    const auto zero = GcnModel::zeros(small_config());
    const auto t = forward(zero, g);
    CHECK(t.pooled.isZero());
    CHECK(t.probability == 0.5);
    CHECK(predict(zero, g).label == 1);

    // One node, one layer, identity-padded weights.
    auto one = GcnModel::zeros(small_config(1, 8, 8));
    one.layers[0] = Matrix::Identity(8, 8);
    const auto single = encode_adjacency(Matrix::Zero(1, 1), 8, std::nullopt);
    const auto st = forward(one, single);
    Matrix e0 = Matrix::Zero(1, 8);
    e0(0, 0) = 1.0;
    CHECK(st.activations[1] == e0);

    // Five-node example: X = I, W = I, so H1 = A_hat.
    auto five = GcnModel::zeros(small_config(1, 5, 5));
    five.layers[0] = Matrix::Identity(5, 5);
    const Matrix adj = test::to_matrix(
        {{0, 1, 1, 1, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}, {1, 0, 0, 0, 0}});
    const auto fg = encode_adjacency(adj, 5, std::nullopt);
    const auto ft = forward(five, fg);
    const Matrix hand = test::to_matrix(test::naive_normalize(
        {{0, 1, 1, 1, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}, {1, 0, 0, 0, 0}}));
    CHECK((ft.activations[1] - hand).cwiseAbs().maxCoeff() <= 1e-12);

    // Width mismatch names both widths.
    const auto wide = encode_adjacency(Matrix::Zero(2, 2), 9, std::nullopt);
    try
    {
        forward(zero, wide);
        FAIL("no throw");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::ShapeMismatch);
        const std::string msg = e.what();
        CHECK(msg.find('9') != std::string::npos);
        CHECK(msg.find('8') != std::string::npos);
    }
}

TEST_CASE("loss")
{
    CHECK(bce_loss(0.5, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(bce_loss(0.5, 1) == doctest::Approx(0.6931).epsilon(1e-4));
    CHECK(bce_loss(0.9, 0) == doctest::Approx(2.302585092994046).epsilon(1e-12));
    CHECK(bce_loss_with_logit(0.0, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(bce_loss_with_logit(800.0, 1) == 0.0);
    CHECK(bce_loss_with_logit(-800.0, 1) == doctest::Approx(800.0));
    CHECK(bce_loss(1.0, 1) == 0.0);
    CHECK(sigmoid(-800.0) >= 0.0);
    CHECK(sigmoid(800.0) == 1.0);
}

TEST_CASE("backward matches finite differences")
{
    std::mt19937_64 rng{17};
    int checked = 0;
    for (int draw = 0; checked < 30 && draw < 200; ++draw)
    {
        const int layers = 1 + draw % 3;
        const auto model = GcnModel::initialize(small_config(layers, 8, 8, 100 + draw));
        const int label = static_cast<int>(rng() % 2);
        const auto g = random_graph(rng, 1 + rng() % 4, 8, label);
        if (test::kink_margin(model, g) < 1e-3)
            continue;
        const auto r = test::finite_difference_check(model, g, label, backward(model, g, label));
        CHECK(r.max_relative_error <= 1e-4);
        CHECK(r.entries == model.parameter_count());
        ++checked;
    }
    CHECK(checked == 30);
}

TEST_CASE("backward degenerate cases")
{
    std::mt19937_64 rng{2};
    const auto g = random_graph(rng, 4, 8, 1);

    // Zero readout: nothing flows into the layers or the readout.
    const auto zero = GcnModel::zeros(small_config());
    const auto gz = backward(zero, g, 1);
    for (const auto& w : gz.layers)
        CHECK(w.isZero());
    CHECK(gz.readout.isZero());
    CHECK(gz.bias == doctest::Approx(-0.5));

    // Second layer dead: its gradient and the first layer's are zero.
    auto dead = GcnModel::initialize(small_config(2));
    dead.layers[0] = dead.layers[0].cwiseAbs();
    dead.layers[1] = -dead.layers[1].cwiseAbs();
    dead.readout.setConstant(1.0);
    const auto t = forward(dead, g);
    CHECK((t.pre_activations[1].array() <= 0.0).all());
    const auto gd = backward(dead, g, 1);
    CHECK(gd.layers[0].isZero());
    CHECK(gd.layers[1].isZero());
    CHECK(gd.bias != 0.0);
}

TEST_CASE("predict threshold")
{
    std::mt19937_64 rng{4};
    const auto g = random_graph(rng, 3, 8, 1);
    auto m = GcnModel::zeros(small_config());
    m.bias = std::log(0.7 / 0.3);
    const auto p = predict(m, g);
    CHECK(p.probability == doctest::Approx(0.7));
    CHECK(p.label == 1);

    m.bias = 0.0;
    CHECK(predict(m, g).probability == 0.5);
    CHECK(predict(m, g).label == 1);

    m.bias = -1e-9;
    CHECK(predict(m, g).label == 0);
}

TEST_CASE("train")
{
    std::mt19937_64 rng{6};
    std::vector<EncodedGraph> data;
    for (int i = 0; i < 6; ++i)
        data.push_back(random_graph(rng, 2 + i % 3, 8, i % 2));
    const auto init = GcnModel::initialize(small_config());

    TrainConfig frozen;
    frozen.learning_rate = 0.0;
    frozen.epochs = 5;
    const auto f = train(init, data, frozen);
    CHECK(same_parameters(f.model, init));
    CHECK(f.loss_history.size() == 5);

    TrainConfig cfg;
    cfg.epochs = 200;
    const std::vector<EncodedGraph> one{data[1]};
    const double before = bce_loss_with_logit(logit(init, one[0]), *one[0].label);
    const auto single = train(init, one, cfg);
    CHECK(bce_loss_with_logit(logit(single.model, one[0]), *one[0].label) < before);
    CHECK(single.loss_history.back() < single.loss_history.front());

    cfg.epochs = 20;
    const auto a = train(init, data, cfg);
    const auto b = train(init, data, cfg);
    CHECK(same_parameters(a.model, b.model));
    CHECK(a.loss_history == b.loss_history);

    CHECK_THROWS_AS(train(init, std::vector<EncodedGraph>{}, cfg), Error);
    auto unlabeled = data;
    unlabeled[2].label.reset();
    CHECK_THROWS_AS(train(init, unlabeled, cfg), Error);

    TrainConfig wild;
    wild.learning_rate = 1e300;
    wild.epochs = 3;
    try
    {
        train(init, data, wild);
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::DivergedLoss);
    }
}

TEST_CASE("checkpoint round trip reproduces predictions bitwise")
{
    std::mt19937_64 rng{12};
    const auto model = GcnModel::initialize(small_config(3, 6, 8, 77));
    const auto back = model_from_json(nlohmann::json::parse(to_json(model).dump()));
    CHECK(same_parameters(model, back));
    CHECK(back.config.num_hidden_layers == 3);
    for (int i = 0; i < 20; ++i)
    {
        const auto g = random_graph(rng, 1 + rng() % 6, 8, 0);
        CHECK(predict(back, g).probability == predict(model, g).probability);
    }
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse("{}")), Error);
}

TEST_CASE("property: logit invariant under node relabeling")
{
    std::mt19937_64 rng{31};
    for (int iter = 0; iter < 30; ++iter)
    {
        const auto model = GcnModel::initialize(small_config(1 + iter % 3, 8, 8, iter));
        const size_t n = 1 + rng() % 8;
        const auto g = random_graph(rng, n, 8, 0);
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Eigen::PermutationMatrix<Eigen::Dynamic> p(static_cast<Eigen::Index>(n));
        for (size_t i = 0; i < n; ++i)
            p.indices()(static_cast<Eigen::Index>(i)) = perm[i];
        EncodedGraph q;
        q.a_hat = p * g.a_hat * p.transpose();
        q.features = p * g.features;
        CHECK(std::abs(logit(model, q) - logit(model, g)) <= 1e-10);
    }
}
