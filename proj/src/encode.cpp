// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/encode.hpp>
#include <evmcfg/error.hpp>

#include <cmath>

namespace evmcfg
{
namespace
{
Matrix adjacency_of(const Cfg& cfg, size_t keep)
{
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(keep), static_cast<Eigen::Index>(keep));
    for (const auto& e : cfg.edges)
    {
        if (e.src < keep && e.dst < keep)
            a(static_cast<Eigen::Index>(e.src), static_cast<Eigen::Index>(e.dst)) = 1.0;
    }
    return a;
}
}  // namespace

Matrix adjacency_from_cfg(const Cfg& cfg)
{
    if (cfg.blocks.empty())
        throw Error{ErrorCode::EmptyGraph, "CFG has no blocks"};
    return adjacency_of(cfg, cfg.blocks.size());
}

Vector self_loop_degrees(const Matrix& adj)
{
    return adj.rowwise().sum().array() + 1.0;
}

Matrix normalize(const Matrix& adj)
{
    if (adj.rows() != adj.cols())
    {
        throw Error{ErrorCode::ShapeMismatch, "adjacency is " + std::to_string(adj.rows()) + "x" +
                                                  std::to_string(adj.cols())};
    }
    const Eigen::Index n = adj.rows();
    const Vector inv_sqrt = self_loop_degrees(adj).array().sqrt().inverse();
    Matrix a_hat = adj + Matrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        for (Eigen::Index j = 0; j < n; ++j)
            a_hat(i, j) *= inv_sqrt(i) * inv_sqrt(j);
    }
    return a_hat;
}

Matrix identity_features(size_t n, size_t width)
{
    Matrix x = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(width));
    for (size_t i = 0; i < n && i < width; ++i)
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    return x;
}

EncodedGraph encode_adjacency(const Matrix& adj, size_t max_nodes, std::optional<int> label)
{
    const auto n = static_cast<size_t>(adj.rows());
    if (n == 0)
        throw Error{ErrorCode::EmptyGraph, "graph has no nodes"};
    if (n > max_nodes)
    {
        throw Error{ErrorCode::TooManyNodes,
            std::to_string(n) + " nodes exceed the limit of " + std::to_string(max_nodes)};
    }
    return EncodedGraph{normalize(adj), identity_features(n, max_nodes), label};
}

EncodedGraph encode(const Cfg& cfg, size_t max_nodes, std::optional<int> label, bool truncate)
{
    if (cfg.blocks.empty())
        throw Error{ErrorCode::EmptyGraph, "CFG has no blocks"};
    if (cfg.blocks.size() > max_nodes && truncate)
        return encode_adjacency(adjacency_of(cfg, max_nodes), max_nodes, label);
    return encode_adjacency(adjacency_from_cfg(cfg), max_nodes, label);
}

nlohmann::json matrix_to_json(const Matrix& m)
{
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        auto row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const nlohmann::json& j)
{
    if (!j.is_array())
        throw Error{ErrorCode::MalformedFile, "matrix must be an array of rows"};
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
    {
        const auto& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw Error{ErrorCode::MalformedFile, "ragged matrix row " + std::to_string(i)};
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = row[static_cast<size_t>(k)].get<double>();
    }
    return m;
}

nlohmann::json to_json(const EncodedGraph& g)
{
    nlohmann::json j{{"n", g.num_nodes()}, {"a_hat", matrix_to_json(g.a_hat)},
        {"x", matrix_to_json(g.features)}};
    if (g.label)
        j["label"] = *g.label;
    return j;
}

EncodedGraph encoded_graph_from_json(const nlohmann::json& j)
{
    try
    {
        EncodedGraph g{matrix_from_json(j.at("a_hat")), matrix_from_json(j.at("x")), std::nullopt};
        if (j.contains("label") && !j["label"].is_null())
            g.label = j["label"].get<int>();
        const auto n = j.at("n").get<size_t>();
        if (g.num_nodes() != n || g.a_hat.cols() != g.a_hat.rows() ||
            static_cast<size_t>(g.features.rows()) != n)
            throw Error{ErrorCode::MalformedFile, "encoded graph dimensions disagree with n"};
        return g;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error{ErrorCode::MalformedFile, e.what()};
    }
}
}  // namespace evmcfg
