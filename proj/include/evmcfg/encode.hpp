// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmcfg/cfg.hpp>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <optional>

namespace evmcfg
{
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr size_t default_max_nodes = 256;

/// Binary directed adjacency: A(i, j) = 1 iff some edge i -> j exists.
/// Throws Error{EmptyGraph}.
Matrix adjacency_from_cfg(const Cfg& cfg);

/// Row sums of A + I, i.e. the diagonal of the self-looped degree matrix.
Vector self_loop_degrees(const Matrix& adj);

/// D^-1/2 (A + I) D^-1/2 with D the row-sum degree of A + I. Directed input
/// stays directed. Throws Error{ShapeMismatch} for non-square input.
Matrix normalize(const Matrix& adj);

/// The propagation operator and node features of one contract, ready for the
/// network. Features are the n x n identity zero-padded to `width` columns.
struct EncodedGraph
{
    Matrix a_hat;
    Matrix features;
    std::optional<int> label;

    [[nodiscard]] size_t num_nodes() const noexcept { return static_cast<size_t>(a_hat.rows()); }
    [[nodiscard]] size_t feature_width() const noexcept { return static_cast<size_t>(features.cols()); }
};

Matrix identity_features(size_t n, size_t width);

/// Throws Error{EmptyGraph} and, unless `truncate` is set, Error{TooManyNodes}
/// when the CFG has more than `max_nodes` blocks. With `truncate`, the first
/// `max_nodes` blocks in address order are kept and edges touching dropped
/// blocks are discarded.
EncodedGraph encode(const Cfg& cfg, size_t max_nodes = default_max_nodes,
    std::optional<int> label = std::nullopt, bool truncate = false);

/// Builds the encoding straight from an adjacency matrix.
EncodedGraph encode_adjacency(const Matrix& adj, size_t max_nodes, std::optional<int> label);

/// `{ "n": ..., "a_hat": [[...]], "x": [[...]], "label": 0|1 }`
nlohmann::json to_json(const EncodedGraph& g);
EncodedGraph encoded_graph_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
}  // namespace evmcfg
