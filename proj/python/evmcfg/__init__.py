# evmcfg: EVM control-flow recovery and GCN contract classification
# Copyright 2026 The evmcfg Authors.
# SPDX-License-Identifier: Apache-2.0
"""EVM control-flow recovery and GCN timestamp-dependency classification."""

from ._core import (
    CodeOrigin,
    EncodedGraph,
    EvmcfgError,
    GcnConfig,
    GcnModel,
    TrainConfig,
    build_cfg,
    cfg_dot,
    disassemble,
    disassembly_listing,
    encode,
    load_corpus,
    metrics,
    normalize,
    parse_hex,
    preprocess,
    split_sections,
    synthetic_corpus,
    train,
)

__all__ = [
    "CodeOrigin",
    "EncodedGraph",
    "EvmcfgError",
    "GcnConfig",
    "GcnModel",
    "TrainConfig",
    "build_cfg",
    "cfg_dot",
    "disassemble",
    "disassembly_listing",
    "encode",
    "load_corpus",
    "metrics",
    "normalize",
    "parse_hex",
    "preprocess",
    "split_sections",
    "synthetic_corpus",
    "train",
]
