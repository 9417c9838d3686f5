# evmcfg: EVM control-flow recovery and GCN contract classification
# Copyright 2026 The evmcfg Authors.
# SPDX-License-Identifier: Apache-2.0

import json
import math

import numpy as np
import pytest

import evmcfg


def test_disassemble():
    code = evmcfg.parse_hex("0x6001600201")
    assert code == bytes([0x60, 0x01, 0x60, 0x02, 0x01])
    instrs = evmcfg.disassemble(code)
    assert [i["opcode"] for i in instrs] == ["PUSH1", "PUSH1", "ADD"]
    assert evmcfg.disassembly_listing(code).splitlines()[2] == "0004: ADD"


def test_errors_carry_codes():
    with pytest.raises(evmcfg.EvmcfgError) as info:
        evmcfg.parse_hex("0x6")
    assert info.value.code == "OddLength"
    assert isinstance(info.value, ValueError)


def test_cfg_and_sections():
    code = bytes.fromhex("6003565b00")
    cfg = evmcfg.build_cfg(code)
    assert len(cfg["blocks"]) == 2
    assert cfg["edges"] == [{"src": 0, "dst": 1, "kind": "JumpTaken"}]
    assert "B0 -> B1" in evmcfg.cfg_dot(code)
    s = evmcfg.split_sections(code)
    assert s["runtime"] == code and s["auxdata"] == b""


def test_normalize():
    a = np.array([[0, 1], [0, 0]], dtype=float)
    got = evmcfg.normalize(a)
    assert got[0, 1] == pytest.approx(1 / math.sqrt(2))
    assert got[1, 0] == 0.0


def test_train_predict_roundtrip():
    corpus = evmcfg.synthetic_corpus(20, seed=1)
    graphs = [
        evmcfg.encode(bytes.fromhex(r["bytecode"][2:]), max_nodes=64, label=r["label"])
        for r in corpus
    ]
    cfg = evmcfg.GcnConfig()
    cfg.input_width = 64
    cfg.hidden_width = 8
    tc = evmcfg.TrainConfig()
    tc.epochs = 3
    model, losses = evmcfg.train(evmcfg.GcnModel(cfg), graphs, tc)
    assert len(losses) == 3
    back = evmcfg.GcnModel.from_json(json.loads(json.dumps(model.to_json())))
    for g in graphs[:5]:
        assert back.predict(g) == model.predict(g)


def test_metrics():
    m = evmcfg.metrics([1, 1, 0, 0, 0, 0, 0, 0, 0, 1], [1, 1, 1, 0, 0, 0, 0, 0, 0, 0])
    assert m["accuracy"] == pytest.approx(0.8)
    assert m["f1"] == pytest.approx(2 / 3)
