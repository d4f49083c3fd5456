#!/usr/bin/env python3
# Copyright 2026 The segpipe Authors.
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the hand-built graph fixtures in this directory.

Deterministic; rerun after changing the graph schema.
"""
import json
import pathlib

HERE = pathlib.Path(__file__).resolve().parent


def dump(path, graph):
    path.write_text(json.dumps(graph, indent=2) + "\n")


class Builder:
    def __init__(self, name):
        self.graph = {"name": name, "nodes": [], "edges": []}

    def node(self, name, kind, params, macs, act, inputs=()):
        nid = len(self.graph["nodes"])
        self.graph["nodes"].append({
            "id": nid, "name": name, "op_kind": kind, "param_count": params,
            "mac_count": macs, "activation_bytes": act})
        for src in inputs:
            self.graph["edges"].append([src, nid])
        return nid


def inception():
    # One inception-v1 style block: four parallel branches joined by concat.
    b = Builder("inception_block")
    hw = 28 * 28
    x = b.node("input", "input", 0, 0, hw * 192)
    def conv(name, cin, cout, k, src):
        p = k * k * cin * cout
        return b.node(name, "conv2d", p, p * hw, hw * cout, [src])
    b1 = conv("b1_1x1", 192, 64, 1, x)
    b2r = conv("b2_reduce", 192, 96, 1, x)
    b2 = conv("b2_3x3", 96, 128, 3, b2r)
    b3r = conv("b3_reduce", 192, 16, 1, x)
    b3 = conv("b3_5x5", 16, 32, 5, b3r)
    b4p = b.node("b4_pool", "pool", 0, hw * 192 * 9, hw * 192, [x])
    b4 = conv("b4_proj", 192, 32, 1, b4p)
    cat = b.node("concat", "concat", 0, 0, hw * 256, [b1, b2, b3, b4])
    fc = b.node("fc", "dense", 256 * 10, 256 * 10, 10, [cat])
    b.node("output", "output", 0, 0, 0, [fc])
    return b.graph


def resnet_like():
    # 68 residual blocks (conv, conv, add) between a stem and a classifier:
    # depth 5 + 3 * 68 = 209 levels.
    b = Builder("resnet_like_d209")
    x = b.node("input", "input", 0, 0, 224 * 224 * 3)
    stem = b.node("stem", "conv2d", 7 * 7 * 3 * 48, 7 * 7 * 3 * 48 * 112 * 112,
                  112 * 112 * 48, [x])
    cur = b.node("pool", "pool", 0, 56 * 56 * 48 * 9, 56 * 56 * 48, [stem])
    stages = [(48, 56), (96, 28), (192, 14), (288, 7)]
    block = 0
    for si, (ch, hw) in enumerate(stages):
        for _ in range(17):
            p = 9 * ch * ch
            a = b.node(f"b{block}_conv_a", "conv2d", p, p * hw * hw, hw * hw * ch, [cur])
            c = b.node(f"b{block}_conv_b", "conv2d", p, p * hw * hw, hw * hw * ch, [a])
            cur = b.node(f"b{block}_add", "add", 0, hw * hw * ch, hw * hw * ch, [c, cur])
            block += 1
    fc = b.node("fc", "dense", 288 * 15625, 288 * 15625, 15625, [cur])
    b.node("output", "output", 0, 0, 0, [fc])
    return b.graph


def big_chain():
    # 88.9 MiB of weights (93218406 bytes) over 60 conv layers.
    total = 93218406
    b = Builder("chain_88_9mib")
    cur = b.node("input", "input", 0, 0, 32 * 32 * 3)
    per = total // 60
    for i in range(60):
        p = per if i < 59 else total - 59 * per
        cur = b.node(f"conv{i}", "conv2d", p, p * 256, 16 * 16 * 256, [cur])
    b.node("output", "output", 0, 0, 0, [cur])
    return b.graph


if __name__ == "__main__":
    dump(HERE / "inception_block.json", inception())
    dump(HERE / "resnet_like_d209.json", resnet_like())
    dump(HERE / "chain_88_9mib.json", big_chain())
