#!/usr/bin/env python3
"""Write a handful of channel-spec JSON files for CLI experiments.

Usage: python scripts/make_example_channels.py [outdir]
"""

import json
import sys
from pathlib import Path

import numpy as np

from ifnetlab import networks as nw


def spec_from_channel(channel, kind="discrete"):
    topo = channel.topology
    doc = {
        "k1": topo.k1,
        "k2": topo.k2,
        "tx_messages": [sorted(s) for s in topo.tx_messages],
        "rx_messages": [sorted(s) for s in topo.rx_messages],
        "adjacency": [[bool(x) for x in row] for row in topo.adjacency],
        "kind": kind,
    }
    if topo.tx_names != tuple(f"X{i+1}" for i in range(topo.k1)):
        doc["tx_names"] = list(topo.tx_names)
    if kind == "discrete":
        doc["discrete"] = {
            "alphabets_in": list(channel.input_cards),
            "alphabets_out": list(channel.output_cards),
            "tensor": [float(x) for x in np.ravel(channel.tensor)],
        }
    else:
        doc["gaussian"] = {
            "gains": [[float(x) for x in row] for row in channel.gains],
            "powers": list(channel.powers),
        }
    return doc


def xor_cm(p):
    topo = nw.cic_cm_topology()
    f = np.asarray([[1 - p, p], [p, 1 - p]])
    y = nw.noisy_receiver((2, 2), lambda a, b: a ^ b, 2, f)
    return nw.channel_from_conditionals(topo, (2, 2), [y, y])


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "channels")
    out.mkdir(parents=True, exist_ok=True)
    examples = {
        "swap.json": (nw.swap_channel(), "discrete"),
        "parallel.json": (nw.parallel_channel(), "discrete"),
        "xor_cm_p10.json": (xor_cm(0.10), "discrete"),
        "cross_obs.json": (nw.cross_observation_channel(0.1, 0.2), "discrete"),
        "many_to_one.json": (nw.many_to_one_strong_channel(), "discrete"),
        "xor3.json": (nw.xor3_channel(0.1), "discrete"),
        "crccm.json": (nw.crccm_channel(), "discrete"),
        "gauss_strong.json": (nw.gaussian_cic(1.5, 2.0), "gaussian"),
        "gauss_lessnoisy.json": (nw.gaussian_cic_cm(2.0, 0.5), "gaussian"),
        "gauss_3user.json": (
            nw.gaussian_kcic(nw.kcic_gain_matrix(
                {(1, 3): 2.0, (2, 1): 3.0, (3, 2): 1.5}, 3)),
            "gaussian",
        ),
    }
    for name, (ch, kind) in examples.items():
        (out / name).write_text(json.dumps(spec_from_channel(ch, kind), indent=1))
        print(f"wrote {out / name}")


if __name__ == "__main__":
    main()
