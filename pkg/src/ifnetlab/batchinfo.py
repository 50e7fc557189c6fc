"""Batched information measures over stacks of joint pmfs.

A batch is an ndarray of shape (B, *cards) whose slices along axis 0 are
joint pmfs over a shared ordered variable tuple.  These helpers mirror the
scalar functions in infocalc and are cross-checked against them in tests.
"""

from __future__ import annotations

import numpy as np

from .infocalc import JointPmf


def batched_entropy(tables: np.ndarray, var_axes: tuple[int, ...]) -> np.ndarray:
    """H(vars at var_axes) per batch member, in bits; axes exclude axis 0."""
    drop = tuple(i for i in range(1, tables.ndim) if i not in var_axes)
    m = tables.sum(axis=drop) if drop else tables
    m = m.reshape(m.shape[0], -1)
    mask = m > 0
    terms = np.where(mask, m * np.log2(np.where(mask, m, 1.0)), 0.0)
    return -terms.sum(axis=1)


def batched_cmi(
    tables: np.ndarray,
    variables: tuple[str, ...],
    a, b, c=(),
) -> np.ndarray:
    """I(A;B|C) per batch member via the four-entropy identity."""
    ax = {v: i + 1 for i, v in enumerate(variables)}
    A = tuple(ax[v] for v in a)
    B = tuple(ax[v] for v in b)
    C = tuple(ax[v] for v in c)
    h_ac = batched_entropy(tables, A + C)
    h_bc = batched_entropy(tables, B + C)
    h_abc = batched_entropy(tables, A + B + C)
    h_c = batched_entropy(tables, C) if C else 0.0
    val = h_ac + h_bc - h_abc - h_c
    return np.where(val > -1e-9, np.clip(val, 0.0, None), val)


def batched_through_channel(
    tables: np.ndarray, variables: tuple[str, ...], channel
) -> tuple[np.ndarray, tuple[str, ...]]:
    """Push (B, aux..., inputs...) batches through a DiscreteChannel.

    Variables may be in any order; the result's variable tuple is
    (aux..., tx..., rx...).
    """
    tx = channel.topology.tx_names
    rx = channel.topology.rx_names
    aux = tuple(v for v in variables if v not in tx)
    order = aux + tuple(tx)
    perm = [0] + [1 + variables.index(v) for v in order]
    t = np.transpose(tables, perm)
    a_shape = t.shape[1 : 1 + len(aux)]
    x_size = int(np.prod(channel.input_cards))
    t = t.reshape((t.shape[0],) + a_shape + (x_size,))
    ch = channel.tensor.reshape(x_size, -1)
    joint = t[..., :, None] * ch
    out_shape = (tables.shape[0],) + a_shape + tuple(channel.input_cards) + tuple(
        channel.output_cards
    )
    return joint.reshape(out_shape), order + tuple(rx)


def batch_member(tables: np.ndarray, variables: tuple[str, ...], idx: int) -> JointPmf:
    return JointPmf(variables, tables[idx])
