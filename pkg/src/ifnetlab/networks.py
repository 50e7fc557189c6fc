"""Stock topologies and small channels used throughout tests and demos.

Every constructor returns validated objects; channels are checked against
their declared adjacency on construction.
"""

from __future__ import annotations

import itertools

import numpy as np

from .config import Caps
from .netmodel import (
    DiscreteChannel,
    GaussianNetwork,
    NetworkTopology,
    build_topology,
    make_channel,
)


def cic_topology(k: int = 2) -> NetworkTopology:
    """K transmitter-receiver pairs, every link present."""
    msgs = [f"M{i+1}" for i in range(k)]
    return build_topology(
        k, k,
        [[m] for m in msgs],
        [[m] for m in msgs],
        [[True] * k for _ in range(k)],
    )


def cic_cm_topology() -> NetworkTopology:
    """Two-user interference channel with a common message M0."""
    return build_topology(
        2, 2,
        [["M0", "M1"], ["M0", "M2"]],
        [["M0", "M1"], ["M0", "M2"]],
        [[True, True], [True, True]],
    )


def one_sided_cic_topology(common: bool = False) -> NetworkTopology:
    """Receiver 2 hears only transmitter 2 (Z-interference shape)."""
    if common:
        return build_topology(
            2, 2,
            [["M0", "M1"], ["M0", "M2"]],
            [["M0", "M1"], ["M0", "M2"]],
            [[True, True], [False, True]],
        )
    return build_topology(
        2, 2,
        [["M1"], ["M2"]],
        [["M1"], ["M2"]],
        [[True, True], [False, True]],
    )


def bccr_topology(one_sided: bool = False) -> NetworkTopology:
    """Broadcasting node XB plus two message-aware relays X1, X2."""
    adj = [[True, True, True], [False, True, True]] if one_sided else \
        [[True, True, True], [True, True, True]]
    return build_topology(
        3, 2,
        [["M1"], ["M2"], ["M0", "M1", "M2"]],
        [["M0", "M1"], ["M0", "M2"]],
        adj,
        tx_names=("X1", "X2", "XB"),
    )


def crccm_topology() -> NetworkTopology:
    """Cognitive radio channel with common message: XB knows everything."""
    return build_topology(
        2, 2,
        [["M1"], ["M0", "M1", "M2"]],
        [["M0", "M1"], ["M0", "M2"]],
        [[True, True], [True, True]],
        tx_names=("X1", "XB"),
    )


def many_to_one_topology() -> NetworkTopology:
    """3-user CIC where only receiver 1 experiences interference."""
    return build_topology(
        3, 3,
        [["M1"], ["M2"], ["M3"]],
        [["M1"], ["M2"], ["M3"]],
        [[True, True, True], [False, True, False], [False, False, True]],
    )


def cyclic_z_topology() -> NetworkTopology:
    """3-user CIC where each receiver hears its own and the next transmitter."""
    return build_topology(
        3, 3,
        [["M1"], ["M2"], ["M3"]],
        [["M1"], ["M2"], ["M3"]],
        [[True, True, False], [False, True, True], [True, False, True]],
    )


def bc_topology(k: int) -> NetworkTopology:
    """Single transmitter broadcasting one private message per receiver."""
    msgs = [f"M{j+1}" for j in range(k)]
    return build_topology(
        1, k, [msgs], [[m] for m in msgs], [[True]] * k, tx_names=("X",)
    )


def main2_topology() -> NetworkTopology:
    """Two-receiver MAIN with transmitter groups {X11,X12} -> Y1, {X21} -> Y2."""
    return build_topology(
        3, 2,
        [["M1"], ["M2"], ["M3"]],
        [["M1", "M2"], ["M3"]],
        [[True, True, True], [True, True, True]],
        tx_names=("X11", "X12", "X21"),
    )


def main_topology(group_sizes: list[int]) -> NetworkTopology:
    """General MAIN: group j of transmitters serves receiver j only."""
    k2 = len(group_sizes)
    k1 = sum(group_sizes)
    tx_msgs, tx_names, msg_id = [], [], 0
    for j, mu in enumerate(group_sizes):
        for i in range(mu):
            msg_id += 1
            tx_msgs.append([f"M{msg_id}"])
            tx_names.append(f"X{j+1}{i+1}")
    rx_msgs = []
    pos = 0
    for mu in group_sizes:
        rx_msgs.append([f"M{m+1}" for m in range(pos, pos + mu)])
        pos += mu
    return build_topology(
        k1, k2, tx_msgs, rx_msgs, [[True] * k1 for _ in range(k2)], tx_names=tx_names
    )


def main_groups(topology: NetworkTopology) -> list[tuple[int, ...]]:
    """Transmitter groups of a MAIN: group j carries messages only for Y_j."""
    out = []
    for j in range(topology.k2):
        grp = tuple(
            i for i in range(topology.k1)
            if topology.tx_messages[i] <= topology.rx_messages[j]
        )
        out.append(grp)
    return out


# ---------------------------------------------------------------------------
# discrete channels
# ---------------------------------------------------------------------------


def channel_from_conditionals(topology, input_cards, per_receiver, caps=Caps()):
    """Assemble the product law from per-receiver P(y_j | x-tuple) tables.

    per_receiver[j] maps input tuples to a distribution over y_j; supplied as
    an ndarray of shape input_cards + (card_yj,).
    """
    out_cards = [t.shape[-1] for t in per_receiver]
    tensor = np.ones(tuple(input_cards) + tuple(out_cards))
    for j, table in enumerate(per_receiver):
        shape = tuple(input_cards) + tuple(
            out_cards[j] if jj == j else 1 for jj in range(len(out_cards))
        )
        tensor = tensor * table.reshape(shape)
    return make_channel(topology, input_cards, out_cards, tensor, caps=caps)


def deterministic_receiver(input_cards, fn, out_card):
    """P(y_j|x) table for y_j = fn(x tuple)."""
    table = np.zeros(tuple(input_cards) + (out_card,))
    for x in itertools.product(*[range(c) for c in input_cards]):
        table[x + (fn(*x),)] = 1.0
    return table


def noisy_receiver(input_cards, fn, out_card, flip: np.ndarray):
    """Deterministic map followed by a DMC `flip` (out_card x out_card)."""
    det = deterministic_receiver(input_cards, fn, out_card)
    return det @ np.asarray(flip)


def swap_channel() -> DiscreteChannel:
    """Y1 = X2, Y2 = X1 over binary alphabets."""
    topo = cic_topology(2)
    y1 = deterministic_receiver((2, 2), lambda x1, x2: x2, 2)
    y2 = deterministic_receiver((2, 2), lambda x1, x2: x1, 2)
    return channel_from_conditionals(topo, (2, 2), [y1, y2])


def parallel_channel(diagonal: bool = False) -> DiscreteChannel:
    """Y1 = X1, Y2 = X2: clean private links.

    By default the standard fully-connected topology is declared (the cross
    links simply go unused); diagonal=True declares the intrinsic adjacency
    instead.
    """
    if diagonal:
        topo = build_topology(
            2, 2, [["M1"], ["M2"]], [["M1"], ["M2"]],
            [[True, False], [False, True]],
        )
    else:
        topo = cic_topology(2)
    y1 = deterministic_receiver((2, 2), lambda x1, x2: x1, 2)
    y2 = deterministic_receiver((2, 2), lambda x1, x2: x2, 2)
    return channel_from_conditionals(topo, (2, 2), [y1, y2])


def both_see_all_channel(topology=None) -> DiscreteChannel:
    """Y1 = Y2 = (X1, X2): the compound-MAC-friendly identity pair."""
    topo = topology or cic_topology(2)
    f = deterministic_receiver((2, 2), lambda x1, x2: 2 * x1 + x2, 4)
    return channel_from_conditionals(topo, (2, 2), [f, f])


def cross_observation_channel(p1: float, p2: float) -> DiscreteChannel:
    """Y1 = (X2, BSC_p1(X1)), Y2 = (X1, BSC_p2(X2)).

    Each receiver hears the other sender cleanly, so decoding both messages
    at both receivers is never worse: a structurally strong-interference
    family.
    """
    topo = cic_topology(2)
    flip1 = np.asarray([[1 - p1, p1], [p1, 1 - p1]])
    flip2 = np.asarray([[1 - p2, p2], [p2, 1 - p2]])
    y1 = np.zeros((2, 2, 4))
    y2 = np.zeros((2, 2, 4))
    for x1, x2 in itertools.product(range(2), repeat=2):
        for v in range(2):
            y1[x1, x2, 2 * x2 + v] = flip1[x1, v]
            y2[x1, x2, 2 * x1 + v] = flip2[x2, v]
    return channel_from_conditionals(topo, (2, 2), [y1, y2])


def cross_observation_random(rng: np.random.Generator) -> DiscreteChannel:
    """Y1 = (X2, C1(X1)), Y2 = (X1, C2(X2)) with random private DMCs."""
    topo = cic_topology(2)
    c1 = rng.dirichlet(np.ones(2), size=2)
    c2 = rng.dirichlet(np.ones(2), size=2)
    y1 = np.zeros((2, 2, 4))
    y2 = np.zeros((2, 2, 4))
    for x1, x2 in itertools.product(range(2), repeat=2):
        for v in range(2):
            y1[x1, x2, 2 * x2 + v] = c1[x1, v]
            y2[x1, x2, 2 * x1 + v] = c2[x2, v]
    return channel_from_conditionals(topo, (2, 2), [y1, y2])


def xor_equal_noise_channel(p: float) -> DiscreteChannel:
    """Y1 = Y2 = X1 xor X2 xor N with the same flip probability at both."""
    topo = cic_topology(2)
    flip = np.asarray([[1 - p, p], [p, 1 - p]])
    y = noisy_receiver((2, 2), lambda x1, x2: x1 ^ x2, 2, flip)
    return channel_from_conditionals(topo, (2, 2), [y, y])


def xor3_channel(p: float = 0.0) -> DiscreteChannel:
    """3-user CIC, every receiver sees X1 xor X2 xor X3 through BSC(p)."""
    topo = cic_topology(3)
    flip = np.asarray([[1 - p, p], [p, 1 - p]])
    y = noisy_receiver((2, 2, 2), lambda a, b, c: a ^ b ^ c, 2, flip)
    return channel_from_conditionals(topo, (2, 2, 2), [y, y, y])


def parallel3_channel() -> DiscreteChannel:
    """Y_j = X_j for three users (generic non-strong channel)."""
    topo = cic_topology(3)
    outs = [
        deterministic_receiver((2, 2, 2), lambda a, b, c, j=j: (a, b, c)[j], 2)
        for j in range(3)
    ]
    return channel_from_conditionals(topo, (2, 2, 2), outs)


def many_to_one_strong_channel() -> DiscreteChannel:
    """Many-to-one 3-user channel where Y1 = (X1, X2, X3) and Y2, Y3 are noisy
    private links, putting the interference squarely in the strong regime."""
    topo = many_to_one_topology()
    y1 = deterministic_receiver((2, 2, 2), lambda a, b, c: 4 * a + 2 * b + c, 8)
    flip = np.asarray([[0.9, 0.1], [0.1, 0.9]])
    y2 = noisy_receiver((2, 2, 2), lambda a, b, c: b, 2, flip)
    y3 = noisy_receiver((2, 2, 2), lambda a, b, c: c, 2, flip)
    return channel_from_conditionals(topo, (2, 2, 2), [y1, y2, y3],
                                     caps=Caps(max_alphabet=8))


def one_sided_strong_channel() -> DiscreteChannel:
    """One-sided 2-user CIC with common message: Y1 = (X1, X2), Y2 = BSC(X2)."""
    topo = one_sided_cic_topology(common=True)
    y1 = deterministic_receiver((2, 2), lambda x1, x2: 2 * x1 + x2, 4)
    y2 = noisy_receiver((2, 2), lambda x1, x2: x2, 2,
                        np.asarray([[0.9, 0.1], [0.1, 0.9]]))
    return channel_from_conditionals(topo, (2, 2), [y1, y2])


def bccr_identity_channel(one_sided: bool = False) -> DiscreteChannel:
    """BCCR with Y1 = Y2 = (X1, X2, XB) (or Y2 = BSC(X2) when one-sided)."""
    topo = bccr_topology(one_sided=one_sided)
    full = deterministic_receiver((2, 2, 2), lambda a, b, c: 4 * a + 2 * b + c, 8)
    caps = Caps(max_alphabet=8)
    if one_sided:
        y2 = noisy_receiver((2, 2, 2), lambda a, b, c: b, 2,
                            np.asarray([[0.85, 0.15], [0.15, 0.85]]))
        return channel_from_conditionals(topo, (2, 2, 2), [full, y2], caps=caps)
    return channel_from_conditionals(topo, (2, 2, 2), [full, full], caps=caps)


def crccm_channel(p1: float = 0.1, p2: float = 0.2, more_capable: bool = True) -> DiscreteChannel:
    """CRCCM with Y_j = (X1, BSC_pj(XB)); p1 >= p2 makes Y2 more capable."""
    topo = crccm_topology()
    f1 = np.asarray([[1 - p1, p1], [p1, 1 - p1]])
    f2 = np.asarray([[1 - p2, p2], [p2, 1 - p2]])
    y1 = np.zeros((2, 2, 4))
    y2 = np.zeros((2, 2, 4))
    for x1, xb in itertools.product(range(2), repeat=2):
        for v in range(2):
            y1[x1, xb, 2 * x1 + v] = f1[xb, v]
            y2[x1, xb, 2 * x1 + v] = f2[xb, v]
    return channel_from_conditionals(topo, (2, 2), [y1, y2])


def degraded_bc_channel(k: int = 3, flips=(0.05, 0.15, 0.3)) -> DiscreteChannel:
    """K-user BC: Y_j = BSC(flips[j])(X); increasing flips give the (182) chain."""
    topo = bc_topology(k)
    outs = []
    for p in flips[:k]:
        outs.append(noisy_receiver((2,), lambda x: x, 2,
                                   np.asarray([[1 - p, p], [p, 1 - p]])))
    return channel_from_conditionals(topo, (2,), outs)


def two_letter_extension(channel: DiscreteChannel, caps=Caps()) -> DiscreteChannel:
    """Memoryless 2-tuple extension; alphabets square."""
    in2 = tuple(c * c for c in channel.input_cards)
    out2 = tuple(c * c for c in channel.output_cards)
    t = channel.tensor
    k1, k2 = channel.k1, channel.k2
    # P2(x^2-tuple -> y^2-tuple) = P(t=1) * P(t=2)
    a = np.tensordot(t, t, axes=0)  # (in1, out1, in2, out2) blocks
    n = k1 + k2
    perm = []
    for i in range(k1):
        perm.extend([i, n + i])
    for j in range(k2):
        perm.extend([k1 + j, n + k1 + j])
    a = np.transpose(a, perm)
    new_shape = in2 + out2
    a = a.reshape(new_shape)
    topo2 = NetworkTopology(
        channel.topology.k1, channel.topology.k2, channel.topology.messages,
        channel.topology.tx_messages, channel.topology.rx_messages,
        channel.topology.adjacency, channel.topology.tx_names,
        channel.topology.rx_names,
    )
    big = Caps(max_alphabet=max(caps.two_letter_state_cap, max(new_shape)),
               two_letter_state_cap=caps.two_letter_state_cap)
    if int(np.prod(in2)) > caps.two_letter_state_cap:
        from .errors import AlphabetTooLarge
        raise AlphabetTooLarge(
            f"2-letter input state space {int(np.prod(in2))} exceeds cap "
            f"{caps.two_letter_state_cap}"
        )
    return make_channel(topo2, in2, out2, a, caps=big, check_adjacency=False)


# ---------------------------------------------------------------------------
# Gaussian networks
# ---------------------------------------------------------------------------


def gaussian_cic(a: float, b: float, p1: float = 1.0, p2: float = 1.0) -> GaussianNetwork:
    """Standard-form 2-user Gaussian CIC: Y1 = X1 + a X2, Y2 = b X1 + X2."""
    return GaussianNetwork(cic_topology(2), np.asarray([[1.0, a], [b, 1.0]]), (p1, p2))


def gaussian_cic_cm(a: float, b: float, p1: float = 1.0, p2: float = 1.0) -> GaussianNetwork:
    return GaussianNetwork(cic_cm_topology(), np.asarray([[1.0, a], [b, 1.0]]), (p1, p2))


def gaussian_kcic(gains: np.ndarray, powers=None) -> GaussianNetwork:
    k = np.asarray(gains).shape[0]
    return GaussianNetwork(
        cic_topology(k), np.asarray(gains), tuple(powers or [1.0] * k)
    )


def kcic_gain_matrix(free: dict[tuple[int, int], float], k: int) -> np.ndarray:
    """Fill the K-user gain matrix from the cyclic free entries.

    free maps the positions {(1,K), (2,1), (3,2), ..., (K,K-1)} (1-based) to
    values with magnitude >= 1; all other off-diagonal gains follow from the
    proportionality chains of the K-user strong-interference regime.
    """
    a = np.eye(k)
    need = [(1, k)] + [(j, j - 1) for j in range(2, k + 1)]
    for pos in need:
        a[pos[0] - 1, pos[1] - 1] = float(free[pos])
    alpha = {}
    alpha[1] = 1.0 / a[0, k - 1]
    for j in range(2, k + 1):
        alpha[j] = 1.0 / a[j - 1, j - 2]
    # chain j relates rows (j-1, j) over columns != j (row 0 is row K for j=1)
    # solve unknowns iteratively until fixed point
    known = {(i, j): a[i, j] for i in range(k) for j in range(k)
             if i == j or (i + 1, j + 1) in need}
    for _ in range(k * k):
        progress = False
        for j in range(1, k + 1):
            r_num = k - 1 if j == 1 else j - 2  # row index (0-based) of numerator
            r_den = 0 if j == 1 else j - 1
            for col in range(k):
                if col == j - 1:
                    continue
                kn, kd = (r_num, col), (r_den, col)
                if kn in known and kd not in known:
                    known[kd] = known[kn] / alpha[j]
                    progress = True
                elif kd in known and kn not in known:
                    known[kn] = known[kd] * alpha[j]
                    progress = True
        if not progress:
            break
    for (i, j), v in known.items():
        a[i, j] = v
    return a
