"""Single-hop interference network models.

A topology fixes who sends and who decodes which message, plus a declared
connectivity adjacency.  Channels (discrete transition tensors or Gaussian
gain matrices) are validated against their topology; for discrete channels
the adjacency is re-derived from the law and a mismatch is a hard error,
since connectivity is intrinsic to the transition probability.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Sequence

import numpy as np

from .config import Caps
from .errors import (
    AdjacencyMismatch,
    AlphabetMismatch,
    AlphabetTooLarge,
    AmbiguousConnectivity,
    CoverageViolation,
    InputError,
    OrphanMessage,
)

CONNECTIVITY_TOL = 1e-12
# marginal differences in (tol, AMBIGUITY_FACTOR*tol] are rejected as
# undecidable rather than guessed either way
AMBIGUITY_FACTOR = 1e3


@dataclass(frozen=True)
class NetworkTopology:
    """k1 transmitters, k2 receivers, message assignment and adjacency.

    adjacency[j][i] is True when transmitter i is connected to receiver j.
    """

    k1: int
    k2: int
    messages: tuple[str, ...]
    tx_messages: tuple[frozenset, ...]
    rx_messages: tuple[frozenset, ...]
    adjacency: tuple[tuple[bool, ...], ...]
    tx_names: tuple[str, ...] = ()
    rx_names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.tx_names:
            object.__setattr__(self, "tx_names", tuple(f"X{i+1}" for i in range(self.k1)))
        if not self.rx_names:
            object.__setattr__(self, "rx_names", tuple(f"Y{j+1}" for j in range(self.k2)))

    def tx_of(self, name: str) -> int:
        return self.tx_names.index(name)

    def rx_of(self, name: str) -> int:
        return self.rx_names.index(name)

    def connected_tx(self, j: int) -> tuple[int, ...]:
        return tuple(i for i in range(self.k1) if self.adjacency[j][i])

    def unconnected_tx(self, j: int) -> tuple[int, ...]:
        return tuple(i for i in range(self.k1) if not self.adjacency[j][i])

    def senders_of(self, message: str) -> frozenset:
        return frozenset(i for i in range(self.k1) if message in self.tx_messages[i])

    def demanders_of(self, message: str) -> frozenset:
        return frozenset(j for j in range(self.k2) if message in self.rx_messages[j])

    def inputs_covered_by(self, omega: Iterable[str]) -> tuple[int, ...]:
        """Transmitters whose whole message set lies inside omega."""
        om = frozenset(omega)
        return tuple(i for i in range(self.k1) if self.tx_messages[i] <= om)


def build_topology(
    k1: int,
    k2: int,
    tx_messages: Sequence[Iterable[str]],
    rx_messages: Sequence[Iterable[str]],
    adjacency: Sequence[Sequence[bool]],
    tx_names: Sequence[str] = (),
    rx_names: Sequence[str] = (),
) -> NetworkTopology:
    """Validate and freeze a topology.

    Rejects messages demanded by a receiver that none of its connected
    transmitters carries, and messages with no sender or no demander.
    """
    tx_sets = tuple(frozenset(s) for s in tx_messages)
    rx_sets = tuple(frozenset(s) for s in rx_messages)
    if len(tx_sets) != k1 or len(rx_sets) != k2:
        raise InputError("tx_messages/rx_messages lengths must match k1/k2")
    adj = tuple(tuple(bool(x) for x in row) for row in adjacency)
    if len(adj) != k2 or any(len(row) != k1 for row in adj):
        raise InputError("adjacency must be k2 x k1")
    sent = frozenset().union(*tx_sets) if tx_sets else frozenset()
    demanded = frozenset().union(*rx_sets) if rx_sets else frozenset()
    if sent != demanded:
        only = sorted(sent ^ demanded)
        raise OrphanMessage(f"messages without sender or demander: {only}")
    messages = tuple(sorted(sent))
    for m in messages:
        if not any(m in s for s in tx_sets):
            raise OrphanMessage(f"message {m!r} has no sender")
        if not any(m in s for s in rx_sets):
            raise OrphanMessage(f"message {m!r} has no demander")
    topo = NetworkTopology(k1, k2, messages, tx_sets, rx_sets, adj,
                           tuple(tx_names), tuple(rx_names))
    for j in range(k2):
        covered = frozenset().union(
            *(tx_sets[i] for i in topo.connected_tx(j)), frozenset()
        )
        missing = rx_sets[j] - covered
        if missing:
            raise CoverageViolation(
                f"receiver {j+1} demands {sorted(missing)} carried by no connected transmitter"
            )
    return topo


@dataclass(frozen=True)
class DiscreteChannel:
    """Finite-alphabet network law P(y-tuple | x-tuple).

    tensor has shape input_cards + output_cards; every conditional slice
    sums to 1 within 1e-12.
    """

    topology: NetworkTopology
    input_cards: tuple[int, ...]
    output_cards: tuple[int, ...]
    tensor: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.tensor, dtype=float)
        shape = tuple(self.input_cards) + tuple(self.output_cards)
        if t.shape != shape:
            t = t.reshape(shape)
        if np.any(t < -CONNECTIVITY_TOL):
            raise AlphabetMismatch("negative channel probability")
        sums = t.reshape(int(np.prod(self.input_cards)), -1).sum(axis=1)
        if np.max(np.abs(sums - 1.0)) > 1e-12:
            raise AlphabetMismatch(
                f"conditional slices must sum to 1, worst {np.max(np.abs(sums-1.0))}"
            )
        object.__setattr__(self, "tensor", np.clip(t, 0.0, None))

    @property
    def k1(self) -> int:
        return len(self.input_cards)

    @property
    def k2(self) -> int:
        return len(self.output_cards)


def make_channel(
    topology: NetworkTopology,
    input_cards: Sequence[int],
    output_cards: Sequence[int],
    tensor,
    caps: Caps = Caps(),
    check_adjacency: bool = True,
) -> DiscreteChannel:
    if max(list(input_cards) + list(output_cards)) > caps.max_alphabet:
        raise AlphabetTooLarge(
            f"alphabet exceeds cap {caps.max_alphabet}; raise Caps.max_alphabet to override"
        )
    if len(input_cards) != topology.k1 or len(output_cards) != topology.k2:
        raise AlphabetMismatch("alphabet counts must match topology")
    ch = DiscreteChannel(topology, tuple(input_cards), tuple(output_cards), tensor)
    if check_adjacency:
        # the law must never use a link the topology declares absent; a
        # declared link the law happens not to use is a degenerate parameter
        # choice and is allowed
        derived = derive_connectivity(ch)
        for j in range(topology.k2):
            for i in range(topology.k1):
                if derived[j][i] and not topology.adjacency[j][i]:
                    raise AdjacencyMismatch(
                        f"law depends on transmitter {i+1} at receiver {j+1}, "
                        "declared unconnected",
                        declared=topology.adjacency,
                        derived=derived,
                    )
    return ch


def derive_connectivity(channel: DiscreteChannel) -> tuple[tuple[bool, ...], ...]:
    """Re-derive adjacency from the law.

    Transmitter i is connected to receiver j iff some fixed setting of the
    other inputs gives two values of x_i with distinct Y_j marginals.  The
    decision tolerance is 1e-12 absolute; differences within three decades
    above it are rejected as ambiguous instead of being classified.
    """
    k1, k2 = channel.k1, channel.k2
    rows = []
    for j in range(k2):
        drop = tuple(k1 + a for a in range(k2) if a != j)
        marg = channel.tensor.sum(axis=drop) if drop else channel.tensor
        row = []
        for i in range(k1):
            m = np.moveaxis(marg, i, 0)  # (x_i, others..., y_j)
            diffs = np.abs(m[:, None, ...] - m[None, :, ...])
            worst = float(diffs.max())
            if worst <= CONNECTIVITY_TOL:
                row.append(False)
            elif worst >= CONNECTIVITY_TOL * AMBIGUITY_FACTOR:
                row.append(True)
            else:
                raise AmbiguousConnectivity(
                    f"marginal difference {worst:.3e} straddles the tolerance "
                    f"for transmitter {i+1} -> receiver {j+1}"
                )
        rows.append(tuple(row))
    return tuple(rows)


def unconnected_messages(topology: NetworkTopology) -> tuple[frozenset, ...]:
    """Per receiver, messages carried only by its unconnected transmitters."""
    out = []
    for j in range(topology.k2):
        conn = frozenset().union(
            *(topology.tx_messages[i] for i in topology.connected_tx(j)), frozenset()
        )
        unconn = frozenset().union(
            *(topology.tx_messages[i] for i in topology.unconnected_tx(j)), frozenset()
        )
        out.append(unconn - conn)
    return tuple(out)


def connected_messages(topology: NetworkTopology) -> tuple[frozenset, ...]:
    unc = unconnected_messages(topology)
    return tuple(frozenset(topology.messages) - u for u in unc)


@dataclass(frozen=True)
class GaussianNetwork:
    """Real gain matrix with unit-variance noise and per-input power budget."""

    topology: NetworkTopology
    gains: np.ndarray
    powers: tuple[float, ...]

    def __post_init__(self):
        g = np.asarray(self.gains, dtype=float)
        if g.shape != (self.topology.k2, self.topology.k1):
            raise AlphabetMismatch("gain matrix must be k2 x k1")
        if not np.all(np.isfinite(g)):
            raise InputError("gains must be finite")
        if any(p < 0 for p in self.powers):
            raise InputError("powers must be nonnegative")
        object.__setattr__(self, "gains", g)
        object.__setattr__(self, "powers", tuple(float(p) for p in self.powers))


# ---------------------------------------------------------------------------
# MACCM plan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MaccmPlan:
    """Messages grouped by their exact sender subset.

    groups maps a sender subset (frozenset of transmitter indices) to the
    message group carried by exactly that subset; columns orders the present
    groups by subset size; edges connect consecutive-size nested subsets.
    """

    topology: NetworkTopology
    groups: dict
    columns: tuple[frozenset, ...]
    edges: tuple[tuple[frozenset, frozenset], ...]
    demanders: dict = field(default_factory=dict)

    def label(self, delta: frozenset) -> str:
        return "{" + ",".join(str(i + 1) for i in sorted(delta)) + "}"

    def rate_var(self, delta: frozenset) -> str:
        return "R" + "".join(str(i + 1) for i in sorted(delta))

    def codeword_var(self, delta: frozenset) -> str:
        return "W" + "".join(str(i + 1) for i in sorted(delta))

    def connected_groups(self, j: int) -> tuple[frozenset, ...]:
        """Groups whose messages are connected to receiver j (all-or-none)."""
        conn = connected_messages(self.topology)[j]
        return tuple(d for d in self.columns if self.groups[d] <= conn)


def build_maccm_plan(topology: NetworkTopology) -> MaccmPlan:
    """Label every message by (sender set, demander set) and group by senders."""
    groups: dict = {}
    demanders: dict = {}
    for m in topology.messages:
        delta = topology.senders_of(m)
        groups.setdefault(delta, set()).add(m)
        demanders[m] = topology.demanders_of(m)
    frozen = {d: frozenset(s) for d, s in groups.items()}
    columns = tuple(sorted(frozen, key=lambda d: (len(d), tuple(sorted(d)))))
    edges = tuple(
        (d2, d1)
        for d2 in columns
        for d1 in columns
        if d2 < d1 and len(d1) == len(d2) + 1
    )
    return MaccmPlan(topology, frozen, columns, edges, demanders)


def enumerate_right_sided(
    plan: MaccmPlan, restrict_to: Iterable[frozenset] | None = None
) -> tuple[tuple[frozenset, ...], ...]:
    """All subsets of restrict_to closed downward under sender-set inclusion.

    Closure is relative to restrict_to: a member's subset-groups must be in
    the collection whenever they are present in restrict_to.  Deterministic
    order (by size, then by sorted labels); includes the empty collection.
    """
    pool = tuple(restrict_to) if restrict_to is not None else plan.columns
    pool = tuple(sorted(set(pool), key=lambda d: (len(d), tuple(sorted(d)))))
    for d in pool:
        if d not in plan.groups:
            raise InputError(f"not a plan group: {sorted(d)}")
    out = []
    for r in range(len(pool) + 1):
        for combo in itertools.combinations(pool, r):
            chosen = set(combo)
            ok = all(other in chosen for d in chosen for other in pool if other < d)
            if ok:
                out.append(tuple(combo))
    return tuple(out)


def is_right_sided(plan: MaccmPlan, collection: Iterable[frozenset], pool: Iterable[frozenset]) -> bool:
    chosen = set(collection)
    pool = set(pool)
    return all(other in chosen for d in chosen for other in pool if other <= d)


# ---------------------------------------------------------------------------
# channel-spec files
# ---------------------------------------------------------------------------


def _num(x) -> float:
    if isinstance(x, str):
        try:
            return float(Decimal(x))
        except InvalidOperation as e:
            raise InputError(f"bad probability literal {x!r}") from e
    if isinstance(x, (int, float)):
        return float(x)
    raise InputError(f"bad numeric entry {x!r}")


def load_channel_spec(path, caps: Caps = Caps()):
    """Read the JSON channel-spec format.

    Returns (topology, DiscreteChannel | GaussianNetwork).
    """
    try:
        with open(path) as f:
            doc = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read channel spec {path}: {e}") from e
    try:
        k1, k2 = int(doc["k1"]), int(doc["k2"])
        tx_messages = doc["tx_messages"]
        rx_messages = doc["rx_messages"]
        adjacency = doc["adjacency"]
        kind = doc["kind"]
    except KeyError as e:
        raise InputError(f"channel spec missing field {e}") from e
    topo = build_topology(
        k1, k2, tx_messages, rx_messages, adjacency,
        tx_names=doc.get("tx_names", ()), rx_names=doc.get("rx_names", ()),
    )
    if kind == "discrete":
        sub = doc.get("discrete", {})
        cards_in = [int(c) for c in sub["alphabets_in"]]
        cards_out = [int(c) for c in sub["alphabets_out"]]
        flat = [_num(x) for x in sub["tensor"]]
        need = int(np.prod(cards_in + cards_out))
        if len(flat) != need:
            raise InputError(f"tensor length {len(flat)} != product of alphabets {need}")
        tensor = np.asarray(flat).reshape(tuple(cards_in) + tuple(cards_out))
        try:
            return topo, make_channel(topo, cards_in, cards_out, tensor, caps=caps)
        except AlphabetMismatch as e:
            raise InputError(str(e)) from e
    if kind == "gaussian":
        sub = doc.get("gaussian", {})
        gains = [[_num(x) for x in row] for row in sub["gains"]]
        powers = [_num(x) for x in sub["powers"]]
        return topo, GaussianNetwork(topo, np.asarray(gains), tuple(powers))
    raise InputError(f"unknown channel kind {kind!r}")
