"""Catalog-driven checkers for strong-interference / less-noisy / more-capable
conditions, plus desk-scale verifiers for the extension lemmas.

Every discrete condition is a list of mutual-information inequalities, each
quantified over a declared distribution family.  "For all pmfs" is
operationalized as: a simplex-grid pass at resolution g, 50 random Dirichlet
samples, then a local grid refinement (doubled resolution) around the
minimal-margin member.  Margins are rhs - lhs in bits:

  * any margin below -tol          -> FAILS (witness stored)
  * any margin in [-tol, -1e-9)    -> INCONCLUSIVE (too close to call)
  * otherwise (equality included)  -> HOLDS

Exact equality counts as satisfied: the paper's conditions are non-strict.
Gaussian gain criteria are a separate catalog checked algebraically; the two
namespaces are disjoint and a discrete verdict is never inferred from a
Gaussian evaluation.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .batchinfo import batched_cmi, batched_through_channel
from .config import DEFAULT_CONFIG, RunConfig
from .errors import (
    AlphabetTooLarge,
    CatalogUnknown,
    PreconditionNotEstablished,
    RatioViolation,
    TopologyMismatch,
)
from .infocalc import (
    Factor,
    FamilySpec,
    JointPmf,
    _factor_tables,
    conditional_mutual_information,
    induced_joint,
    simplex_grid,
)
from .netmodel import DiscreteChannel, GaussianNetwork, NetworkTopology, unconnected_messages
from . import networks

EQ_TOL = 1e-9  # numerical noise floor: margins >= -EQ_TOL count as satisfied
RANDOM_SAMPLES = 50


@dataclass(frozen=True)
class MIExpr:
    a: tuple[str, ...]
    b: tuple[str, ...]
    c: tuple[str, ...] = ()

    def render(self) -> str:
        inner = ",".join(self.a) + ";" + ",".join(self.b)
        if self.c:
            inner += "|" + ",".join(self.c)
        return f"I({inner})"


@dataclass(frozen=True)
class CondIneq:
    """lhs <= rhs quantified over `family` (a FamilySpec on the input side)."""

    lhs: MIExpr
    rhs: MIExpr
    family: FamilySpec
    label: str = ""


@dataclass
class ConditionReport:
    id: str
    verdict: str
    worst_margin_bits: float
    witness: JointPmf | None
    resolution: int
    per_inequality: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self) -> str:
        wit = None
        if self.witness is not None:
            wit = {
                "variables": list(self.witness.variables),
                "cards": list(self.witness.cards),
                "table": [float(x) for x in np.ravel(self.witness.table)],
            }
        return json.dumps(
            {
                "id": self.id,
                "verdict": self.verdict,
                "worst_margin_bits": self.worst_margin_bits,
                "witness_pmf": wit,
                "resolution": self.resolution,
                "inequalities": self.per_inequality,
                "notes": self.notes,
            },
            sort_keys=True,
        )


@dataclass(frozen=True)
class ConditionSpec:
    id: str
    anchor: str
    topology_check: Callable[[NetworkTopology], None]
    build: Callable[[DiscreteChannel, RunConfig, dict], tuple[list[CondIneq], list[str]]]
    special: Callable | None = None


# ---------------------------------------------------------------------------
# margin evaluation machinery
# ---------------------------------------------------------------------------


def _margins_for_tables(channel, variables, tables, ineq) -> tuple[np.ndarray, np.ndarray]:
    """(margin, lhs value) arrays for a stacked batch of input-side joints."""
    joint, joint_vars = batched_through_channel(tables, variables, channel)
    lhs = batched_cmi(joint, joint_vars, ineq.lhs.a, ineq.lhs.b, ineq.lhs.c)
    rhs = batched_cmi(joint, joint_vars, ineq.rhs.a, ineq.rhs.b, ineq.rhs.c)
    return rhs - lhs, lhs


def _stack_from_choices(spec: FamilySpec, stacks, combos) -> np.ndarray:
    """Assemble selected factor-index combinations into stacked joints."""
    variables = spec.variables
    axis = {v: i for i, v in enumerate(variables)}
    full = [spec.cards[v] for v in variables]
    out = np.ones([len(combos)] + full)
    for fi, f in enumerate(spec.factors):
        order = list(f.given) + list(f.targets)
        tabs = stacks[fi][[c[fi] for c in combos]]
        src = np.moveaxis(
            tabs,
            range(1, 1 + len(order)),
            [1 + sorted(axis[v] for v in order).index(axis[v]) for v in order],
        )
        shape = [len(combos)] + [1] * len(variables)
        for v in order:
            shape[1 + axis[v]] = spec.cards[v]
        out = out * src.reshape(shape)
    return out


def _random_factor_tables(spec: FamilySpec, f: Factor, rng, n: int) -> np.ndarray:
    tcards = tuple(spec.cards[v] for v in f.targets)
    gcards = tuple(spec.cards[v] for v in f.given)
    tsize = int(np.prod(tcards)) if tcards else 1
    gsize = int(np.prod(gcards)) if gcards else 1
    if f.kind == "uniform":
        return np.repeat(
            np.full((1,) + gcards + tcards, 1.0 / tsize), n, axis=0
        )
    if f.kind == "det":
        maps = rng.integers(0, tsize, size=(n, gsize))
        t = np.zeros((n, gsize, tsize))
        for i in range(n):
            t[i, np.arange(gsize), maps[i]] = 1.0
        return t.reshape(n, *gcards, *tcards)
    t = rng.dirichlet(np.ones(tsize), size=(n, gsize))
    return t.reshape(n, *gcards, *tcards)


def _neighbor_points(point: np.ndarray, g: int) -> list[np.ndarray]:
    """Resolution-2g simplex points within L-inf distance 1/g of `point`."""
    card = point.shape[0]
    base = np.round(point * 2 * g).astype(int)
    deltas = range(-2, 3)
    out = []
    for combo in itertools.product(deltas, repeat=card - 1):
        head = base[:-1] + np.asarray(combo)
        last = 2 * g - head.sum()
        if np.any(head < 0) or last < 0 or abs(last - base[-1]) > 2:
            continue
        out.append(np.concatenate([head, [last]]) / (2 * g))
    return out


def _evaluate_inequality(channel, ineq: CondIneq, cfg: RunConfig, rng):
    """Grid + random + refinement margins for one inequality.

    Returns (worst margin, witness tables index info, per-point lhs at worst,
    all-stage minimum classification data).
    """
    spec = ineq.family
    stacks = [_factor_tables(spec, f) for f in spec.factors]
    sizes = [len(s) for s in stacks]
    combos = list(itertools.product(*[range(n) for n in sizes]))
    worst = math.inf
    worst_tab = None
    worst_lhs = 0.0
    chunk = 32768
    worst_combo = None
    for s in range(0, len(combos), chunk):
        block = combos[s : s + chunk]
        tables = _stack_from_choices(spec, stacks, block)
        m, lhs = _margins_for_tables(channel, spec.variables, tables, ineq)
        i = int(np.argmin(m))
        if m[i] < worst:
            worst = float(m[i])
            worst_tab = tables[i].copy()
            worst_lhs = float(lhs[i])
            worst_combo = block[i]
    # stage 2: random Dirichlet members of the same factorization (the i-th
    # random table of every factor pairs into one member)
    variables = spec.variables
    rand_stacks = [
        _random_factor_tables(spec, f, rng, RANDOM_SAMPLES) for f in spec.factors
    ]
    tables = _stack_from_choices(
        spec, rand_stacks, [(i,) * len(spec.factors) for i in range(RANDOM_SAMPLES)]
    )
    m, lhs = _margins_for_tables(channel, variables, tables, ineq)
    i = int(np.argmin(m))
    if m[i] < worst:
        worst = float(m[i])
        worst_tab = tables[i].copy()
        worst_lhs = float(lhs[i])
        worst_combo = None
    # stage 3: local refinement at doubled resolution around the worst grid
    # member, one factor cell at a time
    if worst_combo is not None:
        g = spec.grid_resolution
        for fi, f in enumerate(spec.factors):
            if f.kind != "grid":
                continue
            base_tab = stacks[fi][worst_combo[fi]]
            tcards = tuple(spec.cards[v] for v in f.targets)
            gcards = tuple(spec.cards[v] for v in f.given)
            tsize = int(np.prod(tcards)) if tcards else 1
            gsize = int(np.prod(gcards)) if gcards else 1
            flat = base_tab.reshape(gsize, tsize)
            gres = spec.factor_resolution(f)
            if tsize > 5:
                continue  # neighbor count explodes combinatorially
            for cell in range(gsize):
                for candidate in _neighbor_points(flat[cell], gres):
                    new_flat = flat.copy()
                    new_flat[cell] = candidate
                    cand_stacks = list(stacks)
                    cand_tab = new_flat.reshape(base_tab.shape)[None, ...]
                    cand_stacks[fi] = cand_tab
                    combo = list(worst_combo)
                    combo[fi] = 0
                    tables = _stack_from_choices(spec, cand_stacks, [tuple(combo)])
                    m, lhs = _margins_for_tables(channel, variables, tables, ineq)
                    if m[0] < worst:
                        worst = float(m[0])
                        worst_tab = tables[0].copy()
                        worst_lhs = float(lhs[0])
    return worst, worst_tab, worst_lhs


def _classify(margins_info, tol: float):
    """Fold per-inequality worst margins into a verdict."""
    worst = min(m for m, _, _ in margins_info)
    if worst < -tol:
        return "FAILS", worst
    if worst < -EQ_TOL:
        return "INCONCLUSIVE", worst
    return "HOLDS", worst


def check_condition(
    channel: DiscreteChannel,
    cond_id: str,
    cfg: RunConfig = DEFAULT_CONFIG,
    **params,
) -> ConditionReport:
    """Evaluate a catalog condition on a discrete channel.

    Verdict semantics are described in the module docstring; the witness is
    the family member attaining the worst margin.
    """
    if cond_id not in CATALOG:
        raise CatalogUnknown(f"unknown condition id {cond_id!r}")
    entry = CATALOG[cond_id]
    if not isinstance(channel, DiscreteChannel):
        raise TopologyMismatch(f"{cond_id} expects a discrete channel")
    entry.topology_check(channel.topology)
    if entry.special is not None:
        return entry.special(channel, cfg, params)
    ineqs, notes = entry.build(channel, cfg, params)
    rng = np.random.default_rng(cfg.seed)
    infos = []
    details = []
    for ineq in ineqs:
        worst, tab, lhs = _evaluate_inequality(channel, ineq, cfg, rng)
        infos.append((worst, tab, lhs))
        details.append(
            {
                "label": ineq.label or f"{ineq.lhs.render()} <= {ineq.rhs.render()}",
                "worst_margin_bits": worst,
            }
        )
    if not infos:
        return ConditionReport(cond_id, "HOLDS", 0.0, None, cfg.grid, details,
                               notes + ["no nontrivial inequalities for this topology"])
    verdict, worst = _classify(infos, cfg.tol_bits)
    w_idx = int(np.argmin([m for m, _, _ in infos]))
    wit_tab = infos[w_idx][1]
    witness = (
        JointPmf(ineqs[w_idx].family.variables, wit_tab) if wit_tab is not None else None
    )
    return ConditionReport(cond_id, verdict, worst, witness, cfg.grid, details, notes)


# ---------------------------------------------------------------------------
# catalog construction helpers
# ---------------------------------------------------------------------------


def _cards_for(channel: DiscreteChannel, names: Sequence[str], cfg, extra=None) -> dict:
    cards = {}
    topo = channel.topology
    for v in names:
        if v in topo.tx_names:
            cards[v] = channel.input_cards[topo.tx_of(v)]
        elif extra and v in extra:
            cards[v] = extra[v]
        else:
            cards[v] = cfg.aux(v[0])
    return cards


def _family(channel, cfg, blocks, aux=None, g=None) -> FamilySpec:
    """Product family: one joint grid factor per block of variable names."""
    names = [v for blk in blocks for v in blk]
    cards = _cards_for(channel, names, cfg, aux)
    factors = tuple(Factor(tuple(blk), ()) for blk in blocks)
    return FamilySpec(factors, cards, g or cfg.grid)


def _expr(a, b, c=()) -> MIExpr:
    tup = lambda x: (x,) if isinstance(x, str) else tuple(x)
    return MIExpr(tup(a), tup(b), tup(c))


def _pair(channel, cfg, lhs, rhs, blocks, aux=None, label="", g=None) -> CondIneq:
    return CondIneq(lhs, rhs, _family(channel, cfg, blocks, aux, g), label)


# topology predicates


def _need(cond: bool, msg: str):
    if not cond:
        raise TopologyMismatch(msg)


def _check_cic(k):
    def chk(t: NetworkTopology):
        _need(t.k1 == k and t.k2 == k, f"expected {k}-user CIC")
        for i in range(k):
            _need(t.tx_messages[i] == frozenset({f"M{i+1}"}), "CIC message layout")
            _need(t.rx_messages[i] == frozenset({f"M{i+1}"}), "CIC message layout")
    return chk


def _check_full_adjacency(t: NetworkTopology):
    _need(all(all(row) for row in t.adjacency), "fully connected network expected")


def _check_cic_full(k):
    base = _check_cic(k)

    def chk(t):
        base(t)
        _check_full_adjacency(t)

    return chk


def _check_cic_cm(t: NetworkTopology):
    _need(t.k1 == 2 and t.k2 == 2, "two-user channel expected")
    _need(t.tx_messages == (frozenset({"M0", "M1"}), frozenset({"M0", "M2"})),
          "common-message CIC layout")


def _check_bccr(t: NetworkTopology):
    _need(t.k1 == 3 and t.k2 == 2, "BCCR has 3 transmitters, 2 receivers")
    _need(t.tx_names == ("X1", "X2", "XB"), "BCCR transmitter names X1,X2,XB")
    _need(t.tx_messages[2] == frozenset({"M0", "M1", "M2"}), "BCCR broadcast node messages")


def _check_crccm(t: NetworkTopology):
    _need(t.k1 == 2 and t.k2 == 2 and t.tx_names == ("X1", "XB"),
          "CRCCM has transmitters X1, XB")
    _need(t.tx_messages[1] >= t.tx_messages[0], "cognitive node knows primary message")


def _check_crc(t: NetworkTopology):
    _need(t.k1 == 2 and t.k2 == 2, "CRC is 2x2")
    _need(t.tx_messages[1] >= t.tx_messages[0], "cognitive transmitter knows M1")


def _check_two_rx(t: NetworkTopology):
    _need(t.k2 == 2, "two-receiver network expected")


def _check_one_sided(t: NetworkTopology):
    _check_two_rx(t)
    _need(not t.adjacency[1][0], "receiver 2 must be unconnected to transmitter 1")


def _check_bccr_one_sided(t: NetworkTopology):
    _check_bccr(t)
    _need(not t.adjacency[1][0], "one-sided BCCR: Y2 unconnected to X1")


def _check_many_to_one(t: NetworkTopology):
    _check_cic(3)(t)
    _need(t.adjacency == ((True, True, True), (False, True, False), (False, False, True)),
          "many-to-one adjacency expected")


def _check_cyclic_z(t: NetworkTopology):
    _check_cic(3)(t)
    _need(t.adjacency == ((True, True, False), (False, True, True), (True, False, True)),
          "cyclic Z adjacency expected")


def _check_bc(t: NetworkTopology):
    _need(t.k1 == 1, "broadcast channel has one transmitter")


def _check_main(t: NetworkTopology):
    groups = networks.main_groups(t)
    _need(all(g for g in groups), "MAIN: every receiver needs its own transmitter group")
    _need(sorted(i for g in groups for i in g) == list(range(t.k1)),
          "MAIN: transmitter groups must partition the transmitters")


# ---------------------------------------------------------------------------
# discrete catalog
# ---------------------------------------------------------------------------


def _b_2cic(ch, cfg, params):
    X1, X2 = ch.topology.tx_names
    Y1, Y2 = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr(X1, Y1, (X2,)), _expr(X1, Y2, (X2,)), [(X1,), (X2,)],
              label="interference strong at receiver 2"),
        _pair(ch, cfg, _expr(X2, Y2, (X1,)), _expr(X2, Y1, (X1,)), [(X1,), (X2,)],
              label="interference strong at receiver 1"),
    ], []


def _b_vsi(ch, cfg, params):
    X1, X2 = ch.topology.tx_names
    Y1, Y2 = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr(X1, Y1, (X2,)), _expr(X1, Y2), [(X1,), (X2,)]),
        _pair(ch, cfg, _expr(X2, Y2, (X1,)), _expr(X2, Y1), [(X1,), (X2,)]),
    ], []


def _b_zic(ch, cfg, params):
    X1, X2 = ch.topology.tx_names
    Y1, Y2 = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr(X2, Y2), _expr(X2, Y1, (X1,)), [(X1,), (X2,)]),
    ], []


def _b_crc13(ch, cfg, params):
    X1, X2 = ch.topology.tx_names
    Y1, Y2 = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr((X1, X2), Y2), _expr((X1, X2), Y1), [(X1, X2)]),
        _pair(ch, cfg, _expr(X1, Y1, (X2,)), _expr(X1, Y2, (X2,)), [(X1, X2)]),
    ], []


def _b_cic_ln(ch, cfg, params):
    X1, X2 = ch.topology.tx_names
    Y1, Y2 = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr("V", Y2, (X2,)), _expr("V", Y1, (X2,)),
              [("V", X1), (X2,)], aux={"V": cfg.aux("V")},
              label="auxiliary carriers favor receiver 1"),
        _pair(ch, cfg, _expr(X2, Y2, (X1,)), _expr(X2, Y1, (X1,)), [(X1,), (X2,)]),
    ], []


def _b_cic_1sided(ch, cfg, params):
    X1, X2 = ch.topology.tx_names
    Y1, Y2 = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr(X2, Y2), _expr(X2, Y1, (X1,)), [(X1,), (X2,)]),
    ], []


def _b_bccr_si(ch, cfg, params):
    X1, X2, XB = ch.topology.tx_names
    Y1, Y2 = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr((X1, XB), Y1, (X2,)), _expr((X1, XB), Y2, (X2,)),
              [(X1, XB), (X2,)]),
        _pair(ch, cfg, _expr((X2, XB), Y2, (X1,)), _expr((X2, XB), Y1, (X1,)),
              [(X2, XB), (X1,)]),
    ], []


def _b_bccr_ln(ch, cfg, params):
    X1, X2, XB = ch.topology.tx_names
    Y1, Y2 = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr("V", Y2, (X2,)), _expr("V", Y1, (X2,)),
              [("V", X1, XB), (X2,)], aux={"V": cfg.aux("V")}),
        _pair(ch, cfg, _expr((X2, XB), Y2, (X1,)), _expr((X2, XB), Y1, (X1,)),
              [(X1,), (X2, XB)]),
    ], []


def _b_bccr_z(ch, cfg, params):
    X1, X2, XB = ch.topology.tx_names
    Y1, Y2 = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr(X2, Y2), _expr((X2, XB), Y1, (X1,)), [(X1,), (X2, XB)]),
    ], []


def _generic_two_rx(ch, cfg, cover_sets):
    topo = ch.topology
    Y = topo.rx_names
    out, notes = [], []
    for j, other in ((0, 1), (1, 0)):
        cov = cover_sets[other]
        inside = [topo.tx_names[i] for i in topo.inputs_covered_by(cov)]
        outside = [v for v in topo.tx_names if v not in inside]
        if not outside:
            notes.append(
                f"interference condition at {Y[other]} is vacuous (both sides zero)"
            )
            continue
        blocks = [tuple(outside)] + [(v,) for v in inside]
        out.append(
            _pair(ch, cfg, _expr(outside, Y[j], inside), _expr(outside, Y[other], inside),
                  blocks, label=f"strong interference at {Y[other]}")
        )
    return out, notes


def _b_2rx_gen(ch, cfg, params):
    topo = ch.topology
    return _generic_two_rx(ch, cfg, [topo.rx_messages[0], topo.rx_messages[1]])


def _b_2rx_conn(ch, cfg, params):
    topo = ch.topology
    unc = unconnected_messages(topo)
    covers = [topo.rx_messages[j] | unc[j] for j in range(2)]
    return _generic_two_rx(ch, cfg, covers)


def _b_3cic_a(ch, cfg, params):
    X = ch.topology.tx_names
    Y = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr((X[1], X[2]), Y[2], (X[0],)), _expr((X[1], X[2]), Y[0], (X[0],)),
              [(X[0],), (X[1], X[2])]),
        _pair(ch, cfg, _expr((X[0], X[2]), Y[0], (X[1],)), _expr((X[0], X[2]), Y[1], (X[1],)),
              [(X[0], X[2]), (X[1],)]),
        _pair(ch, cfg, _expr((X[0], X[1]), Y[1], (X[2],)), _expr((X[0], X[1]), Y[2], (X[2],)),
              [(X[0], X[1]), (X[2],)]),
    ], []


def _b_3cic_b(ch, cfg, params):
    X = ch.topology.tx_names
    Y = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr(X[2], Y[2], (X[0], X[1])), _expr(X[2], Y[1], (X[0], X[1])),
              [(X[0],), (X[1],), (X[2],)]),
        _pair(ch, cfg, _expr((X[1], X[2]), Y[1], (X[0],)), _expr((X[1], X[2]), Y[0], (X[0],)),
              [(X[0],), (X[1], X[2])]),
        _pair(ch, cfg, _expr((X[0], X[2]), Y[0], (X[1],)), _expr((X[0], X[2]), Y[1], (X[1],)),
              [(X[0], X[2]), (X[1],)]),
        _pair(ch, cfg, _expr((X[0], X[1]), Y[1], (X[2],)), _expr((X[0], X[1]), Y[2], (X[2],)),
              [(X[0], X[1]), (X[2],)]),
    ], []


def _b_3cic_cyc(ch, cfg, params):
    X = ch.topology.tx_names
    Y = ch.topology.rx_names
    prod = [(X[0],), (X[1],), (X[2],)]
    return [
        _pair(ch, cfg, _expr(X[1], Y[1], (X[0], X[2])), _expr(X[1], Y[0], (X[0], X[2])), prod),
        _pair(ch, cfg, _expr(X[2], Y[2], (X[0], X[1])), _expr(X[2], Y[1], (X[0], X[1])), prod),
        _pair(ch, cfg, _expr(X[0], Y[0], (X[1], X[2])), _expr(X[0], Y[2], (X[1], X[2])), prod),
    ], []


def _b_many2one(ch, cfg, params):
    X = ch.topology.tx_names
    Y = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr((X[1], X[2]), (Y[1], Y[2])), _expr((X[2], X[1]), Y[0], (X[0],)),
              [(X[0],), (X[1], X[2])]),
    ], []


def _b_kcic(ch, cfg, params):
    topo = ch.topology
    k = topo.k1
    X, Y = topo.tx_names, topo.rx_names
    out = []
    for j in range(1, k + 1):
        cond = X[j - 1]
        others = tuple(x for x in X if x != cond)
        y_from = Y[k - 1] if j == 1 else Y[j - 2]
        y_to = Y[j - 1]
        out.append(
            _pair(ch, cfg, _expr(others, y_from, (cond,)), _expr(others, y_to, (cond,)),
                  [others, (cond,)],
                  label=f"chain step into receiver {j}")
        )
    return out, []


def th11_inequalities(topology: NetworkTopology, assignment: dict):
    """Raw (lhs vars, y_from, y_to, cond vars, blocks) data for Theorem-11
    conditions under a caller-supplied partition assignment.

    assignment[j] = list of (receiver-subset, message-subset) pairs covering
    M_{c->Y_j} - M_{Y_j}; entries must satisfy the inclusion (message subset
    inside the union of the named receivers' demands).
    """
    unc = unconnected_messages(topology)
    out = []
    for j in range(topology.k2):
        parts = assignment.get(j, [])
        conn = frozenset(topology.messages) - unc[j]
        leftover = conn - topology.rx_messages[j]
        if not leftover:
            continue
        covered = frozenset()
        for recs, msgs in parts:
            msgs = frozenset(msgs)
            union_dem = frozenset().union(*(topology.rx_messages[r] for r in recs))
            if not msgs <= union_dem:
                raise TopologyMismatch(
                    f"partition block {sorted(msgs)} not inside demands of receivers {recs}"
                )
            covered |= msgs
        if covered != leftover:
            raise TopologyMismatch(
                f"partition for receiver {j+1} must cover exactly {sorted(leftover)}"
            )
        lam = len(parts)
        for l in range(lam):
            s_msgs = frozenset().union(
                *(frozenset(m) for _, m in parts[l + 1 :]), topology.rx_messages[j], unc[j]
            )
            xs = [topology.tx_names[i] for i in topology.inputs_covered_by(s_msgs)]
            rest = [v for v in topology.tx_names if v not in xs]
            if not rest:
                continue
            y_from = tuple(topology.rx_names[r] for r in parts[l][0])
            y_to = (
                tuple(topology.rx_names[r] for r in parts[l + 1][0])
                if l + 1 < lam
                else (topology.rx_names[j],)
            )
            out.append((tuple(rest), y_from, y_to, tuple(xs)))
    return out


def th11_cyclic_assignment(topology: NetworkTopology) -> dict:
    """The single-step assignment j(1)={next receiver holding the messages}.

    For CIC-like networks this reproduces the cyclic chain conditions; for a
    receiver already decoding all its connected messages no entry is made.
    """
    unc = unconnected_messages(topology)
    out = {}
    for j in range(topology.k2):
        conn = frozenset(topology.messages) - unc[j]
        leftover = conn - topology.rx_messages[j]
        if not leftover:
            continue
        parts = []
        remaining = set(leftover)
        for step in range(1, topology.k2):
            r = (j + step) % topology.k2
            take = frozenset(remaining) & topology.rx_messages[r]
            if take:
                parts.append(((r,), take))
                remaining -= take
        if remaining:
            raise TopologyMismatch(
                f"cannot cover {sorted(remaining)} for receiver {j+1} cyclically"
            )
        out[j] = parts
    return out


def enumerate_th11_assignments(topology: NetworkTopology, max_messages: int = 6):
    """All Theorem-11 partition assignments, feasible when |M| <= max_messages.

    For each receiver, enumerates ordered set-partitions of its undemanded
    connected messages into blocks, each assigned a receiver subset that
    demands all of the block's messages (singleton receiver subsets only).
    """
    if len(topology.messages) > max_messages:
        raise AlphabetTooLarge(
            f"partition enumeration capped at {max_messages} messages"
        )
    unc = unconnected_messages(topology)
    per_receiver = []
    for j in range(topology.k2):
        conn = frozenset(topology.messages) - unc[j]
        leftover = sorted(conn - topology.rx_messages[j])
        if not leftover:
            per_receiver.append([[]])
            continue
        options = []
        for perm_blocks in _ordered_partitions(leftover):
            choices_per_block = []
            for block in perm_blocks:
                rs = [
                    ((r,), frozenset(block))
                    for r in range(topology.k2)
                    if r != j and frozenset(block) <= topology.rx_messages[r]
                ]
                choices_per_block.append(rs)
            if all(choices_per_block):
                for combo in itertools.product(*choices_per_block):
                    options.append(list(combo))
        per_receiver.append(options)
    for combo in itertools.product(*per_receiver):
        yield {j: parts for j, parts in enumerate(combo) if parts}


def _ordered_partitions(items):
    if not items:
        yield []
        return
    items = list(items)
    first = items[0]
    for sub in itertools.chain.from_iterable(
        itertools.combinations(items[1:], r) for r in range(len(items))
    ):
        block = [first, *sub]
        rest = [x for x in items[1:] if x not in sub]
        for tail in _ordered_partitions(rest):
            # block may appear at any position in the ordered partition
            for pos in range(len(tail) + 1):
                yield tail[:pos] + [block] + tail[pos:]


def _b_th11(ch, cfg, params):
    topo = ch.topology
    assignment = params.get("assignment") or th11_cyclic_assignment(topo)
    raw = th11_inequalities(topo, assignment)
    out = []
    for rest, y_from, y_to, xs in raw:
        blocks = [tuple(rest)] + [(v,) for v in xs]
        out.append(
            _pair(ch, cfg, _expr(rest, y_from, xs), _expr(rest, y_to, xs), blocks)
        )
    return out, [f"assignment covers {len(raw)} chain steps"]


def _b_cor4(ch, cfg, params):
    topo = ch.topology
    full = [j for j in range(topo.k2) if topo.rx_messages[j] == frozenset(topo.messages)]
    _need(bool(full), "Corollary-4 regime needs a receiver decoding all messages")
    ref = params.get("reference_receiver", full[-1])
    unc = unconnected_messages(topo)
    out = []
    for j in range(topo.k2):
        if j == ref:
            continue
        s_msgs = topo.rx_messages[j] | unc[j]
        xs = [topo.tx_names[i] for i in topo.inputs_covered_by(s_msgs)]
        rest = [v for v in topo.tx_names if v not in xs]
        if not rest:
            continue
        blocks = [tuple(rest)] + [(v,) for v in xs]
        out.append(
            _pair(ch, cfg,
                  _expr(rest, topo.rx_names[ref], xs),
                  _expr(rest, topo.rx_names[j], xs), blocks)
        )
    return out, [f"reference receiver {topo.rx_names[ref]}"]


def _b_main(ch, cfg, params):
    topo = ch.topology
    groups = networks.main_groups(topo)
    k2 = topo.k2
    X = topo.tx_names
    out = []
    for j in range(1, k2 + 1):
        cond_grp = groups[j - 1]
        cond = tuple(X[i] for i in cond_grp)
        others = tuple(X[i] for i in range(topo.k1) if i not in cond_grp)
        y_from = topo.rx_names[k2 - 1] if j == 1 else topo.rx_names[j - 2]
        y_to = topo.rx_names[j - 1]
        blocks = [others] + [(v,) for v in cond]
        out.append(
            _pair(ch, cfg, _expr(others, y_from, cond), _expr(others, y_to, cond), blocks)
        )
    return out, []


def _b_cycz(ch, cfg, params):
    topo = ch.topology
    groups = networks.main_groups(topo)
    X = topo.tx_names
    k2 = topo.k2
    out = []
    for l in range(k2):
        grp = tuple(X[i] for i in groups[l])
        rest = tuple(X[i] for i in range(topo.k1) if X[i] not in grp)
        y_own = topo.rx_names[l]
        y_prev = topo.rx_names[l - 1] if l > 0 else topo.rx_names[k2 - 1]
        blocks = [grp] + [(v,) for v in rest]
        out.append(
            _pair(ch, cfg, _expr(grp, y_own, rest), _expr(grp, y_prev, rest), blocks)
        )
    return out, []


def _b_o2m(ch, cfg, params):
    topo = ch.topology
    groups = networks.main_groups(topo)
    X = topo.tx_names
    g1 = tuple(X[i] for i in groups[0])
    rest = tuple(X[i] for i in range(topo.k1) if X[i] not in g1)
    blocks = [g1] + [(v,) for v in rest]
    out = []
    for j in range(1, topo.k2):
        gj = tuple(X[i] for i in groups[j])
        out.append(
            _pair(ch, cfg, _expr(g1, topo.rx_names[0]), _expr(g1, topo.rx_names[j], gj),
                  blocks)
        )
    return out, []


def _b_crccm_mc(ch, cfg, params):
    X1, XB = ch.topology.tx_names
    Y1, Y2 = ch.topology.rx_names
    return [
        _pair(ch, cfg, _expr((X1, XB), Y1), _expr((X1, XB), Y2), [(X1, XB)]),
    ], []


def _b_bc_mc_seq(ch, cfg, params):
    topo = ch.topology
    X = topo.tx_names[0]
    out = []
    for j in range(topo.k2 - 1):
        out.append(
            _pair(ch, cfg, _expr(X, topo.rx_names[j + 1]), _expr(X, topo.rx_names[j]),
                  [(X,)], label=f"{topo.rx_names[j]} more capable than {topo.rx_names[j+1]}")
        )
    return out, ["strict chain checked in closed (non-strict) form"]


def _special_main2_weak(channel, cfg, params):
    """Weakened MAIN conditions: product inputs with an arbitrary auxiliary D.

    The D-conditional cannot be gridded exhaustively, so it is sampled:
    random Dirichlet conditionals plus random deterministic maps, with the
    input factors on their usual grid.  Reported as a sampled check.
    """
    topo = channel.topology
    X11, X12, X21 = topo.tx_names
    Y1, Y2 = topo.rx_names
    card_d = min(cfg.aux("D", 4), 4)
    rng = np.random.default_rng(cfg.seed)
    cards = _cards_for(channel, (X11, X12, X21), cfg)
    cards["D"] = card_d
    spec = FamilySpec(
        (
            Factor((X11,), ()),
            Factor((X12,), ()),
            Factor((X21,), ()),
            Factor(("D",), (X11, X12, X21)),
        ),
        cards,
        max(2, cfg.grid // 2),
    )
    ineqs = [
        CondIneq(_expr((X11, X12), Y1, (X21, "D")), _expr((X11, X12), Y2, (X21, "D")), spec),
        CondIneq(_expr(X21, Y2, (X11, X12, "D")), _expr(X21, Y1, (X11, X12, "D")), spec),
    ]
    in_stacks = [_factor_tables(spec, f) for f in spec.factors[:3]]
    gsize = int(np.prod([cards[v] for v in (X11, X12, X21)]))
    d_tables = [rng.dirichlet(np.ones(card_d), size=gsize) for _ in range(40)]
    for _ in range(24):
        m = rng.integers(0, card_d, size=gsize)
        t = np.zeros((gsize, card_d))
        t[np.arange(gsize), m] = 1.0
        d_tables.append(t)
    d_stack = np.asarray(d_tables).reshape(
        len(d_tables), cards[X11], cards[X12], cards[X21], card_d
    )
    stacks = in_stacks + [d_stack]
    sizes = [len(s) for s in stacks]
    combos = list(itertools.product(*[range(n) for n in sizes]))
    worst = math.inf
    witness = None
    details = []
    for ineq in ineqs:
        w_i = math.inf
        for s in range(0, len(combos), 16384):
            block = combos[s : s + 16384]
            tables = _stack_from_choices(spec, stacks, block)
            m, _ = _margins_for_tables(channel, spec.variables, tables, ineq)
            i = int(np.argmin(m))
            if m[i] < w_i:
                w_i = float(m[i])
                if w_i < worst:
                    worst = w_i
                    witness = JointPmf(spec.variables, tables[i].copy())
        details.append({"label": ineq.lhs.render() + " <= " + ineq.rhs.render(),
                        "worst_margin_bits": w_i})
    verdict, worst = _classify([(worst, None, 0.0)], cfg.tol_bits)
    return ConditionReport(
        "C-MAIN2-WEAK", verdict, worst, witness, cfg.grid, details,
        ["D-conditional sampled (40 Dirichlet + 24 deterministic), not gridded"],
    )


CATALOG: dict[str, ConditionSpec] = {}


def _register(cid, anchor, topology_check, build=None, special=None):
    CATALOG[cid] = ConditionSpec(cid, anchor, topology_check, build, special)


_register("C-2CIC", "two-user strong interference", _check_cic_full(2), _b_2cic)
_register("C-VSI", "very strong interference", _check_cic_full(2), _b_vsi)
_register("C-ZIC", "one-sided strong interference", _check_one_sided, _b_zic)
_register("C-CRC-13", "cognitive channel strong interference (joint quantifier)",
          _check_crc, _b_crc13)
_register("C-CIC-LN", "less-noisy receiver 1, common-message channel",
          _check_cic_cm, _b_cic_ln)
_register("C-CICCM-SI", "strong interference with common message",
          _check_cic_cm, _b_2cic)
_register("C-CIC-1SIDED", "one-sided channel with common message",
          lambda t: (_check_cic_cm(t), _check_one_sided(t)), _b_cic_1sided)
_register("C-BCCR-SI", "BCCR strong interference", _check_bccr, _b_bccr_si)
_register("C-BCCR-LN", "BCCR less-noisy receiver 1", _check_bccr, _b_bccr_ln)
_register("C-BCCR-Z", "one-sided BCCR strong interference",
          _check_bccr_one_sided, _b_bccr_z)
_register("C-2RX-GEN", "general two-receiver strong interference",
          _check_two_rx, _b_2rx_gen)
_register("C-2RX-CONN", "two-receiver strong interference, connected messages",
          _check_two_rx, _b_2rx_conn)
_register("C-3CIC-A", "three-user regime A", _check_cic_full(3), _b_3cic_a)
_register("C-3CIC-B", "three-user regime B", _check_cic_full(3), _b_3cic_b)
_register("C-3CIC-CYC", "cyclic Z three-user regime", _check_cyclic_z, _b_3cic_cyc)
_register("C-MANY2ONE", "many-to-one strong interference",
          _check_many_to_one, _b_many2one)
_register("C-KCIC", "K-user chain regime", lambda t: _check_cic_full(t.k1)(t), _b_kcic)
_register("C-GEN-TH11", "general chain regime (caller-supplied partition)",
          lambda t: None, _b_th11)
_register("C-COR4", "all-decoding reference receiver regime", lambda t: None, _b_cor4)
_register("C-MAIN", "fully connected MAIN regime", _check_main, _b_main)
_register("C-CYCZ", "generalized cyclic Z regime", _check_main, _b_cycz)
_register("C-O2M", "one-to-many regime", _check_main, _b_o2m)
_register("C-CRCCM-MC", "more-capable cognitive channel", _check_crccm, _b_crccm_mc)
_register("C-BC-MC-SEQ", "broadcast more-capable sequence", _check_bc, _b_bc_mc_seq)
_register("C-MAIN2-WEAK", "weakened MAIN conditions with auxiliary D",
          lambda t: _need(t.tx_names == ("X11", "X12", "X21"),
                          "two-receiver MAIN with groups (2,1) expected"),
          special=_special_main2_weak)
# The two remaining catalog ids (C-CRC-NEW, C-3CIC-ALMOST) involve
# boundary-restricted parts and are registered by the regions module, which
# owns the sweep machinery they need.


def register_condition(cid, anchor, topology_check, build=None, special=None):
    _register(cid, anchor, topology_check, build, special)


def list_conditions() -> list[str]:
    return sorted(CATALOG)


# ---------------------------------------------------------------------------
# lemma verifiers
# ---------------------------------------------------------------------------


@dataclass
class LemmaReport:
    lemma: str
    samples: int
    max_violation_bits: float
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.max_violation_bits <= 1e-9


def _require_holds(channel, cond_id, cfg, precomputed=None) -> ConditionReport:
    rep = precomputed or check_condition(channel, cond_id, cfg)
    if rep.verdict != "HOLDS":
        raise PreconditionNotEstablished(
            f"{cond_id} must HOLD before extension checks (got {rep.verdict})"
        )
    return rep


def random_joint_with_aux(channel, card_d: int, rng, aux_name: str = "D",
                          extra_aux: dict | None = None) -> JointPmf:
    """Random joint over (aux, inputs); outputs attach via the channel law,
    so the Markov condition aux -> inputs -> outputs holds by construction."""
    cards = [card_d] + [int(c) for c in (extra_aux or {}).values()] + list(channel.input_cards)
    names = (aux_name, *((extra_aux or {}).keys()), *channel.topology.tx_names)
    flat = rng.dirichlet(np.ones(int(np.prod(cards))))
    return JointPmf(tuple(names), flat.reshape(cards))


def verify_extension_lemma(
    channel: DiscreteChannel,
    cond_id: str,
    n_samples: int = 200,
    cfg: RunConfig = DEFAULT_CONFIG,
    precomputed: ConditionReport | None = None,
    card_d: int | None = None,
) -> LemmaReport:
    """Check that grid-verified inequalities survive extra conditioning on D.

    The base condition must first HOLD over its product family; each sample
    is an arbitrary joint over (D, inputs) pushed through the channel, and
    the inequality is evaluated with D added to both conditioning sets.
    """
    _require_holds(channel, cond_id, cfg, precomputed)
    entry = CATALOG[cond_id]
    ineqs, _ = entry.build(channel, cfg, {})
    rng = np.random.default_rng(cfg.seed + 1)
    card = card_d or cfg.aux("D", 4)
    worst = 0.0
    for _ in range(n_samples):
        base = random_joint_with_aux(channel, card, rng)
        joint = induced_joint(base, channel)
        for ineq in ineqs:
            if any(v not in joint.variables for v in ineq.lhs.a):
                continue  # inequalities with their own auxiliaries keep them
            lhs = conditional_mutual_information(
                joint, ineq.lhs.a, ineq.lhs.b, ineq.lhs.c + ("D",)
            )
            rhs = conditional_mutual_information(
                joint, ineq.rhs.a, ineq.rhs.b, ineq.rhs.c + ("D",)
            )
            worst = max(worst, lhs - rhs)
    return LemmaReport("extension", n_samples, worst)


def verify_lemma4_extension(
    channel: DiscreteChannel,
    cond_id: str,
    n_samples: int = 200,
    cfg: RunConfig = DEFAULT_CONFIG,
    precomputed: ConditionReport | None = None,
) -> LemmaReport:
    """Less-noisy variant: inequalities carrying their own auxiliary U keep it
    and gain an extra arbitrary D on the conditioning side."""
    _require_holds(channel, cond_id, cfg, precomputed)
    entry = CATALOG[cond_id]
    ineqs, _ = entry.build(channel, cfg, {})
    rng = np.random.default_rng(cfg.seed + 2)
    worst = 0.0
    for _ in range(n_samples):
        for ineq in ineqs:
            aux = [v for v in ineq.family.variables
                   if v not in channel.topology.tx_names]
            extra = {v: ineq.family.cards[v] for v in aux}
            base = random_joint_with_aux(
                channel, cfg.aux("D", 4), rng, extra_aux=extra
            )
            joint = induced_joint(base, channel)
            lhs = conditional_mutual_information(
                joint, ineq.lhs.a, ineq.lhs.b, ineq.lhs.c + ("D",)
            )
            rhs = conditional_mutual_information(
                joint, ineq.rhs.a, ineq.rhs.b, ineq.rhs.c + ("D",)
            )
            worst = max(worst, lhs - rhs)
    return LemmaReport("less-noisy extension", n_samples, worst)


def verify_two_letter(
    channel: DiscreteChannel,
    cond_id: str,
    n_samples: int = 100,
    cfg: RunConfig = DEFAULT_CONFIG,
    precomputed: ConditionReport | None = None,
    card_d: int | None = None,
) -> LemmaReport:
    """Memoryless 2-tuple extension of a verified condition.

    Builds the product 2-letter channel, samples arbitrary joints over the
    squared input alphabets plus D, and checks the lifted inequalities.
    """
    _require_holds(channel, cond_id, cfg, precomputed)
    ch2 = networks.two_letter_extension(channel, cfg.caps)
    entry = CATALOG[cond_id]
    ineqs, _ = entry.build(channel, cfg, {})
    rng = np.random.default_rng(cfg.seed + 3)
    card = card_d or min(cfg.aux("D", 4), 3)
    worst = 0.0
    for _ in range(n_samples):
        base = random_joint_with_aux(ch2, card, rng)
        joint = induced_joint(base, ch2)
        for ineq in ineqs:
            if any(v not in joint.variables for v in ineq.lhs.a):
                continue
            lhs = conditional_mutual_information(
                joint, ineq.lhs.a, ineq.lhs.b, ineq.lhs.c + ("D",)
            )
            rhs = conditional_mutual_information(
                joint, ineq.rhs.a, ineq.rhs.b, ineq.rhs.c + ("D",)
            )
            worst = max(worst, lhs - rhs)
    return LemmaReport("two-letter", n_samples, worst)


# ---------------------------------------------------------------------------
# Gaussian catalog
# ---------------------------------------------------------------------------


@dataclass
class GainCheckReport:
    id: str
    verdict: bool
    witnesses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {"id": self.id, "verdict": self.verdict,
             "witnesses": {k: v for k, v in self.witnesses.items()},
             "notes": self.notes},
            sort_keys=True, default=float,
        )


RATIO_TOL = 1e-9


def _common_ratio(num: np.ndarray, den: np.ndarray):
    """alpha with num = alpha*den elementwise, or None."""
    alpha = None
    for a, b in zip(num, den):
        if abs(b) <= RATIO_TOL:
            if abs(a) > RATIO_TOL:
                return None
            continue
        r = a / b
        if alpha is None:
            alpha = r
        elif abs(r - alpha) > RATIO_TOL * max(1.0, abs(alpha)):
            return None
    return 0.0 if alpha is None else alpha


def lemma2_gain_check(a_row, b_row, mu1: int):
    """Proportionality of the first mu1 coefficients with |alpha| <= 1."""
    alpha = _common_ratio(np.asarray(a_row)[:mu1], np.asarray(b_row)[:mu1])
    ok = alpha is not None and abs(alpha) <= 1.0 + RATIO_TOL
    return ok, alpha


@dataclass(frozen=True)
class Lemma2Witness:
    alpha: float
    scale: float
    tail_coeffs: tuple[float, ...]
    noise_coeff: float
    mean_residual: float
    var_residual: float


def lemma2_witness(net: GaussianNetwork, mu1: int, alpha: float) -> Lemma2Witness:
    """Coefficients of the statistically-equivalent reconstruction of Y1.

    Y1~ = alpha*Y2 + sum_(i>mu1) (a_i - alpha*b_i) X_i + sqrt(1-alpha^2)*Z~,
    which matches Y1's conditional mean and unit variance exactly whenever
    the proportionality a_i = alpha*b_i holds on the first mu1 coefficients.
    """
    if abs(alpha) > 1.0 + RATIO_TOL:
        raise RatioViolation(f"|alpha| must be <= 1, got {alpha}")
    a_row = np.asarray(net.gains[0], dtype=float)
    b_row = np.asarray(net.gains[1], dtype=float)
    head = a_row[:mu1] - alpha * b_row[:mu1]
    if np.max(np.abs(head), initial=0.0) > RATIO_TOL:
        raise RatioViolation(
            "declared alpha does not satisfy the proportionality on the head"
        )
    tail = tuple(float(a_row[i] - alpha * b_row[i]) for i in range(mu1, len(a_row)))
    correction = np.concatenate([head, np.asarray(tail, dtype=float)])
    mean_coeffs = alpha * b_row + correction
    mean_residual = float(np.max(np.abs(mean_coeffs - a_row)))
    var = alpha**2 + (1 - alpha**2)
    return Lemma2Witness(
        alpha, 1.0, tail, math.sqrt(max(0.0, 1 - alpha**2)), mean_residual,
        abs(var - 1.0),
    )


def _g_lemma2(net, params):
    mu1 = int(params.get("mu1", 1))
    ok, alpha = lemma2_gain_check(net.gains[0], net.gains[1], mu1)
    return GainCheckReport("G-LEMMA2", bool(ok), {"alpha": alpha})


def _standard_form_2cic(net):
    g = net.gains
    _need(g.shape == (2, 2), "2x2 gain matrix expected")
    _need(abs(g[0, 0] - 1) <= RATIO_TOL and abs(g[1, 1] - 1) <= RATIO_TOL,
          "standard form has unit direct gains")
    return g[0, 1], g[1, 0]


def _g_2cic(net, params):
    a, b = _standard_form_2cic(net)
    ok = abs(a) >= 1 - RATIO_TOL and abs(b) >= 1 - RATIO_TOL
    return GainCheckReport("G-2CIC", bool(ok), {"a": a, "b": b})


def _g_crc(net, params):
    """Gaussian cognitive-channel criterion over the 41-point alpha grid.

    The paper leaves alpha unquantified; it is read here as universally
    quantified over [-1, 1], which is flagged in the report notes.
    """
    a, b = _standard_form_2cic(net)
    if abs(b) < 1 - RATIO_TOL:
        return GainCheckReport("G-CRC", False, {"a": a, "b": b},
                               ["|b| >= 1 failed"])
    for alpha in np.linspace(-1.0, 1.0, 41):
        if abs(1 + a * alpha) < abs(b + alpha) - RATIO_TOL:
            return GainCheckReport("G-CRC", False, {"alpha": float(alpha)},
                                   ["alpha grid is a fixed 41-point reading"])
        if abs(1 - a * alpha) < abs(b - alpha) - RATIO_TOL:
            return GainCheckReport("G-CRC", False, {"alpha": float(alpha)},
                                   ["alpha grid is a fixed 41-point reading"])
    return GainCheckReport("G-CRC", True, {"a": a, "b": b},
                           ["alpha grid is a fixed 41-point reading"])


def _g_bccr_ln(net, params):
    alpha = _common_ratio(net.gains[1], net.gains[0])
    ok = alpha is not None and abs(alpha) <= 1 + RATIO_TOL
    return GainCheckReport("G-BCCR-LN", bool(ok), {"alpha": alpha})


def _g_main2(net, params):
    groups = params.get("groups") or networks.main_groups(net.topology)
    _need(len(groups) == 2, "two-receiver MAIN expected")
    g = net.gains
    a1 = [g[0, i] for i in groups[0]]
    b1 = [g[1, i] for i in groups[0]]
    a2 = [g[0, i] for i in groups[1]]
    b2 = [g[1, i] for i in groups[1]]
    alpha = _common_ratio(np.asarray(a1), np.asarray(b1))
    beta = _common_ratio(np.asarray(b2), np.asarray(a2))
    ok = (
        alpha is not None and beta is not None
        and abs(alpha) <= 1 + RATIO_TOL and abs(beta) <= 1 + RATIO_TOL
    )
    return GainCheckReport("G-MAIN2", bool(ok), {"alpha": alpha, "beta": beta})


def _check_kcic_chains(g: np.ndarray):
    """alpha_j witnesses of the K-user proportionality chains, or None."""
    k = g.shape[0]
    alphas = []
    for j in range(1, k + 1):
        r_num = k - 1 if j == 1 else j - 2
        r_den = 0 if j == 1 else j - 1
        cols = [c for c in range(k) if c != j - 1]
        alpha = _common_ratio(g[r_num, cols], g[r_den, cols])
        if alpha is None or abs(alpha) > 1 + RATIO_TOL:
            return None
        alphas.append(alpha)
    return alphas


def _g_3cic(net, params):
    g = net.gains
    _need(g.shape == (3, 3), "3x3 gain matrix expected")
    _need(np.max(np.abs(np.diag(g) - 1)) <= RATIO_TOL, "standard form expected")
    conds = {
        "|a13|>=1": abs(g[0, 2]) >= 1 - RATIO_TOL,
        "|a21|>=1": abs(g[1, 0]) >= 1 - RATIO_TOL,
        "|a32|>=1": abs(g[2, 1]) >= 1 - RATIO_TOL,
        "a12=a13*a32": abs(g[0, 1] - g[0, 2] * g[2, 1]) <= RATIO_TOL * max(1, abs(g[0, 1])),
        "a31=a21*a32": abs(g[2, 0] - g[1, 0] * g[2, 1]) <= RATIO_TOL * max(1, abs(g[2, 0])),
        "a23=a21*a13": abs(g[1, 2] - g[1, 0] * g[0, 2]) <= RATIO_TOL * max(1, abs(g[1, 2])),
    }
    alphas = _check_kcic_chains(g)
    return GainCheckReport(
        "G-3CIC", bool(all(conds.values())),
        {"failed": [k for k, v in conds.items() if not v], "alphas": alphas},
    )


def _g_3cic_b(net, params):
    g = net.gains
    _need(g.shape == (3, 3), "3x3 gain matrix expected")
    ok = abs(g[1, 2]) >= 1 - RATIO_TOL
    alpha = _common_ratio(
        np.asarray([g[1, 0], 1.0, g[1, 2]]),
        np.asarray([1.0, g[0, 1], g[0, 2]]),
    )
    ok = ok and alpha is not None and abs(abs(alpha) - 1.0) <= RATIO_TOL
    beta = _common_ratio(np.asarray([g[1, 0], 1.0]), np.asarray([g[2, 0], g[2, 1]]))
    ok = ok and beta is not None and abs(beta) <= 1 + RATIO_TOL
    return GainCheckReport("G-3CIC-B", bool(ok), {"alpha": alpha, "beta": beta})


def _g_3cic_almost(net, params):
    g = net.gains
    p = net.powers
    conds = {
        "|a12|>=1": abs(g[0, 1]) >= 1 - RATIO_TOL,
        "|a13|>=sqrt(P1+a12^2 P2+1)": abs(g[0, 2])
        >= math.sqrt(p[0] + g[0, 1] ** 2 * p[1] + 1) - RATIO_TOL,
        "|a21|>=1": abs(g[1, 0]) >= 1 - RATIO_TOL,
        "|a32|>=1": abs(g[2, 1]) >= 1 - RATIO_TOL,
        "a31=a21*a32": abs(g[2, 0] - g[1, 0] * g[2, 1]) <= RATIO_TOL * max(1, abs(g[2, 0])),
        "a23=a21*a13": abs(g[1, 2] - g[1, 0] * g[0, 2]) <= RATIO_TOL * max(1, abs(g[1, 2])),
    }
    return GainCheckReport(
        "G-3CIC-ALMOST", bool(all(conds.values())),
        {"failed": [k for k, v in conds.items() if not v]},
    )


def _g_kcic(net, params):
    g = net.gains
    k = g.shape[0]
    _need(g.shape == (k, k) and k >= 2, "square gain matrix expected")
    _need(np.max(np.abs(np.diag(g) - 1)) <= RATIO_TOL, "standard form expected")
    alphas = _check_kcic_chains(g)
    return GainCheckReport(
        "G-KCIC", alphas is not None,
        {"alphas": alphas} if alphas is not None else {},
    )


GAUSSIAN_CATALOG = {
    "G-LEMMA2": _g_lemma2,
    "G-2CIC": _g_2cic,
    "G-CRC": _g_crc,
    "G-BCCR-LN": _g_bccr_ln,
    "G-MAIN2": _g_main2,
    "G-3CIC": _g_3cic,
    "G-3CIC-B": _g_3cic_b,
    "G-3CIC-ALMOST": _g_3cic_almost,
    "G-KCIC": _g_kcic,
}


def gaussian_gain_check(net: GaussianNetwork, gid: str, **params) -> GainCheckReport:
    """Exact algebraic check of a Gaussian gain criterion.

    Gaussian ids form a namespace disjoint from the discrete catalog; their
    verdicts never stand in for a discrete HOLDS.
    """
    if gid not in GAUSSIAN_CATALOG:
        raise CatalogUnknown(f"unknown gaussian condition id {gid!r}")
    if not isinstance(net, GaussianNetwork):
        raise TopologyMismatch(f"{gid} expects a GaussianNetwork")
    return GAUSSIAN_CATALOG[gid](net, params)


def list_gaussian_conditions() -> list[str]:
    return sorted(GAUSSIAN_CATALOG)
