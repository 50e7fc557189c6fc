"""Unified outer-bound machinery: constraint-template enumeration for
two-receiver and multi-receiver networks, named specialization replays with
audited rewrite steps, and numeric evaluation at admissible distributions.

A full template picks disjoint receiver groups (J1, J2), a ladder of
pairwise-disjoint message subsets per group, and a side-information subset;
its partial-sum bound is a fixed ladder of mutual-information terms ending
in a min pair over the genie variable Z.  Reduced four-slot templates
(slots Omega0/Omega1/Omega2/Omega_s, six inequality shapes) are the forms
actually used when deriving computable bounds for specific topologies.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import Caps, DEFAULT_CONFIG, RunConfig
from .errors import (
    FactorizationViolation,
    InconsistentIdentification,
    TooLarge,
)
from .infocalc import JointPmf, conditional_mutual_information, induced_joint
from .netmodel import NetworkTopology
from .ratepoly import RatePolytope, make_polytope

# ---------------------------------------------------------------------------
# templates
# ---------------------------------------------------------------------------


def _zname(j1: tuple[int, ...], j2: tuple[int, ...], k2: int) -> str:
    if k2 == 2 and j1 == (0,) and j2 == (1,):
        return "Z"
    return "Z" + "".join(str(j + 1) for j in j1) + "_" + "".join(str(j + 1) for j in j2)


@dataclass(frozen=True)
class FullBoundTemplate:
    """One admissible selection of the ladder outer bound."""

    j1: tuple[int, ...]
    j2: tuple[int, ...]
    omegas1: tuple[tuple[str, ...], ...]
    omegas2: tuple[tuple[str, ...], ...]
    omega_s: tuple[str, ...]
    k2: int = 2

    @property
    def mu(self) -> int:
        return len(self.omegas1)

    @property
    def z(self) -> str:
        return _zname(self.j1, self.j2, self.k2)

    def lhs_messages(self) -> tuple[str, ...]:
        out = []
        for o in self.omegas1 + self.omegas2:
            out.extend(o)
        return tuple(sorted(out))

    def check_disjoint(self):
        seen = set()
        for o in self.omegas1 + self.omegas2:
            for m in o:
                if m in seen:
                    raise InconsistentIdentification(f"message {m} used twice")
                seen.add(m)
        if seen & set(self.omega_s):
            raise InconsistentIdentification("side-information overlaps the ladder")

    def terms(self, rx_names: Sequence[str]):
        """Ladder MI terms plus the trailing min pair, as (S, Y, C) triples."""
        y1 = tuple(rx_names[j] for j in self.j1)
        y2 = tuple(rx_names[j] for j in self.j2)
        z, q = self.z, "Q"
        terms = []
        hist: list[str] = []
        for l in range(self.mu):
            o1, o2 = self.omegas1[l], self.omegas2[l]
            c1 = (z, *hist, *o2, *self.omega_s, q)
            terms.append((o1, y1, c1))
            c2 = (z, *hist, *self.omega_s, q)
            terms.append((o2, y2, c2))
            hist.extend(o1)
            hist.extend(o2)
        min_pair = (
            ((z,), y1, (*self.omega_s, q)),
            ((z,), y2, (*self.omega_s, q)),
        )
        return terms, min_pair


@dataclass(frozen=True)
class ReducedBoundTemplate:
    """Four-slot reduced shape with one of the six inequality forms."""

    j1: tuple[int, ...]
    j2: tuple[int, ...]
    omega0: tuple[str, ...]
    omega1: tuple[str, ...]
    omega2: tuple[str, ...]
    omega_s: tuple[str, ...]
    form: int
    k2: int = 2

    @property
    def z(self) -> str:
        return _zname(self.j1, self.j2, self.k2)

    def lhs_messages(self) -> tuple[str, ...]:
        if self.form == 1:
            return tuple(sorted(self.omega0 + self.omega1))
        if self.form == 2:
            return tuple(sorted(self.omega0 + self.omega2))
        return tuple(sorted(self.omega0 + self.omega1 + self.omega2))

    def terms(self, rx_names: Sequence[str]):
        y1 = tuple(rx_names[j] for j in self.j1)
        y2 = tuple(rx_names[j] for j in self.j2)
        z, q = self.z, "Q"
        o0, o1, o2, os_ = self.omega0, self.omega1, self.omega2, self.omega_s
        if self.form == 1:
            return [((z, *o0, *o1), y1, (*os_, q))]
        if self.form == 2:
            return [((z, *o0, *o2), y2, (*os_, q))]
        if self.form == 3:
            return [
                (o1, y1, (z, *o0, *o2, *os_, q)),
                ((z, *o0, *o2), y2, (*os_, q)),
            ]
        if self.form == 4:
            return [
                (o2, y2, (z, *o0, *o1, *os_, q)),
                ((z, *o0, *o1), y1, (*os_, q)),
            ]
        if self.form == 5:
            return [
                (o1, y1, (z, *o0, *o2, *os_, q)),
                (o2, y2, (z, *o0, *os_, q)),
                ((z, *o0), y1, (*os_, q)),
            ]
        if self.form == 6:
            return [
                (o2, y2, (z, *o0, *o1, *os_, q)),
                (o1, y1, (z, *o0, *os_, q)),
                ((z, *o0), y2, (*os_, q)),
            ]
        raise InconsistentIdentification(f"form must be 1..6, got {self.form}")


def _receiver_pairs(topology: NetworkTopology, mode: str, group_cap: int):
    if mode == "TWO_RX":
        if topology.k2 != 2:
            raise TooLarge("TWO_RX mode requires exactly two receivers")
        return [((0,), (1,))]
    pairs = []
    idx = range(topology.k2)
    for r1 in range(1, group_cap + 1):
        for j1 in itertools.combinations(idx, r1):
            rest = [j for j in idx if j not in j1]
            for r2 in range(1, group_cap + 1):
                for j2 in itertools.combinations(rest, r2):
                    pairs.append((tuple(j1), tuple(j2)))
    return pairs


def enumerate_bound_templates(
    topology: NetworkTopology,
    mu_max: int,
    mode: str = "TWO_RX",
    caps: Caps = Caps(),
    group_cap: int = 2,
):
    """All admissible ladder selections plus the reduced four-slot forms.

    Selections are canonicalized (empty ladder slot pairs removed, messages
    sorted) so duplicates collapse; raises TOO_LARGE with the count when the
    enumeration would exceed the configured cap.
    """
    msgs = topology.messages
    full: dict = {}
    reduced: dict = {}
    for j1, j2 in _receiver_pairs(topology, mode, group_cap):
        m1 = frozenset().union(*(topology.rx_messages[j] for j in j1))
        m2 = frozenset().union(*(topology.rx_messages[j] for j in j2))
        cap_mu = min(mu_max, max(len(m1), len(m2)))
        for mu in range(1, cap_mu + 1):
            # each message picks: outside(0), slot/side, or side-information
            choices = []
            for m in msgs:
                opts = [("none",), ("s",)]
                for l in range(mu):
                    if m in m1:
                        opts.append(("1", l))
                    if m in m2:
                        opts.append(("2", l))
                choices.append(opts)
            count = int(np.prod([len(o) for o in choices]))
            if count > caps.max_templates:
                raise TooLarge(
                    f"selection count {count} for mu={mu} exceeds cap "
                    f"{caps.max_templates}",
                    count=count,
                )
            for assign in itertools.product(*choices):
                o1 = [[] for _ in range(mu)]
                o2 = [[] for _ in range(mu)]
                os_ = []
                for m, a in zip(msgs, assign):
                    if a[0] == "1":
                        o1[a[1]].append(m)
                    elif a[0] == "2":
                        o2[a[1]].append(m)
                    elif a[0] == "s":
                        os_.append(m)
                # canonical: drop slots empty on both sides, keep order
                slots = [
                    (tuple(sorted(a)), tuple(sorted(b)))
                    for a, b in zip(o1, o2)
                    if a or b
                ]
                if not slots:
                    continue
                key = (j1, j2, tuple(slots), tuple(sorted(os_)))
                if key in full:
                    continue
                full[key] = FullBoundTemplate(
                    j1, j2,
                    tuple(s[0] for s in slots),
                    tuple(s[1] for s in slots),
                    tuple(sorted(os_)),
                    topology.k2,
                )
        # reduced four-slot forms
        common = m1 & m2
        for assign in itertools.product(
            *[
                [
                    opt
                    for opt in ("none", "0", "1", "2", "s")
                    if (opt != "0" or m in common)
                    and (opt != "1" or m in m1)
                    and (opt != "2" or m in m2)
                ]
                for m in msgs
            ]
        ):
            o0, o1, o2, os_ = [], [], [], []
            for m, a in zip(msgs, assign):
                {"0": o0, "1": o1, "2": o2, "s": os_}.get(a, []).append(m)
            if not (o0 or o1 or o2):
                continue
            for form in range(1, 7):
                t = ReducedBoundTemplate(
                    j1, j2, tuple(o0), tuple(o1), tuple(o2), tuple(os_),
                    form, topology.k2,
                )
                reduced[(j1, j2, t.omega0, t.omega1, t.omega2, t.omega_s, form)] = t
    return list(full.values()), list(reduced.values())


def find_reduced(
    reduced: Iterable[ReducedBoundTemplate],
    omega0=(), omega1=(), omega2=(), omega_s=(), form=1, j1=(0,), j2=(1,),
) -> ReducedBoundTemplate:
    key = (
        tuple(j1), tuple(j2), tuple(sorted(omega0)), tuple(sorted(omega1)),
        tuple(sorted(omega2)), tuple(sorted(omega_s)), form,
    )
    for t in reduced:
        if (t.j1, t.j2, t.omega0, t.omega1, t.omega2, t.omega_s, t.form) == key:
            return t
    raise InconsistentIdentification(f"selection {key} not in enumeration")


# ---------------------------------------------------------------------------
# symbolic terms and rewrite steps
# ---------------------------------------------------------------------------


@dataclass
class SymTerm:
    """I(S; Y | C) over message/genie/input/time-sharing symbols."""

    s: tuple[str, ...]
    y: tuple[str, ...]
    c: tuple[str, ...]

    def render(self) -> str:
        inner = ",".join(self.s) + ";" + ",".join(self.y)
        if self.c:
            inner += "|" + ",".join(self.c)
        return f"I({inner})"


def _msgs_of(symbols, topology):
    return {x for x in symbols if x in topology.messages}


def _apply_step(term: SymTerm, step: dict, topology: NetworkTopology) -> tuple[SymTerm, str]:
    """Apply one audited rewrite rule; returns (new term, audit line).

    Rules: insert_inputs (equality; inputs whose messages are covered join),
    drop_s (equality by the Markov chain once all inputs are present),
    drop_c (conditioning on independent messages removed), move_to_s and
    add_s (monotone relaxations).
    """
    rule = step["rule"]
    s, c = set(term.s), set(term.c)
    if rule == "insert_inputs":
        placed_c, placed_s = [], []
        for i, xn in enumerate(topology.tx_names):
            if xn in s or xn in c:
                continue
            need = topology.tx_messages[i]
            if need <= _msgs_of(c, topology) and "Q" in c:
                c.add(xn)
                placed_c.append(xn)
            elif need <= _msgs_of(s | c, topology) and "Q" in (s | c):
                s.add(xn)
                placed_s.append(xn)
        note = f"insert inputs: {placed_s or '-'} into S, {placed_c or '-'} into C"
    elif rule == "drop_s":
        t = set(step["symbols"])
        if not t <= s:
            raise InconsistentIdentification(f"cannot drop {t - s} from S")
        remaining = (s - t) | c
        if not set(topology.tx_names) <= remaining:
            raise InconsistentIdentification(
                "drop from S needs every input present for the Markov argument"
            )
        s -= t
        note = f"drop {sorted(t)} from S (zero information given all inputs)"
    elif rule == "drop_c":
        t = set(step["symbols"])
        if not t <= c:
            raise InconsistentIdentification(f"cannot drop {t - c} from C")
        if not t <= set(topology.messages):
            raise InconsistentIdentification("only message symbols may leave C")
        c -= t
        note = f"drop {sorted(t)} from C (independent of the remaining pair)"
    elif rule == "move_to_s":
        t = set(step["symbols"])
        if not t <= c:
            raise InconsistentIdentification(f"cannot move {t - c}: not in C")
        c -= t
        s |= t
        note = f"move {sorted(t)} from C into S (monotone)"
    elif rule == "add_s":
        t = set(step["symbols"])
        s |= t
        note = f"adjoin {sorted(t)} to S (monotone)"
    else:
        raise InconsistentIdentification(f"unknown rewrite rule {rule!r}")
    order = list(term.s) + sorted(s - set(term.s))
    new_s = tuple(x for x in order if x in s)
    order_c = list(term.c) + sorted(c - set(term.c))
    new_c = tuple(x for x in order_c if x in c)
    return SymTerm(new_s, term.y, new_c), note


@dataclass
class SpecializedBound:
    lhs: tuple[str, ...]
    rendered: str
    audit: list
    raw_terms: list


def specialize_bound(
    template: ReducedBoundTemplate,
    topology: NetworkTopology,
    identification: dict[str, tuple[str, ...]],
    steps: Sequence[Sequence[dict]],
    rendering: Sequence[tuple[Sequence[str], Sequence[str], Sequence[str]]],
) -> SpecializedBound:
    """Replay a named specialization of a reduced template.

    steps[k] is the rewrite program for the k-th MI term; rendering[k] gives
    the (S-list, Y, C-list) over auxiliary names whose bundles must cover the
    rewritten term exactly (C exactly, S up to symbols already conditioned).
    """
    terms = [SymTerm(tuple(s), tuple(y), tuple(c)) for s, y, c in template.terms(
        tuple(f"Y{j+1}" for j in range(template.k2))
    )]
    audit = []
    for k, prog in enumerate(steps):
        for step in prog:
            terms[k], note = _apply_step(terms[k], step, topology)
            audit.append(f"term {k}: {note} -> {terms[k].render()}")
    bundles = {k: frozenset(v) for k, v in identification.items()}

    def expand(names):
        out = set()
        for n in names:
            out |= bundles.get(n, frozenset((n,)))
        return out

    parts = []
    for k, (rs, ry, rc) in enumerate(rendering):
        actual = terms[k]
        if expand(rc) != set(actual.c):
            raise InconsistentIdentification(
                f"term {k}: rendered conditioning {rc} != {sorted(actual.c)}"
            )
        s_exp = expand(rs)
        if not (set(actual.s) <= s_exp and s_exp <= set(actual.s) | set(actual.c)):
            raise InconsistentIdentification(
                f"term {k}: rendered information set {rs} inconsistent with "
                f"{sorted(actual.s)}"
            )
        if tuple(ry) != actual.y:
            raise InconsistentIdentification(f"term {k}: wrong receiver {ry}")
        inner = ",".join(rs) + ";" + ",".join(ry)
        if rc:
            inner += "|" + ",".join(rc)
        parts.append(f"I({inner})")
    lhs = template.lhs_messages()
    lhs_txt = "+".join("R" + m[1:] if m.startswith("M") else m for m in lhs)
    rendered = f"{lhs_txt} <= " + " + ".join(parts)
    return SpecializedBound(lhs, rendered, audit, terms)


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------


def validate_outer_pmf(pmf: JointPmf, topology: NetworkTopology, z_names=("Z",)):
    """Admissibility of an outer-bound evaluation distribution:
    independent uniform messages, deterministic encoders given (own
    messages, Q), arbitrary genie given (messages, Q)."""
    msgs = topology.messages
    for m in msgs:
        marg = pmf.marginal((m,)).table
        if np.max(np.abs(marg - 1.0 / marg.size)) > 1e-9:
            raise FactorizationViolation(f"message {m} must be uniform")
    block = pmf.marginal(tuple(msgs)).table
    prod = np.ones(block.shape)
    for i, m in enumerate(msgs):
        shape = [1] * len(msgs)
        shape[i] = block.shape[i]
        prod = prod * pmf.marginal((m,)).table.reshape(shape)
    if np.max(np.abs(block - prod)) > 1e-9:
        raise FactorizationViolation("messages must be independent")
    has_q = "Q" in pmf.variables
    for i, xn in enumerate(topology.tx_names):
        if xn not in pmf.variables:
            raise FactorizationViolation(f"missing input {xn}")
        given = tuple(sorted(topology.tx_messages[i])) + (("Q",) if has_q else ())
        marg = pmf.marginal(given + (xn,)).table
        gsize = int(np.prod(marg.shape[:-1]))
        flat = marg.reshape(gsize, -1)
        with np.errstate(divide="ignore", invalid="ignore"):
            cond = flat / flat.sum(axis=1, keepdims=True)
        cond = np.nan_to_num(cond, nan=1.0)
        if np.any((cond > 1e-9) & (cond < 1 - 1e-9)):
            raise FactorizationViolation(
                f"encoder for {xn} must be deterministic given its messages and Q"
            )


def evaluate_bound(
    template,
    channel,
    pmf: JointPmf,
    validate: bool = True,
) -> float:
    """RHS value in bits of a bound template at an admissible distribution.

    The pmf covers (Q optional, messages, genie variables, inputs); outputs
    attach through the channel law.
    """
    topo = channel.topology
    if validate:
        validate_outer_pmf(pmf, topo)
    joint = induced_joint(pmf, channel)

    def has_q():
        return "Q" in joint.variables

    def clean(c):
        return tuple(x for x in c if x != "Q" or has_q())

    def mi(s, y, c):
        s = tuple(x for x in s if x in joint.variables)
        return conditional_mutual_information(joint, s, y, clean(c))

    if isinstance(template, ReducedBoundTemplate):
        terms = template.terms(topo.rx_names)
        return float(sum(mi(s, y, c) for s, y, c in terms))
    terms, min_pair = template.terms(topo.rx_names)
    total = sum(mi(s, y, c) for s, y, c in terms)
    tail = min(mi(*min_pair[0]), mi(*min_pair[1]))
    return float(total + tail)


def outer_polytope_at(
    channel,
    pmf: JointPmf,
    reduced_templates: Iterable[ReducedBoundTemplate],
    validate: bool = True,
) -> RatePolytope:
    """Intersection of all reduced-form bounds at one distribution, as an
    H-polytope over per-message rates."""
    topo = channel.topology
    if validate:
        validate_outer_pmf(pmf, topo)
    msgs = topo.messages
    rate = {m: "R" + m[1:] if m.startswith("M") else "R_" + m for m in msgs}
    rows = []
    for t in reduced_templates:
        val = evaluate_bound(t, channel, pmf, validate=False)
        rows.append(({rate[m]: 1 for m in t.lhs_messages()}, val))
    return make_polytope(tuple(sorted(rate.values())), rows)


def lift_grid_member(channel, pmf: JointPmf, g: int, cond_var: str | None = None) -> JointPmf:
    """Lift a grid family member into the admissible outer-bound form.

    Inputs with conditional probabilities in multiples of 1/g are realized
    by deterministic encoders over uniform g-ary messages; an optional
    common conditioning variable (cloud center) becomes the time-sharing Q.
    The genie Z is attached degenerate.
    """
    topo = channel.topology
    tx = topo.tx_names
    msgs = topo.messages
    if cond_var is not None:
        q_card = pmf.card(cond_var)
        q_prob = pmf.marginal((cond_var,)).table
    else:
        q_card = 1
        q_prob = np.ones(1)
    names = ("Q",) + tuple(msgs) + ("Z",) + tuple(tx)
    cards = [q_card] + [g] * len(msgs) + [1] + [channel.input_cards[i] for i in range(topo.k1)]
    table = np.zeros(cards)
    # per transmitter: its single message indexes g uniform symbols mapped to
    # input letters according to the conditional P(x_i | Q)
    conds = []
    for i, xn in enumerate(tx):
        own = sorted(topo.tx_messages[i])
        if len(own) != 1:
            raise FactorizationViolation(
                "lifting requires one message per transmitter"
            )
        if cond_var is not None:
            m = pmf.marginal((cond_var, xn)).table
            with np.errstate(divide="ignore", invalid="ignore"):
                cnd = m / m.sum(axis=1, keepdims=True)
            cnd = np.nan_to_num(cnd, nan=1.0 / m.shape[1])
        else:
            cnd = pmf.marginal((xn,)).table[None, :]
        counts = np.round(cnd * g).astype(int)
        if np.max(np.abs(counts - cnd * g)) > 1e-6 or np.any(counts.sum(axis=1) != g):
            raise FactorizationViolation(
                f"conditional for {xn} is not on the 1/{g} grid"
            )
        enc = np.zeros((cnd.shape[0], g), dtype=int)
        for qv in range(cnd.shape[0]):
            pos = 0
            for letter, cnt in enumerate(counts[qv]):
                enc[qv, pos : pos + cnt] = letter
                pos += cnt
        conds.append(enc)
    msg_index = {m: k for k, m in enumerate(msgs)}
    for qv in range(q_card):
        for assign in itertools.product(range(g), repeat=len(msgs)):
            xs = []
            for i in range(topo.k1):
                own = sorted(topo.tx_messages[i])[0]
                xs.append(conds[i][qv, assign[msg_index[own]]])
            idx = (qv, *assign, 0, *xs)
            table[idx] += q_prob[qv] / (g ** len(msgs))
    return JointPmf(names, table)


# ---------------------------------------------------------------------------
# replay registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Replay:
    rid: str
    selection: dict
    identification: dict
    steps: tuple
    rendering: tuple
    expected: str
    topology_builder: str


def _sel(form, omega0=(), omega1=(), omega2=(), omega_s=(), j1=(0,), j2=(1,)):
    return {
        "form": form, "omega0": omega0, "omega1": omega1, "omega2": omega2,
        "omega_s": omega_s, "j1": j1, "j2": j2,
    }


_INS = ({"rule": "insert_inputs"},)


def _steps(*progs):
    return tuple(tuple(p) for p in progs)


REPLAYS: dict[str, Replay] = {}


def _replay(rid, topology_builder, selection, identification, steps, rendering, expected):
    REPLAYS[rid] = Replay(
        rid, selection, identification, steps, tuple(rendering), expected,
        topology_builder,
    )


_CIC_CM_ID = {"U": ("Z", "M1"), "V": ("Z", "M2"), "W": ("M0", "Q")}

_replay(
    "eq65", "cic_cm", _sel(1, omega1=("M1",), omega_s=("M0", "M2")), _CIC_CM_ID,
    _steps([*_INS, {"rule": "drop_s", "symbols": ("Z", "M1")},
            {"rule": "drop_c", "symbols": ("M2",)}]),
    [(("X1",), ("Y1",), ("X2", "W"))],
    "R1 <= I(X1;Y1|X2,W)",
)
_replay(
    "eq66", "cic_cm", _sel(3, omega1=("M1",), omega_s=("M0", "M2")), _CIC_CM_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M1",)}],
        [*_INS, {"rule": "move_to_s", "symbols": ("M2",)}],
    ),
    [(("X1",), ("Y1",), ("X2", "V", "W")), (("V",), ("Y2",), ("X2", "W"))],
    "R1 <= I(X1;Y1|X2,V,W) + I(V;Y2|X2,W)",
)
_replay(
    "eq67", "cic_cm", _sel(1, omega1=("M1",), omega_s=("M0",)), _CIC_CM_ID,
    _steps([*_INS]),
    [(("U", "X1"), ("Y1",), ("W",))],
    "R1 <= I(U,X1;Y1|W)",
)
_replay(
    "eq68", "cic_cm", _sel(2, omega2=("M2",), omega_s=("M0", "M1")), _CIC_CM_ID,
    _steps([*_INS, {"rule": "drop_s", "symbols": ("Z", "M2")},
            {"rule": "drop_c", "symbols": ("M1",)}]),
    [(("X2",), ("Y2",), ("X1", "W"))],
    "R2 <= I(X2;Y2|X1,W)",
)
_replay(
    "eq69", "cic_cm", _sel(4, omega2=("M2",), omega_s=("M0", "M1")), _CIC_CM_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M2",)}],
        [*_INS, {"rule": "move_to_s", "symbols": ("M1",)}],
    ),
    [(("X2",), ("Y2",), ("X1", "U", "W")), (("U",), ("Y1",), ("X1", "W"))],
    "R2 <= I(X2;Y2|X1,U,W) + I(U;Y1|X1,W)",
)
_replay(
    "eq70", "cic_cm", _sel(2, omega2=("M2",), omega_s=("M0",)), _CIC_CM_ID,
    _steps([*_INS]),
    [(("V", "X2"), ("Y2",), ("W",))],
    "R2 <= I(V,X2;Y2|W)",
)
_replay(
    "eq71", "cic_cm", _sel(1, omega0=("M0",), omega1=("M1",), omega2=("M2",)),
    _CIC_CM_ID,
    _steps([*_INS, {"rule": "move_to_s", "symbols": ("Q",)}]),
    [(("W", "U", "X1"), ("Y1",), ())],
    "R0+R1 <= I(W,U,X1;Y1)",
)
_replay(
    "eq72", "cic_cm", _sel(2, omega0=("M0",), omega1=("M1",), omega2=("M2",)),
    _CIC_CM_ID,
    _steps([*_INS, {"rule": "move_to_s", "symbols": ("Q",)}]),
    [(("W", "V", "X2"), ("Y2",), ())],
    "R0+R2 <= I(W,V,X2;Y2)",
)
_replay(
    "eq73", "cic_cm", _sel(3, omega1=("M1",), omega2=("M2",), omega_s=("M0",)),
    _CIC_CM_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M1",)}],
        [*_INS],
    ),
    [(("X1",), ("Y1",), ("X2", "V", "W")), (("V", "X2"), ("Y2",), ("W",))],
    "R1+R2 <= I(X1;Y1|X2,V,W) + I(V,X2;Y2|W)",
)
_replay(
    "eq74", "cic_cm", _sel(4, omega1=("M1",), omega2=("M2",), omega_s=("M0",)),
    _CIC_CM_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M2",)}],
        [*_INS],
    ),
    [(("X2",), ("Y2",), ("X1", "U", "W")), (("U", "X1"), ("Y1",), ("W",))],
    "R1+R2 <= I(X2;Y2|X1,U,W) + I(U,X1;Y1|W)",
)
_replay(
    "eq75", "cic_cm", _sel(3, omega0=("M0",), omega1=("M1",), omega2=("M2",)),
    _CIC_CM_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M1",)}],
        [*_INS, {"rule": "move_to_s", "symbols": ("Q",)}],
    ),
    [(("X1",), ("Y1",), ("X2", "V", "W")), (("W", "V", "X2"), ("Y2",), ())],
    "R0+R1+R2 <= I(X1;Y1|X2,V,W) + I(W,V,X2;Y2)",
)
_replay(
    "eq76", "cic_cm", _sel(4, omega0=("M0",), omega1=("M1",), omega2=("M2",)),
    _CIC_CM_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M2",)}],
        [*_INS, {"rule": "move_to_s", "symbols": ("Q",)}],
    ),
    [(("X2",), ("Y2",), ("X1", "U", "W")), (("W", "U", "X1"), ("Y1",), ())],
    "R0+R1+R2 <= I(X2;Y2|X1,U,W) + I(W,U,X1;Y1)",
)

_BCCR_ID = {"U": ("Z", "M0", "M1"), "V": ("Z", "M0", "M2"), "W": ("Z", "M0")}


def _bccr_replay_pair(base, selection, steps, rendering_fn, expected_fn):
    for i, form in ((1, 1), (2, 2)):
        sel = dict(selection)
        sel["form"] = form
        _replay(
            f"{base}-y{i}", "bccr", sel, _BCCR_ID, steps,
            rendering_fn(f"Y{i}"), expected_fn(f"Y{i}"),
        )


_bccr_replay_pair(
    "eq98", _sel(1, omega0=("M0",), omega_s=("M1",)),
    _steps([*_INS, {"rule": "move_to_s", "symbols": ("M1",)}]),
    lambda y: [(("U", "W"), (y,), ("X1", "Q"))],
    lambda y: f"R0 <= I(U,W;{y}|X1,Q)",
)
_bccr_replay_pair(
    "eq99", _sel(1, omega0=("M0",), omega_s=("M2",)),
    _steps([*_INS, {"rule": "move_to_s", "symbols": ("M2",)}]),
    lambda y: [(("V", "W"), (y,), ("X2", "Q"))],
    lambda y: f"R0 <= I(V,W;{y}|X2,Q)",
)
_bccr_replay_pair(
    "eq100", _sel(1, omega0=("M0",), omega_s=("M1", "M2")),
    _steps([*_INS, {"rule": "drop_s", "symbols": ("Z", "M0")},
            {"rule": "drop_c", "symbols": ("M1", "M2")}]),
    lambda y: [(("XB",), (y,), ("X1", "X2", "Q"))],
    lambda y: f"R0 <= I(XB;{y}|X1,X2,Q)",
)
_bccr_replay_pair(
    "eq101", _sel(1, omega0=("M0",)),
    _steps([]),
    lambda y: [(("W",), (y,), ("Q",))],
    lambda y: f"R0 <= I(W;{y}|Q)",
)
_replay(
    "eq102", "bccr", _sel(1, omega0=("M0",), omega1=("M1",), omega_s=("M2",)),
    _BCCR_ID,
    _steps([*_INS, {"rule": "drop_s", "symbols": ("Z", "M0", "M1")},
            {"rule": "drop_c", "symbols": ("M2",)}]),
    [(("X1", "XB"), ("Y1",), ("X2", "Q"))],
    "R0+R1 <= I(X1,XB;Y1|X2,Q)",
)
_replay(
    "eq103", "bccr", _sel(3, omega0=("M0",), omega1=("M1",)), _BCCR_ID,
    _steps([*_INS], []),
    [(("U", "X1"), ("Y1",), ("W", "Q")), (("W",), ("Y2",), ("Q",))],
    "R0+R1 <= I(U,X1;Y1|W,Q) + I(W;Y2|Q)",
)
_replay(
    "eq104", "bccr", _sel(2, omega0=("M0",), omega2=("M2",), omega_s=("M1",)),
    _BCCR_ID,
    _steps([*_INS, {"rule": "drop_s", "symbols": ("Z", "M0", "M2")},
            {"rule": "drop_c", "symbols": ("M1",)}]),
    [(("X2", "XB"), ("Y2",), ("X1", "Q"))],
    "R0+R2 <= I(X2,XB;Y2|X1,Q)",
)
_replay(
    "eq105", "bccr", _sel(4, omega0=("M0",), omega2=("M2",)), _BCCR_ID,
    _steps([*_INS], []),
    [(("V", "X2"), ("Y2",), ("W", "Q")), (("W",), ("Y1",), ("Q",))],
    "R0+R2 <= I(V,X2;Y2|W,Q) + I(W;Y1|Q)",
)
_replay(
    "eq106", "bccr", _sel(3, omega0=("M0",), omega1=("M1",), omega_s=("M2",)),
    _BCCR_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M1",)}],
        [*_INS, {"rule": "move_to_s", "symbols": ("M2",)}],
    ),
    [(("X1", "XB"), ("Y1",), ("X2", "V", "W", "Q")),
     (("V", "W"), ("Y2",), ("X2", "Q"))],
    "R0+R1 <= I(X1,XB;Y1|X2,V,W,Q) + I(V,W;Y2|X2,Q)",
)
_replay(
    "eq107", "bccr", _sel(4, omega0=("M0",), omega2=("M2",), omega_s=("M1",)),
    _BCCR_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M2",)}],
        [*_INS, {"rule": "move_to_s", "symbols": ("M1",)}],
    ),
    [(("X2", "XB"), ("Y2",), ("X1", "U", "W", "Q")),
     (("U", "W"), ("Y1",), ("X1", "Q"))],
    "R0+R2 <= I(X2,XB;Y2|X1,U,W,Q) + I(U,W;Y1|X1,Q)",
)
_replay(
    "eq108", "bccr", _sel(1, omega0=("M0",), omega1=("M1",), omega2=("M2",)),
    _BCCR_ID, _steps([*_INS]),
    [(("U", "W", "X1"), ("Y1",), ("Q",))],
    "R0+R1 <= I(U,W,X1;Y1|Q)",
)
_replay(
    "eq109", "bccr", _sel(2, omega0=("M0",), omega1=("M1",), omega2=("M2",)),
    _BCCR_ID, _steps([*_INS]),
    [(("V", "W", "X2"), ("Y2",), ("Q",))],
    "R0+R2 <= I(V,W,X2;Y2|Q)",
)
_replay(
    "eq110", "bccr", _sel(3, omega0=("M0",), omega1=("M1",), omega2=("M2",)),
    _BCCR_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M1",)}],
        [*_INS],
    ),
    [(("X1", "XB"), ("Y1",), ("X2", "V", "W", "Q")),
     (("V", "W", "X2"), ("Y2",), ("Q",))],
    "R0+R1+R2 <= I(X1,XB;Y1|X2,V,W,Q) + I(V,W,X2;Y2|Q)",
)
_replay(
    "eq111", "bccr", _sel(4, omega0=("M0",), omega1=("M1",), omega2=("M2",)),
    _BCCR_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M2",)}],
        [*_INS],
    ),
    [(("X2", "XB"), ("Y2",), ("X1", "U", "W", "Q")),
     (("U", "W", "X1"), ("Y1",), ("Q",))],
    "R0+R1+R2 <= I(X2,XB;Y2|X1,U,W,Q) + I(U,W,X1;Y1|Q)",
)
_replay(
    "eq112", "bccr", _sel(5, omega0=("M0",), omega1=("M1",), omega2=("M2",)),
    _BCCR_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M1",)}],
        [*_INS],
        [],
    ),
    [(("X1", "XB"), ("Y1",), ("X2", "V", "W", "Q")),
     (("V", "X2"), ("Y2",), ("W", "Q")), (("W",), ("Y1",), ("Q",))],
    "R0+R1+R2 <= I(X1,XB;Y1|X2,V,W,Q) + I(V,X2;Y2|W,Q) + I(W;Y1|Q)",
)
_replay(
    "eq113", "bccr", _sel(6, omega0=("M0",), omega1=("M1",), omega2=("M2",)),
    _BCCR_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M2",)}],
        [*_INS],
        [],
    ),
    [(("X2", "XB"), ("Y2",), ("X1", "U", "W", "Q")),
     (("U", "X1"), ("Y1",), ("W", "Q")), (("W",), ("Y2",), ("Q",))],
    "R0+R1+R2 <= I(X2,XB;Y2|X1,U,W,Q) + I(U,X1;Y1|W,Q) + I(W;Y2|Q)",
)

_P5_ID = {
    "U1": ("Z1_2", "M1", "M3"),
    "V1": ("Z1_2", "M2", "M3"),
    "U123": ("Z1_23", "M1"),
    "V123": ("Z1_23", "M2", "M3"),
}

_replay(
    "eqA15", "cic3", _sel(1, omega1=("M1",), omega_s=("M2", "M3"), j1=(0,), j2=(1, 2)),
    _P5_ID,
    _steps([*_INS, {"rule": "drop_s", "symbols": ("Z1_23", "M1")},
            {"rule": "drop_c", "symbols": ("M2", "M3")}]),
    [(("X1",), ("Y1",), ("X2", "X3", "Q"))],
    "R1 <= I(X1;Y1|X2,X3,Q)",
)
_replay(
    "eqA16", "cic3", _sel(1, omega1=("M1",), j1=(0,), j2=(1, 2)), _P5_ID,
    _steps([*_INS]),
    [(("U123", "X1"), ("Y1",), ("Q",))],
    "R1 <= I(U123,X1;Y1|Q)",
)
_replay(
    "eqA17", "cic3", _sel(1, omega1=("M1",), omega_s=("M3",), j1=(0,), j2=(1,)),
    _P5_ID,
    _steps([*_INS, {"rule": "move_to_s", "symbols": ("M3",)}]),
    [(("U1", "X1"), ("Y1",), ("X3", "Q"))],
    "R1 <= I(U1,X1;Y1|X3,Q)",
)
_replay(
    "eqA18", "cic3", _sel(2, omega2=("M2",), omega_s=("M3",), j1=(0,), j2=(1,)),
    _P5_ID,
    _steps([*_INS, {"rule": "move_to_s", "symbols": ("M3",)}]),
    [(("V1", "X2"), ("Y2",), ("X3", "Q"))],
    "R2 <= I(V1,X2;Y2|X3,Q)",
)
_replay(
    "eqA19", "cic3", _sel(3, omega1=("M1",), omega2=("M2",), omega_s=("M3",),
                          j1=(0,), j2=(1,)), _P5_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M1",)}],
        [*_INS, {"rule": "move_to_s", "symbols": ("M3",)}],
    ),
    [(("X1",), ("Y1",), ("X2", "X3", "V1", "Q")),
     (("V1", "X2"), ("Y2",), ("X3", "Q"))],
    "R1+R2 <= I(X1;Y1|X2,X3,V1,Q) + I(V1,X2;Y2|X3,Q)",
)
_replay(
    "eqA20", "cic3", _sel(4, omega1=("M1",), omega2=("M2",), omega_s=("M3",),
                          j1=(0,), j2=(1,)), _P5_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M2",)}],
        [*_INS, {"rule": "move_to_s", "symbols": ("M3",)}],
    ),
    [(("X2",), ("Y2",), ("X1", "X3", "U1", "Q")),
     (("U1", "X1"), ("Y1",), ("X3", "Q"))],
    "R1+R2 <= I(X2;Y2|X1,X3,U1,Q) + I(U1,X1;Y1|X3,Q)",
)
_replay(
    "eqA21", "cic3", _sel(2, omega2=("M2", "M3"), j1=(0,), j2=(1, 2)), _P5_ID,
    _steps([*_INS]),
    [(("V123", "X2", "X3"), ("Y2", "Y3"), ("Q",))],
    "R2+R3 <= I(V123,X2,X3;Y2,Y3|Q)",
)
_replay(
    "eqA22", "cic3", _sel(3, omega1=("M1",), omega2=("M2", "M3"), j1=(0,), j2=(1, 2)),
    _P5_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M1",)}],
        [*_INS],
    ),
    [(("X1",), ("Y1",), ("X2", "X3", "V123", "Q")),
     (("V123", "X2", "X3"), ("Y2", "Y3"), ("Q",))],
    "R1+R2+R3 <= I(X1;Y1|X2,X3,V123,Q) + I(V123,X2,X3;Y2,Y3|Q)",
)
_replay(
    "eqA23", "cic3", _sel(4, omega1=("M1",), omega2=("M2", "M3"), j1=(0,), j2=(1, 2)),
    _P5_ID,
    _steps(
        [*_INS, {"rule": "drop_s", "symbols": ("M2", "M3")}],
        [*_INS],
    ),
    [(("X2", "X3"), ("Y2", "Y3"), ("X1", "U123", "Q")),
     (("U123", "X1"), ("Y1",), ("Q",))],
    "R1+R2+R3 <= I(X2,X3;Y2,Y3|X1,U123,Q) + I(U123,X1;Y1|Q)",
)

THEOREM3_REPLAYS = tuple(f"eq{n}" for n in range(65, 77))
THEOREM5_EQUATIONS = tuple(f"eq{n}" for n in range(98, 114))
PROP5_REPLAYS = tuple(f"eqA{n}" for n in range(15, 24))


def run_replay(rid: str, topology: NetworkTopology) -> SpecializedBound:
    """Execute one registered specialization against an enumerated template."""
    rep = REPLAYS[rid]
    mode = "TWO_RX" if max(len(rep.selection["j1"]), len(rep.selection["j2"])) == 1 \
        and topology.k2 == 2 else "MULTI_RX"
    _, reduced = enumerate_bound_templates(topology, mu_max=2, mode=mode)
    tpl = find_reduced(reduced, **rep.selection)
    return specialize_bound(tpl, topology, rep.identification, rep.steps, rep.rendering)


def template_to_json(t) -> str:
    if isinstance(t, FullBoundTemplate):
        terms, min_pair = t.terms(tuple(f"Y{j+1}" for j in range(t.k2)))
        doc = {
            "kind": "full", "j1": list(t.j1), "j2": list(t.j2),
            "omegas1": [list(o) for o in t.omegas1],
            "omegas2": [list(o) for o in t.omegas2],
            "omega_s": list(t.omega_s),
            "terms": [SymTerm(s, y, c).render() for s, y, c in terms],
            "min_tail": [SymTerm(s, y, c).render() for s, y, c in min_pair],
        }
    else:
        doc = {
            "kind": "reduced", "form": t.form, "j1": list(t.j1), "j2": list(t.j2),
            "omega0": list(t.omega0), "omega1": list(t.omega1),
            "omega2": list(t.omega2), "omega_s": list(t.omega_s),
            "terms": [
                SymTerm(s, y, c).render()
                for s, y, c in t.terms(tuple(f"Y{j+1}" for j in range(t.k2)))
            ],
        }
    return json.dumps(doc, sort_keys=True)
