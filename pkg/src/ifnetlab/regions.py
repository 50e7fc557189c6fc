"""Per-pmf polytope builders for named rate regions, swept into region
estimates, plus the split-rate inner bound reduced by Fourier-Motzkin and the
less-noisy sum-rate evaluators.

Template rows are partial-sum patterns bounded by sums of mutual-information
terms; min{...} groups expand to one polytope row per branch.  Strict
inequalities in coding-theorem systems are closed (the achievable region is
taken as its closure); an eps knob re-opens them for sensitivity tests.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .batchinfo import batched_cmi, batched_through_channel
from .config import DEFAULT_CONFIG, RunConfig
from .errors import (
    ConditionNotVerified,
    FamilyViolation,
    NotRightSidedClosure,
    TemplateUnknown,
    TooLarge,
)
from .infocalc import (
    Factor,
    FamilySpec,
    JointPmf,
    check_factorization,
    conditional_mutual_information,
    family_grid,
    family_grid_batched,
    family_grid_chunk,
    family_grid_count,
    gaussian_psi,
    induced_joint,
)
from .netmodel import MaccmPlan, connected_messages, enumerate_right_sided
from .ratepoly import (
    DIRECTION_GRID_VERSION,
    RatePolytope,
    RegionEstimate,
    SupportEngine,
    direction_grid,
    fourier_motzkin_eliminate,
    lp_max,
    make_polytope,
    remove_redundant,
)
from .regimes import (
    EQ_TOL,
    ConditionReport,
    MIExpr,
    _classify,
    _evaluate_inequality,
    _expr,
    _pair,
    check_condition,
    register_condition,
    _check_crc,
    _check_cic_full,
)
from . import networks


@dataclass(frozen=True)
class RowSpec:
    """coeffs . r <= min over alternatives of (sum of MI terms)."""

    coeffs: dict
    alternatives: tuple[tuple[MIExpr, ...], ...]


@dataclass(frozen=True)
class ConcreteTemplate:
    id: str
    rate_vars: tuple[str, ...]
    family: FamilySpec
    rows: tuple[RowSpec, ...]
    det_factors: tuple[int, ...] = ()
    # optional per-factor replacement of the enumerated choice stack, used to
    # sweep structured sub-families (e.g. threshold encoders)
    stack_overrides: dict = field(default_factory=dict)


def template_stacks(tpl: ConcreteTemplate) -> list:
    from .infocalc import _factor_tables

    return [
        tpl.stack_overrides.get(i)
        if i in tpl.stack_overrides
        else _factor_tables(tpl.family, f)
        for i, f in enumerate(tpl.family.factors)
    ]


def template_family_size(tpl: ConcreteTemplate) -> int:
    return int(np.prod([len(s) for s in template_stacks(tpl)]))


TEMPLATES: dict[str, Callable] = {}
TEMPLATE_ANCHORS: dict[str, str] = {}


def _register_template(tid: str, anchor: str, factory: Callable):
    TEMPLATES[tid] = factory
    TEMPLATE_ANCHORS[tid] = anchor


def list_templates() -> list[str]:
    return sorted(TEMPLATES)


def get_template(tid: str, channel, cfg: RunConfig = DEFAULT_CONFIG) -> ConcreteTemplate:
    if tid not in TEMPLATES:
        raise TemplateUnknown(f"unknown template id {tid!r}")
    return TEMPLATES[tid](channel, cfg)


def _min_rows(coeffs, *alternatives) -> RowSpec:
    alts = tuple(
        tuple(alt) if isinstance(alt, (list, tuple)) else (alt,) for alt in alternatives
    )
    return RowSpec(dict(coeffs), alts)


def _input_cards(channel, names):
    topo = channel.topology
    return {v: channel.input_cards[topo.tx_of(v)] for v in names}


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _validate_member(tpl: ConcreteTemplate, pmf: JointPmf):
    # auxiliary cardinalities in the template are sweep defaults; validation
    # uses the pmf's own cards (degenerate auxiliaries are admissible)
    fam = FamilySpec(
        tpl.family.factors,
        {v: pmf.card(v) for v in tpl.family.variables},
        tpl.family.grid_resolution,
    )
    tpl = ConcreteTemplate(tpl.id, tpl.rate_vars, fam, tpl.rows, tpl.det_factors)
    dev = check_factorization(pmf, tpl.family, tol=1e-9)
    if dev > 1e-9:
        raise FamilyViolation(
            f"pmf does not factorize per template {tpl.id} (deviation {dev:.2e})"
        )
    # deterministic factors must extract to 0/1 conditionals
    for fi in tpl.det_factors:
        f = tpl.family.factors[fi]
        marg = pmf.marginal(f.given + f.targets).table
        gsize = int(np.prod([tpl.family.cards[v] for v in f.given])) or 1
        flat = marg.reshape(gsize, -1)
        with np.errstate(divide="ignore", invalid="ignore"):
            cond = flat / flat.sum(axis=1, keepdims=True)
        cond = np.nan_to_num(cond, nan=1.0)
        if np.any((cond > 1e-9) & (cond < 1 - 1e-9)):
            raise FamilyViolation(
                f"template {tpl.id} requires a deterministic factor "
                f"P({','.join(f.targets)}|{','.join(f.given)})"
            )


def evaluate_template(
    tid_or_tpl,
    channel,
    pmf: JointPmf,
    cfg: RunConfig = DEFAULT_CONFIG,
    validate: bool = True,
) -> RatePolytope:
    """Instantiate a region template's constraints at one admissible pmf."""
    tpl = (
        tid_or_tpl
        if isinstance(tid_or_tpl, ConcreteTemplate)
        else get_template(tid_or_tpl, channel, cfg)
    )
    if validate:
        _validate_member(tpl, pmf)
    joint = induced_joint(pmf, channel)
    rows = []
    for r in tpl.rows:
        for alt in r.alternatives:
            bound = sum(
                conditional_mutual_information(joint, t.a, t.b, t.c) for t in alt
            )
            rows.append((r.coeffs, bound))
    return make_polytope(tpl.rate_vars, rows)


def _batched_bounds(tpl: ConcreteTemplate, channel, tables) -> np.ndarray:
    """Row bounds (B, nrows) for a stacked batch of family members.

    The full joint is reduced once per distinct receiver group to the
    variables the template's terms actually reference, so large unreferenced
    alphabets (inputs behind deterministic encoders) cost nothing per term.
    """
    joint, joint_vars = batched_through_channel(tables, tpl.family.variables, channel)
    groups: dict = {}
    for r in tpl.rows:
        for alt in r.alternatives:
            for t in alt:
                need = groups.setdefault(t.b, set())
                need.update(t.a)
                need.update(t.c)
    reduced: dict = {}
    for bvars, need in groups.items():
        keep = tuple(v for v in joint_vars if v in need or v in bvars)
        axes = tuple(i + 1 for i, v in enumerate(joint_vars) if v not in keep)
        marg = joint.sum(axis=axes) if axes else joint
        reduced[bvars] = (marg, keep)
    cache: dict = {}

    def term(t: MIExpr):
        key = (t.a, t.b, t.c)
        if key not in cache:
            marg, keep = reduced[t.b]
            cache[key] = batched_cmi(marg, keep, t.a, t.b, t.c)
        return cache[key]

    cols = []
    for r in tpl.rows:
        alts = [sum(term(t) for t in alt) for alt in r.alternatives]
        cols.append(np.minimum.reduce(alts))
    return np.stack(cols, axis=1)


def _coeff_matrix(tpl: ConcreteTemplate) -> np.ndarray:
    A = np.zeros((len(tpl.rows), len(tpl.rate_vars)))
    for i, r in enumerate(tpl.rows):
        for v, c in r.coeffs.items():
            A[i, tpl.rate_vars.index(v)] = c
    return A




def _bounds_task(args):
    tpl, channel, start, stop = args
    tables = family_grid_chunk(tpl.family, start, stop, stacks=template_stacks(tpl))
    return _batched_bounds(tpl, channel, tables)


def _chunk_bounds(tpl, channel, ranges, workers):
    """Bounds matrices per family chunk, optionally via a process pool.

    The merge order is the chunk order either way, so results are identical
    for any worker count.
    """
    if workers <= 1 or len(ranges) <= 1:
        stacks = template_stacks(tpl)
        for start, stop in ranges:
            tables = family_grid_chunk(tpl.family, start, stop, stacks=stacks)
            yield start, stop, _batched_bounds(tpl, channel, tables)
        return
    import multiprocessing as mp

    ctx = mp.get_context("fork")
    with ctx.Pool(min(workers, len(ranges))) as pool:
        tasks = [(tpl, channel, a, b) for a, b in ranges]
        for (start, stop), bounds in zip(ranges, pool.map(_bounds_task, tasks)):
            yield start, stop, bounds


def sweep_template(
    tid_or_tpl,
    channel,
    cfg: RunConfig = DEFAULT_CONFIG,
    g: int | None = None,
    collect_pmfs: bool = False,
    family_cap: int = 2_000_000,
):
    """Sweep a template over its family grid into a RegionEstimate.

    The batched engine evaluates whole chunks of the family at once and
    agrees exactly with per-pmf evaluation (cross-checked in tests).  With
    collect_pmfs=True the per-direction support-maximizing family members
    are returned alongside.
    """
    if g is not None and not isinstance(tid_or_tpl, ConcreteTemplate):
        from dataclasses import replace

        cfg = replace(cfg, grid=g)
        g = None
    tpl = (
        tid_or_tpl
        if isinstance(tid_or_tpl, ConcreteTemplate)
        else get_template(tid_or_tpl, channel, cfg)
    )
    if g is not None:
        if tpl.stack_overrides:
            raise TooLarge(
                "cannot override g on a template with custom factor stacks; "
                "rebuild via its id"
            )
        tpl = ConcreteTemplate(
            tpl.id,
            tpl.rate_vars,
            FamilySpec(tpl.family.factors, tpl.family.cards, g),
            tpl.rows,
            tpl.det_factors,
        )
    count = template_family_size(tpl)
    if count > family_cap:
        raise TooLarge(
            f"family for {tpl.id} has {count} members, above cap {family_cap}"
        )
    A = _coeff_matrix(tpl)
    dim = len(tpl.rate_vars)
    ints, units = direction_grid(dim)
    engine = SupportEngine(A, dim)
    support = np.full(len(units), -np.inf)
    samples = np.zeros((len(units), dim))
    best_tables = [None] * len(units) if collect_pmfs else None
    cells = int(np.prod([tpl.family.cards[v] for v in tpl.family.variables])) * int(
        np.prod(channel.output_cards)
    )
    chunk = int(min(16384, max(256, 3e7 // max(cells, 1))))
    ranges = [(s, min(s + chunk, count)) for s in range(0, count, chunk)]
    for start, stop, bounds in _chunk_bounds(tpl, channel, ranges, cfg.workers):
        sup, pts = engine.supports(bounds, units)
        # per direction: best member in this chunk, then fold into running max
        idx = np.argmax(sup, axis=0)
        chunk_best = sup[idx, np.arange(len(units))]
        better = chunk_best > support + 1e-15
        support = np.where(better, chunk_best, support)
        if np.any(better):
            tables = None
            for k in np.where(better)[0]:
                samples[k] = pts[idx[k], k]
                if collect_pmfs:
                    if tables is None:
                        tables = family_grid_chunk(
                            tpl.family, start, stop, stacks=template_stacks(tpl)
                        )
                    best_tables[k] = tables[idx[k]].copy()
    uniq = []
    for p in samples:
        if not any(np.max(np.abs(p - q)) <= 1e-9 for q in uniq):
            uniq.append(p)
    est = RegionEstimate(
        tpl.rate_vars,
        ints,
        units,
        support,
        np.asarray(uniq),
        {
            "direction_grid": DIRECTION_GRID_VERSION,
            "template": tpl.id,
            "resolution": tpl.family.grid_resolution,
            "family_size": count,
        },
    )
    if collect_pmfs:
        pmfs = [
            JointPmf(tpl.family.variables, t) for t in best_tables if t is not None
        ]
        # dedupe identical maximizers
        seen, out = set(), []
        for p in pmfs:
            key = p.table.tobytes()
            if key not in seen:
                seen.add(key)
                out.append(p)
        return est, out
    return est


# ---------------------------------------------------------------------------
# template definitions
# ---------------------------------------------------------------------------


def _family_w_x1_x2(channel, cfg):
    X1, X2 = channel.topology.tx_names
    cards = _input_cards(channel, (X1, X2))
    cards["W"] = cfg.aux("W")
    return FamilySpec(
        (Factor(("W",), ()), Factor((X1,), ("W",)), Factor((X2,), ("W",))),
        cards,
        cfg.grid,
    )


def _family_joint(channel, cfg, names):
    return FamilySpec(
        (Factor(tuple(names), ()),), _input_cards(channel, names), cfg.grid
    )


def _family_product(channel, cfg, blocks, extra=None):
    cards = {}
    for blk in blocks:
        for v in blk:
            if extra and v in extra:
                cards[v] = extra[v]
            else:
                cards.update(_input_cards(channel, (v,)))
    return FamilySpec(tuple(Factor(tuple(b), ()) for b in blocks), cards, cfg.grid)


def _t_crc_new(channel, cfg):
    X1, X2 = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    return ConcreteTemplate(
        "T-CRC-NEW",
        ("R1", "R2"),
        _family_joint(channel, cfg, (X1, X2)),
        (
            _min_rows({"R1": 1}, [_expr(X1, Y1, (X2,))]),
            _min_rows({"R1": 1, "R2": 1}, [_expr((X1, X2), Y2)]),
        ),
    )


def _t_crc_sup(channel, cfg):
    X1, X2 = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    return ConcreteTemplate(
        "T-CRC-SUP",
        ("R1", "R2"),
        _family_joint(channel, cfg, (X1, X2)),
        (
            _min_rows({"R1": 1}, [_expr(X1, Y1, (X2,))], [_expr(X1, Y2, (X2,))]),
            _min_rows(
                {"R1": 1, "R2": 1}, [_expr((X1, X2), Y1)], [_expr((X1, X2), Y2)]
            ),
        ),
    )


def _t_ciccm_sw(channel, cfg):
    X1, X2 = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    return ConcreteTemplate(
        "T-CICCM-SW",
        ("R0", "R1", "R2"),
        _family_w_x1_x2(channel, cfg),
        (
            _min_rows({"R1": 1}, [_expr(X1, Y1, (X2, "W"))], [_expr(X1, Y2, (X2, "W"))]),
            _min_rows({"R2": 1}, [_expr(X2, Y2, (X1, "W"))], [_expr(X2, Y1, (X1, "W"))]),
            _min_rows(
                {"R1": 1, "R2": 1},
                [_expr((X1, X2), Y1, ("W",))],
                [_expr((X1, X2), Y2, ("W",))],
            ),
            _min_rows(
                {"R0": 1, "R1": 1, "R2": 1},
                [_expr((X1, X2), Y1)],
                [_expr((X1, X2), Y2)],
            ),
        ),
    )


def _t_ciccm_strong(channel, cfg):
    X1, X2 = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    return ConcreteTemplate(
        "T-CICCM-STRONG",
        ("R0", "R1", "R2"),
        _family_w_x1_x2(channel, cfg),
        (
            _min_rows({"R1": 1}, [_expr(X1, Y1, (X2, "W"))]),
            _min_rows({"R2": 1}, [_expr(X2, Y2, (X1, "W"))]),
            _min_rows(
                {"R1": 1, "R2": 1},
                [_expr((X1, X2), Y1, ("W",))],
                [_expr((X1, X2), Y2, ("W",))],
            ),
            _min_rows(
                {"R0": 1, "R1": 1, "R2": 1},
                [_expr((X1, X2), Y1)],
                [_expr((X1, X2), Y2)],
            ),
        ),
    )


def _threshold_encoder_stack(cloud_card: int, msg_card: int) -> np.ndarray:
    """Deterministic maps x = 1{m < t_w}: one threshold per cloud value.

    (msg_card+1)**cloud_card maps; with a uniform message this realizes every
    conditional P(x=1|w) on the 1/msg_card grid, mirroring a gridded
    cloud-center family with binary inputs.
    """
    ts = list(itertools.product(range(msg_card + 1), repeat=cloud_card))
    out = np.zeros((len(ts), cloud_card, msg_card, 2))
    for k, combo in enumerate(ts):
        for w, t in enumerate(combo):
            for m in range(msg_card):
                out[k, w, m, 1 if m < t else 0] = 1.0
    return out


def _t_ciccm_han(channel, cfg):
    """Independent-codeword characterization with deterministic encoders.

    Bounds are in terms of the message variables only.  The swept
    sub-family uses uniform g-ary split messages with per-cloud threshold
    encoders, which realizes the same gridded conditionals as the
    cloud-center form and keeps the enumeration within the encoder cap.
    """
    X1, X2 = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    if channel.input_cards != (2, 2):
        raise TooLarge("threshold-encoder sweep requires binary inputs")
    cards = _input_cards(channel, (X1, X2))
    g = cfg.grid
    cards["M0"] = cfg.aux("M", 2)
    cards["M1"] = cards["M2"] = g
    n_enc = (g + 1) ** cards["M0"]
    if n_enc > cfg.caps.max_det_maps:
        raise TooLarge(
            f"deterministic encoder count {n_enc} exceeds cap {cfg.caps.max_det_maps}"
        )
    family = FamilySpec(
        (
            Factor(("M0",), ()),
            Factor(("M1",), (), kind="uniform"),
            Factor(("M2",), (), kind="uniform"),
            Factor((X1,), ("M0", "M1"), kind="det"),
            Factor((X2,), ("M0", "M2"), kind="det"),
        ),
        cards,
        cfg.grid,
    )
    stack = _threshold_encoder_stack(cards["M0"], g)
    rate_of = {"M0": "R0", "M1": "R1", "M2": "R2"}
    msgs = ("M0", "M1", "M2")
    rows = []
    for r in range(1, 4):
        for omega in itertools.combinations(msgs, r):
            rest = tuple(m for m in msgs if m not in omega)
            coeffs = {rate_of[m]: 1 for m in omega}
            rows.append(
                _min_rows(coeffs, [_expr(omega, Y1, rest)], [_expr(omega, Y2, rest)])
            )
    return ConcreteTemplate(
        "T-CICCM-HAN", ("R0", "R1", "R2"), family, tuple(rows),
        det_factors=(3, 4), stack_overrides={3: stack, 4: stack},
    )


def _t_cic_1sided(channel, cfg):
    X1, X2 = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    return ConcreteTemplate(
        "T-CIC-1SIDED",
        ("R0", "R1", "R2"),
        _family_w_x1_x2(channel, cfg),
        (
            _min_rows({"R2": 1}, [_expr(X2, Y2, ("W",))]),
            _min_rows({"R0": 1, "R2": 1}, [_expr(X2, Y2)]),
            _min_rows({"R1": 1}, [_expr(X1, Y1, (X2, "W"))]),
            _min_rows({"R2": 1}, [_expr(X2, Y1, (X1, "W"))]),
            _min_rows({"R1": 1, "R2": 1}, [_expr((X1, X2), Y1, ("W",))]),
            _min_rows({"R0": 1, "R1": 1, "R2": 1}, [_expr((X1, X2), Y1)]),
        ),
    )


def _bccr_family(channel, cfg):
    X1, X2, XB = channel.topology.tx_names
    cards = _input_cards(channel, (X1, X2, XB))
    return FamilySpec(
        (Factor((X1,), ()), Factor((X2,), ()), Factor((XB,), (X1, X2))),
        cards,
        cfg.grid,
    )


def _t_bccr_strong(channel, cfg):
    X1, X2, XB = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    return ConcreteTemplate(
        "T-BCCR-STRONG",
        ("R0", "R1", "R2"),
        _bccr_family(channel, cfg),
        (
            _min_rows(
                {"R0": 1}, [_expr(XB, Y1, (X1, X2))], [_expr(XB, Y2, (X1, X2))]
            ),
            _min_rows({"R0": 1, "R1": 1}, [_expr((X1, XB), Y1, (X2,))]),
            _min_rows({"R0": 1, "R2": 1}, [_expr((X2, XB), Y2, (X1,))]),
            _min_rows(
                {"R0": 1, "R1": 1, "R2": 1},
                [_expr((X1, X2, XB), Y1)],
                [_expr((X1, X2, XB), Y2)],
            ),
        ),
    )


def _t_bccr_ln_ach(channel, cfg):
    X1, X2, XB = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    return ConcreteTemplate(
        "T-BCCR-LN-ACH",
        ("R1", "R2"),
        _bccr_family(channel, cfg),
        (
            _min_rows({"R1": 1}, [_expr((X1, XB), Y1, (X2,))]),
            _min_rows({"R2": 1}, [_expr(X2, Y2)], [_expr(X2, Y1)]),
        ),
    )


def _t_bccr_1sided(channel, cfg):
    X1, X2, XB = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    return ConcreteTemplate(
        "T-BCCR-1SIDED",
        ("R1", "R2"),
        _bccr_family(channel, cfg),
        (
            _min_rows({"R2": 1}, [_expr(X2, Y2)]),
            _min_rows({"R1": 1}, [_expr((X1, XB), Y1, (X2,))]),
            _min_rows({"R2": 1}, [_expr((X2, XB), Y1, (X1,))]),
            _min_rows({"R1": 1, "R2": 1}, [_expr((X1, X2, XB), Y1)]),
        ),
    )


def _t_m2one(channel, cfg):
    X = channel.topology.tx_names
    Y = channel.topology.rx_names
    return ConcreteTemplate(
        "T-M2ONE",
        ("R1", "R2", "R3"),
        _family_product(channel, cfg, [(X[0],), (X[1],), (X[2],)]),
        (
            _min_rows({"R1": 1}, [_expr(X[0], Y[0], (X[1], X[2]))]),
            _min_rows({"R2": 1}, [_expr(X[1], Y[1])]),
            _min_rows({"R3": 1}, [_expr(X[2], Y[2])]),
            _min_rows({"R1": 1, "R2": 1}, [_expr((X[0], X[1]), Y[0], (X[2],))]),
            _min_rows({"R1": 1, "R3": 1}, [_expr((X[0], X[2]), Y[0], (X[1],))]),
            _min_rows({"R1": 1, "R2": 1, "R3": 1}, [_expr((X[0], X[1], X[2]), Y[0])]),
        ),
    )


def _t_3cic_all(channel, cfg):
    X = channel.topology.tx_names
    Y = channel.topology.rx_names
    rows = []
    for r in range(1, 4):
        for omega in itertools.combinations(range(3), r):
            rest = tuple(X[i] for i in range(3) if i not in omega)
            coeffs = {f"R{i+1}": 1 for i in omega}
            sel = tuple(X[i] for i in omega)
            rows.append(
                _min_rows(coeffs, *[[_expr(sel, Y[j], rest)] for j in range(3)])
            )
    return ConcreteTemplate(
        "T-3CIC-ALL",
        ("R1", "R2", "R3"),
        _family_product(channel, cfg, [(X[0],), (X[1],), (X[2],)]),
        tuple(rows),
    )


def _t_3cic_strong(channel, cfg):
    X = channel.topology.tx_names
    Y = channel.topology.rx_names
    rows = []
    for i in range(3):
        rest = tuple(X[k] for k in range(3) if k != i)
        rows.append(_min_rows({f"R{i+1}": 1}, [_expr(X[i], Y[i], rest)]))
    for i, k in itertools.combinations(range(3), 2):
        rest = tuple(X[m] for m in range(3) if m not in (i, k))
        sel = (X[i], X[k])
        rows.append(
            _min_rows(
                {f"R{i+1}": 1, f"R{k+1}": 1},
                [_expr(sel, Y[i], rest)],
                [_expr(sel, Y[k], rest)],
            )
        )
    rows.append(
        _min_rows(
            {"R1": 1, "R2": 1, "R3": 1},
            *[[_expr((X[0], X[1], X[2]), Y[j])] for j in range(3)],
        )
    )
    return ConcreteTemplate(
        "T-3CIC-STRONG",
        ("R1", "R2", "R3"),
        _family_product(channel, cfg, [(X[0],), (X[1],), (X[2],)]),
        tuple(rows),
    )


def _t_3cic_almost(channel, cfg):
    X = channel.topology.tx_names
    Y = channel.topology.rx_names
    rows = []
    for i in range(3):
        rest = tuple(X[k] for k in range(3) if k != i)
        rows.append(_min_rows({f"R{i+1}": 1}, [_expr(X[i], Y[i], rest)]))
    rows.append(
        _min_rows({"R1": 1, "R2": 1},
                  [_expr((X[0], X[1]), Y[0], (X[2],))],
                  [_expr((X[0], X[1]), Y[1], (X[2],))])
    )
    rows.append(
        _min_rows({"R2": 1, "R3": 1},
                  [_expr((X[1], X[2]), Y[1], (X[0],))],
                  [_expr((X[1], X[2]), Y[2], (X[0],))])
    )
    rows.append(
        _min_rows({"R1": 1, "R3": 1}, [_expr((X[0], X[2]), Y[2], (X[1],))])
    )
    rows.append(
        _min_rows({"R1": 1, "R2": 1, "R3": 1},
                  [_expr((X[0], X[1], X[2]), Y[1])],
                  [_expr((X[0], X[1], X[2]), Y[2])])
    )
    return ConcreteTemplate(
        "T-3CIC-ALMOST",
        ("R1", "R2", "R3"),
        _family_product(channel, cfg, [(X[0],), (X[1],), (X[2],)]),
        tuple(rows),
    )


def message_rate_var(m: str) -> str:
    return "R" + m[1:] if m.startswith("M") else "R_" + m


def _t_gen_compound(channel, cfg):
    """Decode-the-connected-messages region for an arbitrary topology."""
    topo = channel.topology
    msgs = topo.messages
    cards = {m: cfg.aux("M", 2) for m in msgs}
    cards.update(_input_cards(channel, topo.tx_names))
    factors = [Factor((m,), ()) for m in msgs]
    for i, xn in enumerate(topo.tx_names):
        parents = tuple(sorted(topo.tx_messages[i]))
        factors.append(Factor((xn,), parents))
    family = FamilySpec(tuple(factors), cards, cfg.grid)
    conn = connected_messages(topo)
    rows = []
    seen = {}
    for j in range(topo.k2):
        pool = sorted(conn[j])
        for r in range(1, len(pool) + 1):
            for omega in itertools.combinations(pool, r):
                rest = tuple(m for m in pool if m not in omega)
                coeffs = tuple(sorted(message_rate_var(m) for m in omega))
                expr = _expr(omega, topo.rx_names[j], rest)
                seen.setdefault(coeffs, []).append((expr,))
    for coeffs, alts in sorted(seen.items()):
        rows.append(RowSpec({v: 1 for v in coeffs}, tuple(alts)))
    rate_vars = tuple(sorted(message_rate_var(m) for m in msgs))
    return ConcreteTemplate("T-GEN-COMPOUND", rate_vars, family, tuple(rows))


def _maccm_family(plan: MaccmPlan, channel, cfg):
    """Encoding-graph law: each codeword conditioned on its strict-superset
    cloud centers, inputs conditioned on their own codewords."""
    topo = plan.topology
    cards = {}
    factors = []
    order = sorted(plan.columns, key=lambda d: (-len(d), tuple(sorted(d))))
    for delta in order:
        parents = tuple(
            plan.codeword_var(d2)
            for d2 in order
            if delta < d2
        )
        cards[plan.codeword_var(delta)] = cfg.aux("W")
        factors.append(Factor((plan.codeword_var(delta),), parents))
    for i, xn in enumerate(topo.tx_names):
        parents = tuple(
            plan.codeword_var(d) for d in order if i in d
        )
        cards.update(_input_cards(channel, (xn,)))
        factors.append(Factor((xn,), parents))
    return FamilySpec(tuple(factors), cards, cfg.grid)


def superposition_polytope(
    plan: MaccmPlan,
    channel,
    pmf: JointPmf,
    mode: str = "ALL",
    var_map: dict | None = None,
    cfg: RunConfig = DEFAULT_CONFIG,
) -> RatePolytope:
    """Superposition-coding region rows on the message-group plan.

    Rows are indexed by (receiver, right-sided collection of its connected
    groups); OWN mode keeps only collections containing a group that
    intersects the receiver's own demands (correct-own-decoding filter), so
    its rows are always a subset of ALL mode's.
    """
    if mode not in ("ALL", "OWN"):
        raise TemplateUnknown(f"mode must be ALL or OWN, got {mode}")
    topo = plan.topology
    vm = var_map or {d: plan.codeword_var(d) for d in plan.columns}
    rows = []
    rate_vars = tuple(plan.rate_var(d) for d in plan.columns)
    joint = induced_joint(pmf, channel)
    for j in range(topo.k2):
        pool = plan.connected_groups(j)
        for coll in enumerate_right_sided(plan, pool):
            if not coll:
                continue
            chosen = set(coll)
            if any(
                other not in chosen for d in chosen for other in pool if other < d
            ):
                raise NotRightSidedClosure("internal enumeration error")
            if mode == "OWN" and not any(
                plan.groups[d] & topo.rx_messages[j] for d in coll
            ):
                continue
            sel = tuple(vm[d] for d in coll)
            rest = tuple(vm[d] for d in pool if d not in chosen)
            bound = conditional_mutual_information(
                joint, sel, (topo.rx_names[j],), rest
            )
            rows.append(({plan.rate_var(d): 1 for d in coll}, bound))
    return make_polytope(rate_vars, rows)


def _t_gen_sup(mode):
    def factory(channel, cfg):
        from .netmodel import build_maccm_plan

        plan = build_maccm_plan(channel.topology)
        family = _maccm_family(plan, channel, cfg)
        topo = plan.topology
        rows = []
        for j in range(topo.k2):
            pool = plan.connected_groups(j)
            for coll in enumerate_right_sided(plan, pool):
                if not coll:
                    continue
                if mode == "OWN" and not any(
                    plan.groups[d] & topo.rx_messages[j] for d in coll
                ):
                    continue
                sel = tuple(plan.codeword_var(d) for d in coll)
                rest = tuple(plan.codeword_var(d) for d in pool if d not in coll)
                rows.append(
                    RowSpec(
                        {plan.rate_var(d): 1 for d in coll},
                        ((_expr(sel, topo.rx_names[j], rest),),),
                    )
                )
        rate_vars = tuple(plan.rate_var(d) for d in plan.columns)
        return ConcreteTemplate(f"T-GEN-SUP-{mode}", rate_vars, family, tuple(rows))

    return factory


def _t_main2_outer(channel, cfg):
    X11, X12, X21 = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    cards = _input_cards(channel, (X11, X12, X21))
    for v in ("U1", "U2", "V"):
        cards[v] = cfg.aux(v[0])
    family = FamilySpec(
        (
            Factor((X11,), ()),
            Factor((X12,), ()),
            Factor((X21,), ()),
            Factor(("U1", "U2", "V"), (X11, X12, X21)),
        ),
        cards,
        cfg.grid,
    )
    rows = (
        _min_rows({"R1": 1},
                  [_expr(X11, Y1, (X12, X21))],
                  [_expr(X11, Y1, ("U2", "V", X12, X21)), _expr(("U2", "V"), Y2, (X12, X21))]),
        _min_rows({"R2": 1},
                  [_expr(X12, Y1, (X11, X21))],
                  [_expr(X12, Y1, ("U1", "V", X11, X21)), _expr(("U1", "V"), Y2, (X11, X21))]),
        _min_rows({"R3": 1},
                  [_expr(X21, Y2, (X11, X12))],
                  [_expr(X21, Y2, ("U1", "U2", X11, X12)), _expr(("U1", "U2"), Y1, (X11, X12))]),
        _min_rows({"R1": 1, "R2": 1},
                  [_expr((X11, X12), Y1, (X21,))],
                  [_expr((X11, X12), Y1, ("V", X21)), _expr("V", Y2, (X21,))]),
        _min_rows({"R2": 1, "R3": 1},
                  [_expr(X12, Y1, ("U1", "V", X11, X21)), _expr(("U1", "V", X21), Y2, (X11,))],
                  [_expr(X21, Y2, ("U1", "U2", X11, X12)), _expr(("U1", "U2", X12), Y1, (X11,))]),
        _min_rows({"R1": 1, "R3": 1},
                  [_expr(X11, Y1, ("U2", "V", X12, X21)), _expr(("U2", "V", X21), Y2, (X12,))],
                  [_expr(X21, Y2, ("U1", "U2", X11, X12)), _expr(("U1", "U2", X11), Y1, (X12,))]),
        _min_rows({"R1": 1, "R2": 1, "R3": 1},
                  [_expr((X11, X12), Y1, ("V", X21)), _expr(("V", X21), Y2)]),
        _min_rows({"R1": 1, "R2": 1, "R3": 1},
                  [_expr(X21, Y2, ("U1", "U2", X11, X12)), _expr(("U1", "U2", X11, X12), Y1)]),
    )
    return ConcreteTemplate("T-MAIN2-OUTER", ("R1", "R2", "R3"), family, rows)


def _crccm_names(channel):
    X1, XB = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    return X1, XB, Y1, Y2


def _t_crccm_outer(channel, cfg):
    X1, XB, Y1, Y2 = _crccm_names(channel)
    cards = _input_cards(channel, (X1, XB))
    for v in ("U", "V", "W"):
        cards[v] = cfg.aux(v)
    family = FamilySpec(
        (
            Factor(("U", "V", "W"), ()),
            Factor((X1,), ("U",), kind="det"),
            Factor((XB,), ("U", "V"), kind="det"),
        ),
        cards,
        cfg.grid,
    )
    rows = (
        _min_rows({"R0": 1},
                  [_expr("W", Y1)], [_expr("W", Y2)],
                  [_expr(("U", "W"), Y1, (X1,))], [_expr(("U", "W"), Y2, (X1,))],
                  [_expr(XB, Y1, (X1,))], [_expr(XB, Y2, (X1,))]),
        _min_rows({"R0": 1, "R1": 1},
                  [_expr((X1, XB), Y1)], [_expr(("U", "W", X1), Y1)],
                  [_expr(("U", X1), Y1, ("W",)), _expr("W", Y2)]),
        _min_rows({"R0": 1, "R2": 1},
                  [_expr(XB, Y2, (X1,))], [_expr(("V", "W"), Y2)],
                  [_expr("V", Y2, ("W",)), _expr("W", Y1)],
                  [_expr(XB, Y2, (X1, "U", "W")), _expr(("U", "W"), Y1, (X1,))]),
        _min_rows({"R0": 1, "R1": 1, "R2": 1},
                  [_expr((X1, XB), Y1, ("V", "W")), _expr(("V", "W"), Y2)]),
        _min_rows({"R0": 1, "R1": 1, "R2": 1},
                  [_expr(XB, Y2, (X1, "U", "W")), _expr(("U", "W", X1), Y1)]),
        _min_rows({"R0": 1, "R1": 1, "R2": 1},
                  [_expr((X1, XB), Y1, ("V", "W")), _expr("V", Y2, ("W",)), _expr("W", Y1)]),
        _min_rows({"R0": 1, "R1": 1, "R2": 1},
                  [_expr(XB, Y2, (X1, "U", "W")), _expr(("U", X1), Y1, ("W",)), _expr("W", Y2)]),
    )
    return ConcreteTemplate(
        "T-CRCCM-OUTER", ("R0", "R1", "R2"), family, rows, det_factors=(1, 2)
    )


def _crccm_u_family(channel, cfg):
    X1, XB, _, _ = _crccm_names(channel)
    cards = _input_cards(channel, (X1, XB))
    cards["U"] = cfg.aux("U")
    return FamilySpec((Factor(("U", X1, XB), ()),), cards, cfg.grid)


def _t_crccm_cap(channel, cfg):
    X1, XB, Y1, Y2 = _crccm_names(channel)
    return ConcreteTemplate(
        "T-CRCCM-CAP",
        ("R0", "R1", "R2"),
        _crccm_u_family(channel, cfg),
        (
            _min_rows({"R0": 1}, [_expr("U", Y1, (X1,))]),
            _min_rows({"R0": 1, "R1": 1}, [_expr(("U", X1), Y1)]),
            _min_rows({"R0": 1, "R2": 1}, [_expr(XB, Y2, (X1,))]),
            _min_rows({"R0": 1, "R2": 1},
                      [_expr(XB, Y2, ("U", X1)), _expr("U", Y1, (X1,))]),
            _min_rows({"R0": 1, "R1": 1, "R2": 1},
                      [_expr(XB, Y2, ("U", X1)), _expr(("U", X1), Y1)]),
            _min_rows({"R0": 1, "R1": 1, "R2": 1}, [_expr((X1, XB), Y2)]),
        ),
    )


def _t_crccm_sup(channel, cfg):
    """Pre-elimination superposition system with split rates R20, R22."""
    X1, XB, Y1, Y2 = _crccm_names(channel)
    return ConcreteTemplate(
        "T-CRCCM-SUP",
        ("R0", "R1", "R2", "R20", "R22"),
        _crccm_u_family(channel, cfg),
        (
            _min_rows({"R0": 1, "R20": 1}, [_expr("U", Y1, (X1,))]),
            _min_rows({"R0": 1, "R20": 1, "R1": 1}, [_expr(("U", X1), Y1)]),
            _min_rows({"R22": 1}, [_expr(XB, Y2, ("U", X1))]),
            _min_rows({"R0": 1, "R2": 1}, [_expr((XB, "U"), Y2, (X1,))]),
            _min_rows({"R0": 1, "R1": 1, "R2": 1}, [_expr((X1, "U", XB), Y2)]),
        ),
    )


_register_template("T-CRC-NEW", "decode-both capacity region", _t_crc_new)
_register_template("T-CRC-SUP", "superposition inner region", _t_crc_sup)
_register_template("T-CICCM-SW", "compound-MAC view (cloud-center form)", _t_ciccm_sw)
_register_template("T-CICCM-HAN", "compound-MAC view (independent-codeword form)",
                   _t_ciccm_han)
_register_template("T-CICCM-STRONG", "strong-interference capacity form",
                   _t_ciccm_strong)
_register_template("T-CIC-1SIDED", "one-sided common-message region", _t_cic_1sided)
_register_template("T-BCCR-STRONG", "BCCR strong-interference region", _t_bccr_strong)
_register_template("T-BCCR-LN-ACH", "BCCR successive-decoding region", _t_bccr_ln_ach)
_register_template("T-BCCR-1SIDED", "one-sided BCCR region", _t_bccr_1sided)
_register_template("T-M2ONE", "many-to-one strong region", _t_m2one)
_register_template("T-3CIC-ALL", "three-user decode-everything region", _t_3cic_all)
_register_template("T-3CIC-STRONG", "three-user reduced strong region", _t_3cic_strong)
_register_template("T-3CIC-ALMOST", "almost-decodable-interference region",
                   _t_3cic_almost)
_register_template("T-GEN-COMPOUND", "general connected-message compound region",
                   _t_gen_compound)
_register_template("T-GEN-SUP-ALL", "plan superposition region, decode connected",
                   _t_gen_sup("ALL"))
_register_template("T-GEN-SUP-OWN", "plan superposition region, own-message filter",
                   _t_gen_sup("OWN"))
_register_template("T-MAIN2-OUTER", "two-receiver MAIN outer bound", _t_main2_outer)
_register_template("T-CRCCM-OUTER", "cognitive-with-common outer bound",
                   _t_crccm_outer)
_register_template("T-CRCCM-CAP", "more-capable cognitive capacity form",
                   _t_crccm_cap)
_register_template("T-CRCCM-SUP", "cognitive superposition pre-elimination form",
                   _t_crccm_sup)


# ---------------------------------------------------------------------------
# split-rate inner bound for the broadcast-with-relays channel
# ---------------------------------------------------------------------------

BCCR_AUX = ("W1", "U1", "W2", "V2", "WB", "UB", "VB")


def bccr_inner_family(channel, cfg: RunConfig = DEFAULT_CONFIG) -> FamilySpec:
    """Declared factorization of the split-rate scheme's codeword layer."""
    X1, X2, XB = channel.topology.tx_names
    cards = _input_cards(channel, (X1, X2, XB))
    for v in BCCR_AUX:
        cards[v] = cfg.aux(v[0])
    return FamilySpec(
        (
            Factor(("W1", "U1", X1), ()),
            Factor(("W2", "V2", X2), ()),
            Factor(("WB", "UB", "VB"), ("W1", "U1", "W2", "V2")),
            Factor((XB,), (X1, X2, "VB", "UB", "WB", "U1", "W1", "V2", "W2")),
        ),
        cards,
        cfg.grid,
    )


def _bccr_quantities(channel, pmf: JointPmf):
    X1, X2, XB = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    j = induced_joint(pmf, channel)
    I = lambda a, b, c=(): conditional_mutual_information(
        j,
        (a,) if isinstance(a, str) else a,
        (b,) if isinstance(b, str) else b,
        (c,) if isinstance(c, str) else c,
    )
    q = {}
    q["eta0"] = I(("U1", "V2"), ("WB",))
    q["eta1"] = I(("V2",), ("UB",), ("U1", "W1", "W2", "WB"))
    q["eta2"] = I(("U1",), ("VB",), ("V2", "W1", "W2", "WB"))
    q["eta4"] = I(("UB",), ("VB",), ("U1", "V2", "W1", "W2", "WB"))
    q["theta1"] = I(("U1",), ("WB",), ("W1", "W2"))
    q["theta2"] = I(("V2",), ("WB",), ("W1", "W2"))
    # eta0 per the stated system conditions on (U1,V2;WB|W1,W2)
    q["eta0"] = I(("U1", "V2"), ("WB",), ("W1", "W2"))
    q["IY1"] = [
        I(("U1", "UB"), Y1, ("W1", "W2", "WB")),
        I(("WB", "UB"), Y1, ("W1", "W2", "U1")),
        I(("W2", "WB", "UB"), Y1, ("W1", "U1")),
        I(("U1", "WB", "UB"), Y1, ("W1", "W2")),
        I(("U1", "W2", "WB", "UB"), Y1, ("W1",)),
        I(("W1", "U1", "WB", "UB"), Y1, ("W2",)),
        I(("W1", "U1", "W2", "WB", "UB"), Y1),
    ]
    q["IY2"] = [
        I(("V2", "VB"), Y2, ("W1", "W2", "WB")),
        I(("WB", "VB"), Y2, ("W1", "W2", "V2")),
        I(("W1", "WB", "VB"), Y2, ("W2", "V2")),
        I(("V2", "WB", "VB"), Y2, ("W1", "W2")),
        I(("W1", "V2", "WB", "VB"), Y2, ("W2",)),
        I(("W2", "V2", "WB", "VB"), Y2, ("W1",)),
        I(("W1", "V2", "W2", "WB", "VB"), Y2),
    ]
    return q


_BCCR_UPPER_Y1 = [
    # (row index into IY1, rate pattern over split vars)
    (0, ("R11", "B1")),
    (1, ("R0", "B0", "B1")),
    (2, ("R20", "R0", "B0", "B1")),
    (3, ("R0", "B0", "R11", "B1")),
    (4, ("R20", "R0", "B0", "R11", "B1")),
    (5, ("R10", "R0", "B0", "R11", "B1")),
    (6, ("R10", "R20", "R0", "B0", "R11", "B1")),
]
_BCCR_UPPER_Y2 = [
    (0, ("R22", "B2")),
    (1, ("R0", "B0", "B2")),
    (2, ("R10", "R0", "B0", "B2")),
    (3, ("R0", "B0", "R22", "B2")),
    (4, ("R10", "R0", "B0", "R22", "B2")),
    (5, ("R20", "R0", "B0", "R22", "B2")),
    (6, ("R10", "R20", "R0", "B0", "R22", "B2")),
]

_BCCR_VARS = ("R0", "R1", "R2", "R10", "R11", "R20", "R22", "B0", "B1", "B2")


def _bccr_system(q: dict, eps: float, drop_common_rows: bool = False) -> RatePolytope:
    """Full split-rate H-system prior to elimination.

    drop_common_rows removes the rows that only police the common message's
    correct decoding (the no-common-message corollary's reduction).
    """
    rows = []
    lower = [
        (("B0",), q["eta0"]),
        (("B0", "B1"), q["eta0"] + q["eta1"]),
        (("B0", "B2"), q["eta0"] + q["eta2"]),
        (("B0", "B1", "B2"), q["eta0"] + q["eta1"] + q["eta2"] + q["eta4"]),
    ]
    for pattern, bound in lower:
        rows.append(({v: -1 for v in pattern}, -(bound + eps)))
    for idx, pattern in _BCCR_UPPER_Y1:
        if drop_common_rows and idx in (1, 2):
            continue
        rows.append(({v: 1 for v in pattern}, q["IY1"][idx] + q["theta1"] - eps))
    for idx, pattern in _BCCR_UPPER_Y2:
        if drop_common_rows and idx in (1, 2):
            continue
        rows.append(({v: 1 for v in pattern}, q["IY2"][idx] + q["theta2"] - eps))
    # rate splitting as paired inequalities
    rows.append(({"R1": 1, "R10": -1, "R11": -1}, 0.0))
    rows.append(({"R1": -1, "R10": 1, "R11": 1}, 0.0))
    rows.append(({"R2": 1, "R20": -1, "R22": -1}, 0.0))
    rows.append(({"R2": -1, "R20": 1, "R22": 1}, 0.0))
    return make_polytope(_BCCR_VARS, rows)


def _bins_feasible(q: dict, eps: float) -> bool:
    """Do admissible bin sizes exist at all-zero message rates?"""
    rows = []
    lower = [
        ((1, 0, 0), q["eta0"]),
        ((1, 1, 0), q["eta0"] + q["eta1"]),
        ((1, 0, 1), q["eta0"] + q["eta2"]),
        ((1, 1, 1), q["eta0"] + q["eta1"] + q["eta2"] + q["eta4"]),
    ]
    A, b = [], []
    for pattern, bound in lower:
        A.append([-x for x in pattern])
        b.append(-(bound + eps))
    proj = {"B0": 0, "B1": 1, "B2": 2}
    for idx, pattern in _BCCR_UPPER_Y1:
        vec = [0.0, 0.0, 0.0]
        for v in pattern:
            if v in proj:
                vec[proj[v]] = 1.0
        A.append(vec)
        b.append(q["IY1"][idx] + q["theta1"] - eps)
    for idx, pattern in _BCCR_UPPER_Y2:
        vec = [0.0, 0.0, 0.0]
        for v in pattern:
            if v in proj:
                vec[proj[v]] = 1.0
        A.append(vec)
        b.append(q["IY2"][idx] + q["theta2"] - eps)
    status, _ = lp_max(np.zeros(3), np.asarray(A), np.asarray(b))
    return status == "optimal"


def bccr_inner_polytope(
    channel,
    pmf: JointPmf,
    eps: float = 0.0,
    cfg: RunConfig = DEFAULT_CONFIG,
    validate: bool = True,
    drop_common_rows: bool = False,
) -> RatePolytope:
    """Split-rate inner-bound slice at one admissible codeword-layer pmf.

    Builds the full system over (R0, split rates, bin rates), closes the
    strict inequalities at `eps`, eliminates the split and bin variables by
    Fourier-Motzkin, and returns the reduced (R0, R1, R2) polytope.  When the
    bin lower bounds are infeasible the scheme collapses; the origin-only
    polytope is returned with a diagnostic warning.
    """
    if validate:
        fam = bccr_inner_family(channel, cfg)
        fam = FamilySpec(
            fam.factors, {v: pmf.card(v) for v in pmf.variables}, fam.grid_resolution
        )
        dev = check_factorization(pmf, fam)
        if dev > 1e-9:
            raise FamilyViolation(
                f"pmf violates the split-rate factorization (deviation {dev:.2e})"
            )
    q = _bccr_quantities(channel, pmf)
    if not _bins_feasible(q, eps):
        warnings.warn(
            "bin lower bounds exceed every upper bound: returning the "
            "origin-only region",
            RuntimeWarning,
        )
        return make_polytope(
            ("R0", "R1", "R2"),
            [({"R0": 1}, 0.0), ({"R1": 1}, 0.0), ({"R2": 1}, 0.0)],
        )
    full = _bccr_system(q, eps, drop_common_rows=drop_common_rows)
    reduced = fourier_motzkin_eliminate(
        full, ("R10", "R11", "R20", "R22", "B0", "B1", "B2")
    )
    return remove_redundant(reduced)


def hk_reference_polytope(channel, pmf: JointPmf, cfg: RunConfig = DEFAULT_CONFIG) -> RatePolytope:
    """Directly-coded split-rate system with no broadcast-node layer.

    The reference for the degenerate-WB/UB/VB comparison: per receiver, the
    five joint-decoding error rows of the two-split scheme, then the split
    rates are eliminated.
    """
    X1, X2, XB = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    j = induced_joint(pmf, channel)
    I = lambda a, b, c=(): conditional_mutual_information(j, a, b, c)
    rows = [
        ({"R11": 1}, I(("U1",), (Y1,), ("W1", "W2"))),
        ({"R20": 1}, I(("W2",), (Y1,), ("W1", "U1"))),
        ({"R20": 1, "R11": 1}, I(("U1", "W2"), (Y1,), ("W1",))),
        ({"R10": 1, "R11": 1}, I(("W1", "U1"), (Y1,), ("W2",))),
        ({"R10": 1, "R20": 1, "R11": 1}, I(("W1", "U1", "W2"), (Y1,))),
        ({"R22": 1}, I(("V2",), (Y2,), ("W1", "W2"))),
        ({"R10": 1}, I(("W1",), (Y2,), ("W2", "V2"))),
        ({"R10": 1, "R22": 1}, I(("W1", "V2"), (Y2,), ("W2",))),
        ({"R20": 1, "R22": 1}, I(("W2", "V2"), (Y2,), ("W1",))),
        ({"R10": 1, "R20": 1, "R22": 1}, I(("W1", "V2", "W2"), (Y2,))),
        ({"R1": 1, "R10": -1, "R11": -1}, 0.0),
        ({"R1": -1, "R10": 1, "R11": 1}, 0.0),
        ({"R2": 1, "R20": -1, "R22": -1}, 0.0),
        ({"R2": -1, "R20": 1, "R22": 1}, 0.0),
    ]
    poly = make_polytope(("R1", "R2", "R10", "R11", "R20", "R22"), rows)
    return remove_redundant(
        fourier_motzkin_eliminate(poly, ("R10", "R11", "R20", "R22"))
    )


def slice_at_zero(p: RatePolytope, var: str) -> RatePolytope:
    """Intersect with {var = 0} and project the variable away."""
    rows = [(dict(zip(p.variables, coeffs)), bound) for coeffs, bound in zip(p.A, p.b)]
    rows.append(({var: 1}, 0.0))
    clamped = make_polytope(p.variables, rows)
    return remove_redundant(fourier_motzkin_eliminate(clamped, (var,)))


# ---------------------------------------------------------------------------
# cognitive-channel elimination identity
# ---------------------------------------------------------------------------


@dataclass
class FmMatchReport:
    reduced: RatePolytope
    direct: RatePolytope
    max_vertex_gap: float
    matched: bool


def crccm_fm_reduction(
    channel, pmf: JointPmf, cfg: RunConfig = DEFAULT_CONFIG, validate: bool = True
) -> FmMatchReport:
    """Eliminate the split rates from the superposition system and compare
    with the directly-built capacity form at the same pmf (vertex match)."""
    sup = get_template("T-CRCCM-SUP", channel, cfg)
    cap = get_template("T-CRCCM-CAP", channel, cfg)
    if validate:
        _validate_member(sup, pmf)
    p_sup = evaluate_template(sup, channel, pmf, cfg, validate=False)
    rows = [
        (dict(zip(p_sup.variables, coeffs)), bound)
        for coeffs, bound in zip(p_sup.A, p_sup.b)
    ]
    # rate splitting R2 = R20 + R22 as paired inequalities
    rows.append(({"R2": 1, "R20": -1, "R22": -1}, 0.0))
    rows.append(({"R2": -1, "R20": 1, "R22": 1}, 0.0))
    p_sup = make_polytope(p_sup.variables, rows)
    reduced = remove_redundant(fourier_motzkin_eliminate(p_sup, ("R20", "R22")))
    direct = remove_redundant(
        evaluate_template(cap, channel, pmf, cfg, validate=False)
    )
    from .ratepoly import enumerate_vertices

    va = enumerate_vertices(reduced)
    vb = enumerate_vertices(direct)
    if va.shape == vb.shape and va.size:
        gap = float(np.max(np.abs(va - vb)))
    elif va.shape == vb.shape:
        gap = 0.0
    else:
        gap = math.inf
    return FmMatchReport(reduced, direct, gap, gap <= 1e-9)


# ---------------------------------------------------------------------------
# less-noisy sum rates
# ---------------------------------------------------------------------------


@dataclass
class SumRateResult:
    value: float
    maximizer: object
    note: str = ""


def _golden_max(f, lo: float, hi: float, tol: float = 1e-9) -> tuple[float, float]:
    """Golden-section maximum refined from a coarse scan (handles mild
    non-unimodality by scanning first)."""
    xs = np.linspace(lo, hi, 129)
    vals = [f(x) for x in xs]
    k = int(np.argmax(vals))
    a = xs[max(0, k - 1)]
    b = xs[min(len(xs) - 1, k + 1)]
    phi = (math.sqrt(5) - 1) / 2
    c, d = b - phi * (b - a), a + phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def gaussian_cic_sumrate_closed_form(p1, p2, a, b, rho_tol: float = 1e-9):
    """Max over rho in [0,1] of the two successive-decoding branches."""

    def branch1(rho):
        num = rho**2 * b**2 * p1 + p2 + 2 * b * rho * math.sqrt(p1 * p2)
        den = 1 + (1 - rho**2) * b**2 * p1
        return gaussian_psi((1 - rho**2) * p1) + gaussian_psi(max(num / den, 0.0))

    def branch2(rho):
        return gaussian_psi(max(p1 + a**2 * p2 + 2 * a * rho * math.sqrt(p1 * p2), 0.0))

    x1, v1 = _golden_max(branch1, 0.0, 1.0, rho_tol)
    x2, v2 = _golden_max(branch2, 0.0, 1.0, rho_tol)
    if v1 >= v2:
        return v1, x1, "codeword-splitting branch"
    return v2, x2, "joint-decoding branch"


def lessnoisy_sumrate(
    kind: str,
    channel_or_net,
    cfg: RunConfig = DEFAULT_CONFIG,
    waive: bool = False,
) -> SumRateResult:
    """Sum-rate of the successive-decoding scheme under less-noisy ordering.

    kind: "CIC" (common-message two-user), "BCCR", or "GAUSS-CIC".  The
    matching less-noisy condition is verified first unless waived.
    """
    kind = kind.upper()
    if kind == "GAUSS-CIC":
        net = channel_or_net
        a, b = net.gains[0, 1], net.gains[1, 0]
        if not waive:
            if not (abs(b) <= 1 + 1e-9 and abs(a) >= 1 - 1e-9):
                raise ConditionNotVerified(
                    f"gain condition |b| <= 1 <= |a| fails (a={a}, b={b})"
                )
        p1, p2 = net.powers[0], net.powers[1]
        val, rho, note = gaussian_cic_sumrate_closed_form(p1, p2, a, b)
        return SumRateResult(val, {"rho": rho, "powers": [p1, p2]}, note)
    if kind == "CIC":
        channel = channel_or_net
        if not waive:
            rep = check_condition(channel, "C-CIC-LN", cfg)
            if rep.verdict != "HOLDS":
                raise ConditionNotVerified(f"C-CIC-LN verdict {rep.verdict}")
        X1, X2 = channel.topology.tx_names
        Y1, Y2 = channel.topology.rx_names
        fam = _family_joint(channel, cfg, (X1, X2))
        best, best_pmf = -1.0, None
        for pmf in family_grid(fam):
            j = induced_joint(pmf, channel)
            v = max(
                conditional_mutual_information(j, (X1,), (Y1,), (X2,))
                + conditional_mutual_information(j, (X2,), (Y2,)),
                conditional_mutual_information(j, (X1, X2), (Y1,)),
            )
            if v > best:
                best, best_pmf = v, pmf
        return SumRateResult(best, best_pmf)
    if kind == "BCCR":
        channel = channel_or_net
        if not waive:
            rep = check_condition(channel, "C-BCCR-LN", cfg)
            if rep.verdict != "HOLDS":
                raise ConditionNotVerified(f"C-BCCR-LN verdict {rep.verdict}")
        X1, X2, XB = channel.topology.tx_names
        Y1, Y2 = channel.topology.rx_names
        fam = _bccr_family(channel, cfg)
        best, best_pmf = -1.0, None
        for pmf in family_grid(fam):
            j = induced_joint(pmf, channel)
            v = max(
                conditional_mutual_information(j, (X1, XB), (Y1,), (X2,))
                + conditional_mutual_information(j, (X2,), (Y2,)),
                conditional_mutual_information(j, (X1, X2, XB), (Y1,)),
            )
            if v > best:
                best, best_pmf = v, pmf
        return SumRateResult(best, best_pmf)
    raise TemplateUnknown(f"unknown sum-rate kind {kind!r}")


# ---------------------------------------------------------------------------
# boundary-restricted conditions (need the sweep machinery above)
# ---------------------------------------------------------------------------


def _special_crc_new(channel, cfg, params):
    """New cognitive strong-interference class: proportional-information
    inequality on product pmfs, plus region equality checked on the pmfs
    attaining the sweep boundary (the operational reading of Remark 4.1)."""
    X1, X2 = channel.topology.tx_names
    Y1, Y2 = channel.topology.rx_names
    rng = np.random.default_rng(cfg.seed)
    part1 = _pair(channel, cfg, _expr(X1, Y1, (X2,)), _expr(X1, Y2, (X2,)),
                  [(X1,), (X2,)], label="cross-observation dominance")
    w1, t1, _ = _evaluate_inequality(channel, part1, cfg, rng)
    infos = [(w1, t1, 0.0)]
    details = [{"label": part1.label, "worst_margin_bits": w1}]
    est_new, pmfs_new = sweep_template("T-CRC-NEW", channel, cfg, collect_pmfs=True)
    est_sup = sweep_template("T-CRC-SUP", channel, cfg)
    gap = float(np.max(est_new.support - est_sup.support))
    boundary_margin = math.inf
    wit = None
    for pmf in pmfs_new:
        j = induced_joint(pmf, channel)
        m = conditional_mutual_information(j, (X1, X2), (Y1,)) - \
            conditional_mutual_information(j, (X1, X2), (Y2,))
        if m < boundary_margin:
            boundary_margin = m
            wit = pmf
    infos.append((boundary_margin, wit.table if wit is not None else None, 0.0))
    details.append({"label": "boundary sum-rate dominance", "worst_margin_bits": boundary_margin})
    verdict, worst = _classify(infos, cfg.tol_bits)
    w_idx = int(np.argmin([m for m, _, _ in infos]))
    wtab = infos[w_idx][1]
    witness = None
    if wtab is not None:
        wvars = part1.family.variables if w_idx == 0 else wit.variables
        witness = JointPmf(wvars, wtab)
    return ConditionReport(
        "C-CRC-NEW", verdict, worst, witness, cfg.grid, details,
        [f"region support gap at grid {cfg.grid}: {gap:.3e} bits"],
    )


def _special_3cic_almost(channel, cfg, params):
    """Almost-decodable-interference regime: four product-family inequalities
    plus one checked only on boundary-achieving pmfs of the reduced region."""
    X = channel.topology.tx_names
    Y = channel.topology.rx_names
    rng = np.random.default_rng(cfg.seed)
    standard = [
        _pair(channel, cfg, _expr(X[1], Y[1], (X[0], X[2])), _expr(X[1], Y[0], (X[0], X[2])),
              [(X[0],), (X[1],), (X[2],)]),
        _pair(channel, cfg, _expr(X[2], Y[2], (X[0], X[1])), _expr(X[2], Y[0], (X[0], X[1])),
              [(X[0],), (X[1],), (X[2],)]),
        _pair(channel, cfg, _expr((X[0], X[2]), Y[0], (X[1],)), _expr((X[0], X[2]), Y[1], (X[1],)),
              [(X[0], X[2]), (X[1],)]),
        _pair(channel, cfg, _expr((X[0], X[1]), Y[1], (X[2],)), _expr((X[0], X[1]), Y[2], (X[2],)),
              [(X[0], X[1]), (X[2],)]),
    ]
    infos, details = [], []
    for ineq in standard:
        w, t, lhs = _evaluate_inequality(channel, ineq, cfg, rng)
        infos.append((w, t, lhs))
        details.append({"label": f"{ineq.lhs.render()} <= {ineq.rhs.render()}",
                        "worst_margin_bits": w})
    _, pmfs = sweep_template("T-3CIC-ALMOST", channel, cfg, collect_pmfs=True)
    boundary_margin = math.inf
    wit = None
    for pmf in pmfs:
        j = induced_joint(pmf, channel)
        m = conditional_mutual_information(j, (X[2],), (Y[0],)) - \
            conditional_mutual_information(j, (X[2],), (Y[2],), (X[0], X[1]))
        if m < boundary_margin:
            boundary_margin, wit = m, pmf
    infos.append((boundary_margin, wit.table if wit is not None else None, 0.0))
    details.append({"label": "boundary own-rate absorption",
                    "worst_margin_bits": boundary_margin})
    verdict, worst = _classify(infos, cfg.tol_bits)
    w_idx = int(np.argmin([m for m, _, _ in infos]))
    wtab = infos[w_idx][1]
    witness = None
    if wtab is not None:
        wvars = standard[min(w_idx, 3)].family.variables if w_idx < 4 else wit.variables
        witness = JointPmf(wvars, wtab)
    return ConditionReport(
        "C-3CIC-ALMOST", verdict, worst, witness, cfg.grid, details,
        ["first line checked on sweep-boundary pmfs only"],
    )


register_condition("C-CRC-NEW", "new cognitive strong-interference class",
                   _check_crc, special=_special_crc_new)
register_condition("C-3CIC-ALMOST", "almost decodable interference",
                   _check_cic_full(3), special=_special_3cic_almost)
