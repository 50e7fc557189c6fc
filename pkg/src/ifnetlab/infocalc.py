"""Exact information measures on small finite alphabets.

Joint pmfs are dense numpy tensors with one axis per named variable.  All
information quantities are in bits; 0*log(0) is taken as 0, and conditional
terms with zero-probability conditioning events contribute 0.

Families of distributions ("for all pmfs ..." quantifiers) are realized as
simplex grids: every factor of a declared factorization ranges over the
type-class lattice with denominator g.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    AlphabetMismatch,
    NegativeSnr,
    NotPsd,
    OverlappingSets,
    SpecCycle,
    VariableUnknown,
)

PROB_TOL = 1e-12
LOG2 = math.log(2.0)


def _xlogx(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    mask = p > 0
    out[mask] = p[mask] * np.log2(p[mask])
    return out


@dataclass(frozen=True)
class JointPmf:
    """Probability table over an ordered tuple of named finite variables."""

    variables: tuple[str, ...]
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.ndim != len(self.variables):
            raise AlphabetMismatch(
                f"table rank {t.ndim} != {len(self.variables)} variables"
            )
        if np.any(t < -PROB_TOL):
            raise AlphabetMismatch("negative probability entry")
        s = float(t.sum())
        if abs(s - 1.0) > 1e-9:
            raise AlphabetMismatch(f"table sums to {s}, not 1")
        object.__setattr__(self, "table", np.clip(t, 0.0, None))

    @property
    def cards(self) -> tuple[int, ...]:
        return self.table.shape

    def card(self, var: str) -> int:
        return self.table.shape[self._axis(var)]

    def _axis(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise VariableUnknown(f"unknown variable {var!r}", have=self.variables)

    def _axes(self, names: Sequence[str]) -> tuple[int, ...]:
        return tuple(self._axis(v) for v in names)

    def marginal(self, keep: Sequence[str]) -> "JointPmf":
        keep = tuple(keep)
        drop = tuple(i for i, v in enumerate(self.variables) if v not in keep)
        t = self.table.sum(axis=drop) if drop else self.table
        order = tuple(v for v in self.variables if v in keep)
        # reorder axes to match `keep`
        perm = tuple(order.index(v) for v in keep)
        return JointPmf(keep, np.transpose(t, perm) if perm else t)

    def entropy(self, of: Sequence[str] | None = None) -> float:
        """H(of) in bits; defaults to the full joint."""
        if of is None:
            t = self.table
        else:
            keep = self._axes(of)
            drop = tuple(i for i in range(self.table.ndim) if i not in keep)
            t = self.table.sum(axis=drop) if drop else self.table
        return float(-_xlogx(np.ravel(t)).sum())

    def rename(self, mapping: dict[str, str]) -> "JointPmf":
        return JointPmf(tuple(mapping.get(v, v) for v in self.variables), self.table)


def conditional_mutual_information(
    pmf: JointPmf,
    a: Sequence[str],
    b: Sequence[str],
    c: Sequence[str] = (),
) -> float:
    """I(A;B|C) in bits via H(AC)+H(BC)-H(ABC)-H(C).

    The three sets must be pairwise disjoint; the empty first or second set
    gives 0 exactly.
    """
    a, b, c = tuple(a), tuple(b), tuple(c)
    for v in (*a, *b, *c):
        pmf._axis(v)
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise OverlappingSets("a, b, c must be disjoint", a=a, b=b, c=c)
    if not a or not b:
        return 0.0
    h_ac = pmf.entropy(a + c)
    h_bc = pmf.entropy(b + c)
    h_abc = pmf.entropy(a + b + c)
    h_c = pmf.entropy(c) if c else 0.0
    val = h_ac + h_bc - h_abc - h_c
    return max(val, 0.0) if val > -1e-9 else val


def mutual_information(pmf: JointPmf, a, b) -> float:
    return conditional_mutual_information(pmf, a, b, ())


# ---------------------------------------------------------------------------
# simplex grids and factorization families
# ---------------------------------------------------------------------------


def simplex_grid(cardinality: int, resolution: int) -> Iterator[np.ndarray]:
    """All pmfs on `cardinality` atoms with masses that are multiples of 1/g.

    Deterministic lexicographic order over the compositions of g; the count
    is C(g + cardinality - 1, cardinality - 1).
    """
    if cardinality < 1 or resolution < 1:
        raise ValueError("cardinality and resolution must be >= 1")
    g = resolution

    def comps(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in comps(total - first, parts - 1):
                yield (first,) + rest

    for c in comps(g, cardinality):
        yield np.asarray(c, dtype=float) / g


def simplex_grid_count(cardinality: int, resolution: int) -> int:
    return math.comb(resolution + cardinality - 1, cardinality - 1)


@dataclass(frozen=True)
class Factor:
    """One block of a factorization, P(targets | given).

    kind:
      "grid"    -- conditional ranges over a simplex grid per conditioning cell
      "det"     -- conditional ranges over all deterministic maps given->targets
      "uniform" -- fixed uniform distribution (independent of `given`)
    """

    targets: tuple[str, ...]
    given: tuple[str, ...] = ()
    kind: str = "grid"
    resolution: int | None = None


@dataclass(frozen=True)
class FamilySpec:
    """A declared factorization plus per-variable cardinalities.

    Every variable must be produced by exactly one factor and the factor
    graph must be acyclic (factors are listed in a valid topological order:
    conditioning variables appear in earlier factors).
    """

    factors: tuple[Factor, ...]
    cards: dict[str, int] = field(default_factory=dict)
    grid_resolution: int = 4

    def __post_init__(self):
        produced: set[str] = set()
        for f in self.factors:
            for v in f.targets:
                if v in produced:
                    raise SpecCycle(f"variable {v!r} produced twice")
            for v in f.given:
                if v not in produced:
                    raise SpecCycle(
                        f"factor for {f.targets} conditions on {v!r} before it is produced"
                    )
            produced.update(f.targets)
        for v in produced:
            if v not in self.cards:
                raise VariableUnknown(f"no cardinality declared for {v!r}")

    @property
    def variables(self) -> tuple[str, ...]:
        out = []
        for f in self.factors:
            out.extend(f.targets)
        return tuple(out)

    def factor_resolution(self, f: Factor) -> int:
        return f.resolution if f.resolution is not None else self.grid_resolution


def parse_factorization(text: str, cards: dict[str, int], resolution: int = 4) -> FamilySpec:
    """Parse "P(X1)P(X2|W)..." into a FamilySpec with grid factors."""
    factors = []
    for chunk in text.replace(" ", "").split(")"):
        if not chunk:
            continue
        if not chunk.startswith("P("):
            raise SpecCycle(f"bad factor syntax near {chunk!r}")
        body = chunk[2:]
        if "|" in body:
            tgt, giv = body.split("|", 1)
            factors.append(Factor(tuple(tgt.split(",")), tuple(giv.split(","))))
        else:
            factors.append(Factor(tuple(body.split(",")), ()))
    return FamilySpec(tuple(factors), dict(cards), resolution)


def _factor_tables(spec: FamilySpec, f: Factor) -> np.ndarray:
    """Stacked conditional tables for one factor.

    Returns an array of shape (n_choices, *given_cards, *target_cards); each
    slice along axis 0 is one admissible conditional P(targets|given).
    """
    tcards = tuple(spec.cards[v] for v in f.targets)
    gcards = tuple(spec.cards[v] for v in f.given)
    tsize = int(np.prod(tcards)) if tcards else 1
    gsize = int(np.prod(gcards)) if gcards else 1
    if f.kind == "uniform":
        table = np.full(gcards + tcards, 1.0 / tsize)
        return table[None, ...]
    if f.kind == "det":
        maps = itertools.product(range(tsize), repeat=gsize)
        rows = []
        for m in maps:
            t = np.zeros((gsize, tsize))
            t[np.arange(gsize), m] = 1.0
            rows.append(t)
        return np.asarray(rows).reshape(len(rows), *gcards, *tcards)
    if f.kind == "grid":
        g = spec.factor_resolution(f)
        points = np.asarray(list(simplex_grid(tsize, g)))  # (npts, tsize)
        if gsize == 1:
            return points.reshape(len(points), *gcards, *tcards)
        # independent grid per conditioning assignment
        idx = itertools.product(range(len(points)), repeat=gsize)
        rows = []
        for combo in idx:
            rows.append(points[list(combo)])
        return np.asarray(rows).reshape(len(rows), *gcards, *tcards)
    raise SpecCycle(f"unknown factor kind {f.kind!r}")


def family_grid_count(spec: FamilySpec) -> int:
    n = 1
    for f in spec.factors:
        tsize = int(np.prod([spec.cards[v] for v in f.targets]))
        gsize = int(np.prod([spec.cards[v] for v in f.given])) if f.given else 1
        if f.kind == "uniform":
            k = 1
        elif f.kind == "det":
            k = tsize**gsize
        else:
            k = simplex_grid_count(tsize, spec.factor_resolution(f)) ** gsize
        n *= k
    return n


def _assemble(spec: FamilySpec, choices: Sequence[np.ndarray]) -> np.ndarray:
    """Multiply chosen factor tables into a joint over spec.variables."""
    variables = spec.variables
    axis = {v: i for i, v in enumerate(variables)}
    joint = np.ones([spec.cards[v] for v in variables])
    for f, tab in zip(spec.factors, choices):
        # broadcast tab (given..., targets...) onto the full joint axes
        shape = [1] * len(variables)
        order = list(f.given) + list(f.targets)
        src = np.moveaxis(
            tab, range(len(order)), [sorted(axis[v] for v in order).index(axis[v]) for v in order]
        )
        for v in order:
            shape[axis[v]] = spec.cards[v]
        joint = joint * src.reshape(shape)
    return joint


def family_grid(spec: FamilySpec) -> Iterator[JointPmf]:
    """Cartesian product of per-factor simplex grids, assembled into joints."""
    stacks = [_factor_tables(spec, f) for f in spec.factors]
    variables = spec.variables
    for combo in itertools.product(*[range(len(s)) for s in stacks]):
        choices = [stacks[i][j] for i, j in enumerate(combo)]
        yield JointPmf(variables, _assemble(spec, choices))


def _broadcast_factor_stack(spec: FamilySpec, fidx: int, tab: np.ndarray) -> np.ndarray:
    variables = spec.variables
    axis = {v: i for i, v in enumerate(variables)}
    f = spec.factors[fidx]
    order = list(f.given) + list(f.targets)
    src = np.moveaxis(
        tab,
        range(1, 1 + len(order)),
        [1 + sorted(axis[v] for v in order).index(axis[v]) for v in order],
    )
    shape = [tab.shape[0]] + [1] * len(variables)
    for v in order:
        shape[1 + axis[v]] = spec.cards[v]
    return src.reshape(shape)


def _factor_sizes(spec: FamilySpec, stacks) -> list[int]:
    return [len(s) for s in stacks]


def family_grid_chunk(
    spec: FamilySpec, start: int, stop: int, stacks=None
) -> np.ndarray:
    """Members [start, stop) of the family as one stacked array (B, *cards).

    Member index decodes in mixed radix over the per-factor choice counts,
    first factor most significant: identical order to family_grid.
    """
    stacks = stacks or [_factor_tables(spec, f) for f in spec.factors]
    sizes = _factor_sizes(spec, stacks)
    idx = np.arange(start, stop)
    out = np.ones([len(idx)] + [spec.cards[v] for v in spec.variables])
    rem = idx.copy()
    radix = list(np.cumprod([1] + sizes[::-1][:-1]))[::-1]
    for fi, r in enumerate(radix):
        picks = rem // r
        rem = rem % r
        out = out * _broadcast_factor_stack(spec, fi, stacks[fi][picks])
    return out


def family_grid_batched(spec: FamilySpec, chunk: int = 65536) -> Iterator[np.ndarray]:
    """Yield stacked joints of shape (B, *cards) covering the whole family.

    Identical members and order as family_grid; used by the sweep engine.
    """
    stacks = [_factor_tables(spec, f) for f in spec.factors]
    total = int(np.prod(_factor_sizes(spec, stacks)))
    for start in range(0, total, chunk):
        yield family_grid_chunk(spec, start, min(start + chunk, total), stacks)


def check_factorization(pmf: JointPmf, spec: FamilySpec, tol: float = 1e-9) -> float:
    """Max abs deviation between pmf and the product of its extracted factors."""
    if tuple(sorted(pmf.variables)) != tuple(sorted(spec.variables)):
        raise VariableUnknown("pmf variables do not match family variables")
    aligned = pmf.marginal(spec.variables)
    choices = []
    for f in spec.factors:
        marg_all = aligned.marginal(f.given + f.targets).table
        if f.given:
            giv = marg_all.sum(axis=tuple(range(len(f.given), marg_all.ndim)))
            with np.errstate(divide="ignore", invalid="ignore"):
                cond = marg_all / giv.reshape(giv.shape + (1,) * len(f.targets))
            tsize = int(np.prod([spec.cards[v] for v in f.targets]))
            flat = cond.reshape(giv.shape + (tsize,))
            bad = ~np.isfinite(flat).all(axis=-1)
            flat[bad] = 1.0 / tsize
            cond = flat.reshape(marg_all.shape)
        else:
            cond = marg_all
        choices.append(cond)
    rebuilt = _assemble(spec, choices)
    return float(np.max(np.abs(rebuilt - aligned.table)))


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------


def induced_joint(input_pmf: JointPmf, channel) -> JointPmf:
    """Push a joint over (auxiliaries, inputs) through a DiscreteChannel.

    Outputs are drawn conditionally on the channel inputs only, so any
    auxiliary D satisfies D -> inputs -> outputs by construction.
    """
    tx = channel.topology.tx_names
    rx = channel.topology.rx_names
    for i, name in enumerate(tx):
        if name not in input_pmf.variables:
            raise AlphabetMismatch(f"input variable {name!r} missing from pmf")
        if input_pmf.card(name) != channel.input_cards[i]:
            raise AlphabetMismatch(
                f"cardinality mismatch on {name!r}",
                pmf=input_pmf.card(name),
                channel=channel.input_cards[i],
            )
    aux = [v for v in input_pmf.variables if v not in tx]
    ordered = input_pmf.marginal(tuple(aux) + tuple(tx))
    a_shape = ordered.table.shape[: len(aux)]
    x_size = int(np.prod(channel.input_cards))
    y_shape = tuple(channel.output_cards)
    flat = ordered.table.reshape(a_shape + (x_size,))
    ch = channel.tensor.reshape(x_size, int(np.prod(y_shape)))
    joint = flat[..., :, None] * ch  # (aux..., x, y)
    joint = joint.reshape(a_shape + tuple(channel.input_cards) + y_shape)
    return JointPmf(tuple(aux) + tuple(tx) + tuple(rx), joint)


# ---------------------------------------------------------------------------
# Gaussian quantities
# ---------------------------------------------------------------------------


def gaussian_psi(x: float) -> float:
    """Point-to-point Gaussian capacity 0.5*log2(1+x) in bits.

    Imported convention: the sum-rate formulas use this function without
    redefining it, so the standard unit-noise AWGN capacity is adopted.
    """
    if x < 0:
        raise NegativeSnr(f"snr must be >= 0, got {x}")
    return 0.5 * math.log2(1.0 + x)


@dataclass(frozen=True)
class GaussianCovariance:
    """PSD input covariance, diagonal bounded by the declared powers."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NotPsd("covariance must be square")
        if np.max(np.abs(m - m.T)) > 1e-9:
            raise NotPsd("covariance must be symmetric")
        eig = np.linalg.eigvalsh((m + m.T) / 2)
        if eig.min() < -1e-9:
            raise NotPsd(f"covariance not PSD, min eigenvalue {eig.min()}")
        object.__setattr__(self, "matrix", m)

    def check_powers(self, powers: Sequence[float]):
        d = np.diag(self.matrix)
        if np.any(d > np.asarray(powers) + 1e-9):
            raise NotPsd("diagonal exceeds declared powers", diag=d.tolist())


def _conditional_input_cov(cov: np.ndarray, cond: Sequence[int]) -> np.ndarray:
    """Covariance of X given X_cond (linear-Gaussian conditioning)."""
    if not cond:
        return cov
    n = cov.shape[0]
    cond = list(cond)
    s_cc = cov[np.ix_(cond, cond)]
    s_ac = cov[:, cond]
    adj = s_ac @ np.linalg.pinv(s_cc) @ s_ac.T
    out = cov - adj
    # zero the conditioned rows/cols exactly
    out[cond, :] = 0.0
    out[:, cond] = 0.0
    return (out + out.T) / 2


def gaussian_mutual_information(
    net,
    cov: GaussianCovariance,
    a: Sequence[int],
    b: Sequence[int],
    c: Sequence[int] = (),
) -> float:
    """I(X_a; Y_b | X_c) in bits for jointly Gaussian inputs and unit noise.

    a and c index transmitters, b indexes receivers of `net` (0-based).
    """
    a, b, c = list(a), list(b), list(c)
    if set(a) & set(c):
        raise OverlappingSets("a and c must be disjoint transmitter sets")
    cov.check_powers(net.powers)
    g = np.asarray(net.gains, dtype=float)[b, :]
    s_given_c = _conditional_input_cov(cov.matrix, c)
    s_given_ac = _conditional_input_cov(cov.matrix, sorted(set(a) | set(c)))
    eye = np.eye(len(b))
    num = g @ s_given_c @ g.T + eye
    den = g @ s_given_ac @ g.T + eye
    val = 0.5 * (np.linalg.slogdet(num)[1] - np.linalg.slogdet(den)[1]) / LOG2
    return max(float(val), 0.0)
