"""Command-line front end.

Subcommands: validate, check, region, compare, bounds, verify-lemma,
sumrate.  Reports are JSON (schema-versioned); region data is CSV.  Exit
codes: 0 success / positive verdict, 1 negative verdict (condition FAILS,
regions differ), 2 INCONCLUSIVE, 3 input error.

A fixed --seed makes outputs byte-identical across runs and worker counts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import boundsgen, networks, regimes, regions
from .config import Caps, RunConfig
from .errors import IfnetError, InputError
from .netmodel import DiscreteChannel, GaussianNetwork, load_channel_spec
from .ratepoly import region_compare

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="ifnetlab",
        description="strong-interference condition checks, rate-region sweeps, "
        "and unified outer bounds for single-hop interference networks",
    )
    ap.add_argument("--out", default=None, help="output directory "
                    "(default $IFNETLAB_OUT or ./ifnetlab-out)")
    ap.add_argument("--channel", default=None, help="channel-spec JSON path")
    ap.add_argument("--grid", type=int, default=8, help="simplex grid denominator g")
    ap.add_argument("--aux", default="W=2,U=2,V=2,Z=3",
                    help="auxiliary cardinalities, e.g. W=2,U=2,V=2,Z=3")
    ap.add_argument("--tol", type=float, default=1e-6, help="margin tolerance in bits")
    ap.add_argument("--region-tol", type=float, default=5e-3,
                    help="support-gap tolerance for region comparison")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-alphabet", type=int, default=6)
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", help="parse and validate a channel spec")

    p = sub.add_parser("check", help="evaluate a catalog condition")
    p.add_argument("condition", nargs="?", help="condition id (e.g. C-2CIC, G-2CIC)")
    p.add_argument("--list", action="store_true", help="list catalog ids")

    p = sub.add_parser("region", help="sweep a region template")
    p.add_argument("template", nargs="?", help="template id (e.g. T-CICCM-SW)")
    p.add_argument("--list", action="store_true", help="list template ids")
    p.add_argument("--hrep", action="store_true",
                   help="also write H-rep JSON at the support-maximizing pmfs")

    p = sub.add_parser("compare", help="sweep two templates and compare supports")
    p.add_argument("template_a")
    p.add_argument("template_b")

    p = sub.add_parser("bounds", help="outer-bound templates")
    p.add_argument("action", choices=["enumerate", "replay"])
    p.add_argument("--mu", type=int, default=2)
    p.add_argument("--mode", choices=["TWO_RX", "MULTI_RX"], default="TWO_RX")
    p.add_argument("--id", default=None, help="replay a single named specialization")

    p = sub.add_parser("verify-lemma", help="desk-scale lemma verification")
    p.add_argument("lemma", choices=["1", "2", "3", "4"])
    p.add_argument("--id", default=None, help="condition id providing the inequality")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--mu1", type=int, default=1, help="head length for the Gaussian split")

    p = sub.add_parser("sumrate", help="less-noisy successive-decoding sum rate")
    p.add_argument("kind", choices=["CIC", "BCCR", "GAUSS-CIC"])
    p.add_argument("--waive", action="store_true",
                   help="skip the less-noisy precondition check")
    return ap


def _parse_aux(text: str) -> dict:
    out = {}
    for part in text.split(","):
        if not part:
            continue
        try:
            k, v = part.split("=")
            out[k.strip()] = int(v)
        except ValueError as e:
            raise InputError(f"bad --aux entry {part!r}") from e
    return out


def _config(args) -> RunConfig:
    return RunConfig(
        grid=args.grid,
        tol_bits=args.tol,
        aux_cards=_parse_aux(args.aux),
        workers=max(1, args.workers),
        seed=args.seed,
        caps=Caps(max_alphabet=args.max_alphabet),
    )


def _outdir(args) -> Path:
    out = args.out or os.environ.get("IFNETLAB_OUT") or "ifnetlab-out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _need_channel(args, cfg, kind="any"):
    if not args.channel:
        raise InputError("this command requires --channel <path>")
    topo, ch = load_channel_spec(args.channel, caps=cfg.caps)
    if kind == "discrete" and not isinstance(ch, DiscreteChannel):
        raise InputError("a discrete channel spec is required")
    if kind == "gaussian" and not isinstance(ch, GaussianNetwork):
        raise InputError("a gaussian channel spec is required")
    return topo, ch


def _write_report(outdir: Path, name: str, payload: dict) -> Path:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    path = outdir / name
    path.write_text(json.dumps(payload, sort_keys=True, indent=1, default=float) + "\n")
    return path


def _cmd_validate(args, cfg, outdir):
    topo, ch = _need_channel(args, cfg)
    kind = "discrete" if isinstance(ch, DiscreteChannel) else "gaussian"
    _write_report(outdir, "validate.json", {
        "command": "validate", "channel": args.channel, "kind": kind,
        "k1": topo.k1, "k2": topo.k2, "messages": list(topo.messages),
    })
    print(f"ok: {kind} channel, {topo.k1} tx, {topo.k2} rx")
    return EXIT_OK


def _cmd_check(args, cfg, outdir):
    if args.list:
        for cid in regimes.list_conditions():
            print(cid)
        for gid in regimes.list_gaussian_conditions():
            print(gid)
        return EXIT_OK
    if not args.condition:
        raise InputError("check requires a condition id (or --list)")
    cid = args.condition
    if cid.startswith("G-"):
        _, net = _need_channel(args, cfg, kind="gaussian")
        rep = regimes.gaussian_gain_check(net, cid)
        _write_report(outdir, "check.json", {
            "command": "check", "report": json.loads(rep.to_json()),
        })
        print(f"{cid}: {'holds' if rep.verdict else 'fails'}")
        return EXIT_OK if rep.verdict else EXIT_NEGATIVE
    _, ch = _need_channel(args, cfg, kind="discrete")
    rep = regimes.check_condition(ch, cid, cfg)
    _write_report(outdir, "check.json", {
        "command": "check", "report": json.loads(rep.to_json()),
    })
    print(f"{cid}: {rep.verdict} (worst margin {rep.worst_margin_bits:.6g} bits)")
    return {"HOLDS": EXIT_OK, "FAILS": EXIT_NEGATIVE}.get(rep.verdict, EXIT_INCONCLUSIVE)


def _cmd_region(args, cfg, outdir):
    if args.list:
        for tid in regions.list_templates():
            print(tid)
        return EXIT_OK
    if not args.template:
        raise InputError("region requires a template id (or --list)")
    _, ch = _need_channel(args, cfg, kind="discrete")
    if args.hrep:
        est, pmfs = regions.sweep_template(args.template, ch, cfg, collect_pmfs=True)
        for i, pmf in enumerate(pmfs):
            poly = regions.evaluate_template(args.template, ch, pmf, cfg, validate=False)
            (outdir / f"region_{args.template}_maximizer{i}.json").write_text(
                poly.to_json() + "\n"
            )
    else:
        est = regions.sweep_template(args.template, ch, cfg)
    (outdir / f"region_{args.template}_support.csv").write_text(est.support_csv())
    (outdir / f"region_{args.template}_samples.csv").write_text(est.samples_csv())
    _write_report(outdir, "region.json", {
        "command": "region", "template": args.template, "meta": est.grid_meta,
        "support_max_bits": float(np.max(est.support)),
    })
    print(f"{args.template}: swept {est.grid_meta.get('family_size')} pmfs, "
          f"max support {np.max(est.support):.6g} bits")
    return EXIT_OK


def _cmd_compare(args, cfg, outdir):
    _, ch = _need_channel(args, cfg, kind="discrete")
    ea = regions.sweep_template(args.template_a, ch, cfg)
    eb = regions.sweep_template(args.template_b, ch, cfg)
    rep = region_compare(ea, eb, args.region_tol)
    _write_report(outdir, "compare.json", {
        "command": "compare", "a": args.template_a, "b": args.template_b,
        "verdict": rep.verdict, "max_gap_bits": rep.max_gap,
        "gap_a_minus_b": rep.gap_a_minus_b, "gap_b_minus_a": rep.gap_b_minus_a,
    })
    print(f"{args.template_a} vs {args.template_b}: {rep.verdict} "
          f"(max gap {rep.max_gap:.6g} bits)")
    return EXIT_OK if rep.verdict == "EQUAL" else EXIT_NEGATIVE


def _cmd_bounds(args, cfg, outdir):
    if args.action == "enumerate":
        topo, _ = _need_channel(args, cfg)
        full, reduced = boundsgen.enumerate_bound_templates(
            topo, mu_max=args.mu, mode=args.mode, caps=cfg.caps
        )
        listing = [json.loads(boundsgen.template_to_json(t)) for t in full]
        listing += [json.loads(boundsgen.template_to_json(t)) for t in reduced]
        _write_report(outdir, "bounds_enumerate.json", {
            "command": "bounds enumerate", "mode": args.mode,
            "full_count": len(full), "reduced_count": len(reduced),
            "templates": listing,
        })
        print(f"{len(full)} ladder templates, {len(reduced)} reduced forms")
        return EXIT_OK
    # replay
    topos = {
        "cic_cm": networks.cic_cm_topology(),
        "bccr": networks.bccr_topology(),
        "cic3": networks.cic_topology(3),
    }
    ids = [args.id] if args.id else sorted(boundsgen.REPLAYS)
    results, bad = [], 0
    for rid in ids:
        if rid not in boundsgen.REPLAYS:
            raise InputError(f"unknown replay id {rid!r}")
        rep = boundsgen.REPLAYS[rid]
        out = boundsgen.run_replay(rid, topos[rep.topology_builder])
        ok = out.rendered == rep.expected
        bad += not ok
        results.append({"id": rid, "rendered": out.rendered,
                        "expected": rep.expected, "match": ok,
                        "audit": out.audit})
    _write_report(outdir, "bounds_replay.json", {
        "command": "bounds replay", "results": results, "mismatches": bad,
    })
    print(f"replayed {len(results)} specializations, {bad} mismatches")
    return EXIT_OK if bad == 0 else EXIT_NEGATIVE


def _cmd_verify_lemma(args, cfg, outdir):
    lemma = args.lemma
    if lemma == "2":
        _, net = _need_channel(args, cfg, kind="gaussian")
        chk = regimes.gaussian_gain_check(net, "G-LEMMA2", mu1=args.mu1)
        if not chk.verdict:
            _write_report(outdir, "verify_lemma.json", {
                "command": "verify-lemma 2", "gain_check": False,
            })
            print("proportionality condition fails: no witness construction")
            return EXIT_NEGATIVE
        wit = regimes.lemma2_witness(net, args.mu1, chk.witnesses["alpha"])
        ok = wit.mean_residual <= 1e-12 and wit.var_residual <= 1e-12
        _write_report(outdir, "verify_lemma.json", {
            "command": "verify-lemma 2", "alpha": wit.alpha,
            "noise_coeff": wit.noise_coeff, "tail_coeffs": list(wit.tail_coeffs),
            "mean_residual": wit.mean_residual, "var_residual": wit.var_residual,
        })
        print(f"witness reconstruction {'exact' if ok else 'INVALID'} "
              f"(alpha={wit.alpha:.6g})")
        return EXIT_OK if ok else EXIT_NEGATIVE
    _, ch = _need_channel(args, cfg, kind="discrete")
    cid = args.id or ("C-CIC-LN" if lemma == "4" else "C-2CIC")
    if lemma == "1":
        rep = regimes.verify_extension_lemma(ch, cid, n_samples=args.samples, cfg=cfg)
    elif lemma == "3":
        rep = regimes.verify_two_letter(ch, cid, n_samples=args.samples, cfg=cfg)
    else:
        rep = regimes.verify_lemma4_extension(ch, cid, n_samples=args.samples, cfg=cfg)
    _write_report(outdir, "verify_lemma.json", {
        "command": f"verify-lemma {lemma}", "condition": cid,
        "samples": rep.samples, "max_violation_bits": rep.max_violation_bits,
    })
    print(f"lemma {lemma} on {cid}: max violation "
          f"{rep.max_violation_bits:.3g} bits over {rep.samples} samples")
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


def _cmd_sumrate(args, cfg, outdir):
    kind = args.kind
    if kind == "GAUSS-CIC":
        _, net = _need_channel(args, cfg, kind="gaussian")
        res = regions.lessnoisy_sumrate(kind, net, cfg, waive=args.waive)
        _write_report(outdir, "sumrate.json", {
            "command": "sumrate", "kind": kind, "value_bits": res.value,
            "maximizer": res.maximizer, "note": res.note,
        })
    else:
        _, ch = _need_channel(args, cfg, kind="discrete")
        res = regions.lessnoisy_sumrate(kind, ch, cfg, waive=args.waive)
        maxi = None
        if res.maximizer is not None:
            maxi = {
                "variables": list(res.maximizer.variables),
                "table": [float(x) for x in np.ravel(res.maximizer.table)],
            }
        _write_report(outdir, "sumrate.json", {
            "command": "sumrate", "kind": kind, "value_bits": res.value,
            "maximizer_pmf": maxi,
        })
    print(f"{kind} sum rate: {res.value:.6g} bits")
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "check": _cmd_check,
    "region": _cmd_region,
    "compare": _cmd_compare,
    "bounds": _cmd_bounds,
    "verify-lemma": _cmd_verify_lemma,
    "sumrate": _cmd_sumrate,
}


def run(argv) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code not in (0, None) else 0
    try:
        cfg = _config(args)
        outdir = _outdir(args)
        return _COMMANDS[args.command](args, cfg, outdir)
    except IfnetError as e:
        print(f"error[{e.code}]: {e}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as e:
        print(f"error[IO]: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
