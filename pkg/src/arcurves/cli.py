"""Command line front end: verification suites, exploration, reports.

Rings come from flat key=value config files, every report embeds the
config hash and the degree windows it used, and identical inputs give
byte-identical JSON.  Exit codes: 0 pass, 1 verification failure,
2 input error, 3 certification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys

from .arengine import (double_push_report, e_avg, explore_component,
                       gamma_for, push, verify_main_theorem,
                       verify_syz_gamma)
from .branches import factor_hypersurface, gamma_prime
from .errors import (ArcError, CertificationError, InputError,
                     VerificationError)
from .fields import field_from_string
from .modmat import decompose, hom_graded, mf_from_ideal, rank_vector
from .quiver import to_dot, to_json
from .ring import HypersurfaceRing, poly_from_string
from .traceoracle import is_integral, min_t_valuation, stably_zero_trace, trace_Q
from .modmat import stably_zero_bruteforce

VERIFY_SUITES = ("main-theorem", "syz-gamma", "trace-oracle", "section7")


# ----------------------------------------------------------------------
# config parsing


def parse_config(text: str):
    """Flat key=value lines; '#' comments; returns (dict, key->line map)."""
    data: dict = {}
    lines: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError("line %d: expected key = value" % lineno)
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not key or not val:
            raise InputError("line %d: empty key or value" % lineno)
        if key in data:
            raise InputError("line %d: duplicate key %r" % (lineno, key))
        data[key] = val
        lines[key] = lineno
    return data, lines


def _intval(data, lines, key, optional=False):
    if key not in data:
        if optional:
            return None
        raise InputError("config missing key %r" % key)
    try:
        return int(data[key])
    except ValueError:
        raise InputError("line %d: %s must be an integer"
                         % (lines[key], key)) from None


def ring_from_config(text: str) -> HypersurfaceRing:
    """Build and validate a ring from config text."""
    data, lines = parse_config(text)
    known = {"field", "p", "q", "b", "f", "m", "n"}
    for key in data:
        if key not in known:
            raise InputError("line %d: unknown key %r" % (lines[key], key))
    field_name = data.get("field", "Q")
    try:
        K = field_from_string(field_name)
    except ValueError as e:
        raise InputError("line %d: %s" % (lines["field"], e)) from None
    p = _intval(data, lines, "p")
    q = _intval(data, lines, "q")
    for key in ("b", "f"):
        if key not in data:
            raise InputError("config missing key %r" % key)
    try:
        b = K(data["b"])
    except (TypeError, ValueError) as e:
        raise InputError("line %d: %s" % (lines["b"], e)) from None
    f = poly_from_string(K, q, p, data["f"])
    m = _intval(data, lines, "m", optional=True)
    n = _intval(data, lines, "n", optional=True)
    return HypersurfaceRing(K, p=p, q=q, b=b, f=f, m=m, n=n)


def _config_payload(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    sha = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return text, sha


def _ideal_module(ring):
    if ring.m is None or ring.n is None:
        raise InputError("config missing key 'm' or 'n' for the ideal module")
    return mf_from_ideal(ring).cok(label="I")


# ----------------------------------------------------------------------
# commands


def cmd_ring_info(ring, args) -> dict:
    report = {"ring": ring.describe(), "branches": [], "windows": {}}
    if ring.is_reduced:
        branch_list = factor_hypersurface(ring)
    else:
        from .branches import singular_branch
        branch_list = [singular_branch(ring)]
    for b in branch_list:
        entry = b.describe()
        entry["gamma_prime"] = gamma_prime(b).to_string()
        report["branches"].append(entry)
    gd = gamma_for(ring)
    report["gamma_datum"] = gd.describe()
    report["windows"]["z_search"] = (gd.branch.conductor * gd.branch.scale
                                     + ring.deg_g)
    return report


def cmd_verify_main_theorem(ring, args) -> dict:
    I = _ideal_module(ring)
    gd = gamma_for(ring)
    rep = verify_main_theorem(I, gd)
    rep["windows"] = {"socle_products": "nonunit End generators"}
    return rep


def cmd_verify_syz_gamma(ring, args) -> dict:
    I = _ideal_module(ring)
    gd = gamma_for(ring)
    reports = [verify_syz_gamma(I, gd)]
    seq = push(I, gd)
    reports.append(verify_syz_gamma(seq.middle, gd))
    return {"modules": reports,
            "windows": {},
            "pass": all(r["pass"] for r in reports)}


def _endo_corpus(ring):
    """The sweep corpus: I, its syzygy, one push, and double-push parts."""
    I = _ideal_module(ring)
    gd = gamma_for(ring)
    seq = push(I, gd)
    seq2 = push(seq.middle, gd)
    parts, _ = decompose(seq2.middle)
    corpus = [I, I.syz(), seq.middle]
    corpus.extend(parts)
    return corpus, gd


def _is_unit_endo(h) -> bool:
    """Degree-zero endomorphisms are units exactly when invertible mod m."""
    if h.degree != 0:
        return False
    from .linalg import rank_dense
    M = h.source
    K = M.ring.field
    S = [[h.H.entries[i][j].coeff(0, 0)
          if M.gens[i] == M.gens[j] else K.zero
          for j in range(len(M.gens))] for i in range(len(M.gens))]
    return rank_dense(S, K) == len(M.gens)


def cmd_verify_trace_oracle(ring, args) -> dict:
    window = args.window if args.window is not None else ring.deg_g
    corpus, _ = _endo_corpus(ring)
    branches = factor_hypersurface(ring)
    tested = 0
    disagreements = []
    nonintegral = []
    nonradical = []
    for M in corpus:
        for d in range(-window, window + 1):
            for h in hom_graded(M, M, d).basis:
                tested += 1
                by_trace = stably_zero_trace(h, branches)
                by_lift = stably_zero_bruteforce(h)
                where = {"module": M.label or str(M.gens), "degree": d}
                if by_trace != by_lift:
                    disagreements.append(
                        dict(where, trace=by_trace, lifting=by_lift))
                tr = trace_Q(h, branches)
                if not is_integral(tr, branches):
                    nonintegral.append(where)
                val = min_t_valuation(tr, branches)
                if not _is_unit_endo(h) and val is not None and val < 1:
                    nonradical.append(dict(where, valuation=val))
    return {
        "modules": len(corpus),
        "endomorphisms": tested,
        "disagreements": disagreements,
        "nonintegral_traces": nonintegral,
        "nonradical_valuations": nonradical,
        "windows": {"endomorphism_degree": [-window, window]},
        "pass": not (disagreements or nonintegral or nonradical),
    }


def cmd_verify_section7(ring, args) -> dict:
    rep = double_push_report(ring)
    rep["windows"] = {"hilbert_additivity": 3 * ring.deg_g}
    return rep


def cmd_explore(ring, args) -> dict:
    I = _ideal_module(ring)
    gd = gamma_for(ring)
    rep = explore_component(I, gd, depth=args.depth)
    doc = {
        "depth": args.depth,
        "modules": rep["modules"],
        "middle_parts": rep["middle_parts"],
        "sequences": rep["sequences"],
        "classification": rep["classification"],
        "subadditive": rep["subadditive"],
        "quiver": json.loads(to_json(rep["quiver"])),
        "orbit_quiver": json.loads(to_json(rep["orbit_quiver"])),
        "windows": {"depth": args.depth},
    }
    if args.format == "dot":
        doc["dot"] = to_dot(rep["quiver"])
    return doc


def cmd_push(ring, args) -> dict:
    I = _ideal_module(ring)
    gd = gamma_for(ring)
    seq = push(I, gd)
    branches = factor_hypersurface(ring) if ring.is_reduced else [gd.branch]
    parts, frees = decompose(seq.middle,
                             rng=random.Random(args.resolved_seed))
    return {
        "sequence": seq.describe(),
        "ranks": {
            "left": rank_vector(seq.left, branches),
            "middle": rank_vector(seq.middle, branches),
            "right": rank_vector(seq.right, branches),
        },
        "e_avg": {"left": str(e_avg(seq.left)),
                  "middle": str(e_avg(seq.middle))} if ring.is_reduced else {},
        "middle_summands": [list(p.gens) for p in parts],
        "middle_free_summands": frees,
        "windows": {"hilbert_additivity": 3 * ring.deg_g},
    }


def cmd_decompose(ring, args) -> dict:
    I = _ideal_module(ring)
    gd = gamma_for(ring)
    seq = push(I, gd)
    parts, frees = decompose(seq.middle,
                             rng=random.Random(args.resolved_seed))
    return {
        "module": seq.middle.describe(),
        "parts": [p.describe() for p in parts],
        "free_summands": frees,
        "windows": {},
    }


# ----------------------------------------------------------------------
# plumbing


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="arcurves",
        description="Exact sequence toolkit for graded hypersurface curves.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="path to a key=value ring config")
        p.add_argument("--seed", type=int, default=None,
                       help="randomization seed (fallback: AR_CURVE_SEED, 0)")
        p.add_argument("--window", type=int, default=None,
                       help="degree window override where applicable")
        p.add_argument("--out", default=None,
                       help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "dot"), default="json")

    common(sub.add_parser("ring-info", help="branches, semigroups, gamma"))
    pv = sub.add_parser("verify", help="run a named verification suite")
    pv.add_argument("which", choices=VERIFY_SUITES)
    common(pv)
    pe = sub.add_parser("explore", help="walk a component from the ideal")
    common(pe)
    pe.add_argument("--depth", type=int, default=2)
    common(sub.add_parser("push", help="one almost split sequence"))
    common(sub.add_parser("decompose", help="split the middle term"))
    return ap


def _dispatch(ring, args):
    if args.command == "ring-info":
        return cmd_ring_info(ring, args)
    if args.command == "verify":
        return {
            "main-theorem": cmd_verify_main_theorem,
            "syz-gamma": cmd_verify_syz_gamma,
            "trace-oracle": cmd_verify_trace_oracle,
            "section7": cmd_verify_section7,
        }[args.which](ring, args)
    if args.command == "explore":
        return cmd_explore(ring, args)
    if args.command == "push":
        return cmd_push(ring, args)
    return cmd_decompose(ring, args)


def _render(doc, args) -> str:
    if args.format == "dot" and "dot" in doc:
        return doc["dot"]
    return json.dumps(doc, sort_keys=True, separators=(",", ":"),
                      default=str) + "\n"


def _write(out, text) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.seed is None:
        args.resolved_seed = int(os.environ.get("AR_CURVE_SEED", "0"))
    else:
        args.resolved_seed = args.seed
    try:
        text, sha = _config_payload(args.config)
        ring = ring_from_config(text)
        doc = _dispatch(ring, args)
        doc["config_sha256"] = sha
        doc["seed"] = args.resolved_seed
    except OSError as e:
        sys.stderr.write(json.dumps({"error": "input", "message": str(e)},
                                    sort_keys=True) + "\n")
        return 2
    except InputError as e:
        sys.stderr.write(json.dumps({"error": "input", "message": str(e)},
                                    sort_keys=True) + "\n")
        return 2
    except VerificationError as e:
        sys.stderr.write(json.dumps(
            {"error": "verification", "message": str(e)},
            sort_keys=True) + "\n")
        return 1
    except CertificationError as e:
        sys.stderr.write(json.dumps(
            {"error": "certification", "message": str(e)},
            sort_keys=True) + "\n")
        return 3
    _write(args.out, _render(doc, args))
    return 0 if doc.get("pass", True) else 1


if __name__ == "__main__":
    sys.exit(main())
