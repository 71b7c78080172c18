"""Batch command line frontend.

Five commands compute reports and write them as JSON (default) or CSV:

    limit      rigorous enclosure of a limiting proportion
    series     coefficient table of a generating function
    enumerate  build a group table and report sizes and proportions
    verify     run a named verification suite, exit 1 on failure
    probe      generation statistics for the shipped permutation groups
    presets    print the packaged sieved-set parameter table

Every JSON report is one object:

    {
      "schema": "classprop-report-1",
      "version": <toolkit version>,
      "config": <full echo of the parsed run configuration>,
      "ok": <bool>,
      "result": <command specific payload>
    }

Exact rationals appear as "p/q" strings, never as floats; keys are sorted,
so a fixed (config, seed) pair produces byte-identical output.  CSV output
is offered for the tabular commands (limit, series, enumerate) with the
same rational rendering.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
cap exceeded.  The group-table cache directory is taken from the
CLASSPROP_CACHE environment variable when set.
"""

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from . import __version__
from .limits import (
    DEFAULT_TOL,
    LimitFamily,
    bound_suite,
    limit_from_series,
    limit_value,
    q_infinity_limit,
)
from .matgroup import (
    ActionSpec,
    ResourceCapExceeded,
    DEFAULT_GROUP_CAP,
    build_group,
    membership_sets,
    tau_membership,
)
from .series import gl_no_small_factor_series, sl_coset_series
from .stats import (
    coset_average_fixed_points,
    expectation_inequality,
    fixed_sets,
    fpr_bound_check,
    generation_probe,
    inverse_transpose_identity_check,
    orthogonal_reflection_identity_check,
    proportion,
    psl2,
    three_halves_generation,
)

SCHEMA = "classprop-report-1"
EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

_LIMIT_TAGS = {
    "gl": "GL",
    "su": "SU",
    "sp": "Sp",
    "sp-odd": "Sp_odd",
    "sp-even": "Sp_even",
    "o": "O",
    "o-half": "O_half",
}
_GROUP_FAMILIES = ["GL", "SL", "Sp", "SU", "GU", "O+", "O-", "O"]

VERIFY_SUITES = (
    "exactness-bridge",
    "bounds",
    "identities",
    "inverse-transpose",
    "orthogonal-reflection",
    "expectation",
    "fpr",
    "coset-average",
)


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters of one CLI invocation, echoed into every report."""

    command: str
    family: str = None
    n: int = None
    q: int = None
    t: int = None
    coset: object = None
    method: str = None
    trials: int = None
    seed: int = None
    order: int = None
    tol: str = None
    out: str = None
    format: str = "json"
    suite: str = None
    k: int = None
    cap: int = None
    group: str = None
    x: int = None
    x_order: int = None
    three_halves: bool = False
    q_list: str = None
    t_list: str = None


# ---------------------------------------------------------------------------
# Rendering.

def _jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_jsonable(v) for v in obj)
    return obj


def _cell(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return value


def _render(cfg, ok, result, rows=None):
    if cfg.format == "csv":
        if rows is None:
            raise ValueError(f"{cfg.command} reports are JSON only")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()
    payload = {
        "schema": SCHEMA,
        "version": __version__,
        "config": _jsonable(dataclasses.asdict(cfg)),
        "ok": ok,
        "result": _jsonable(result),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write(cfg, text):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_int_list(text, fallback):
    if text is None:
        return list(fallback)
    return [int(part) for part in text.split(",") if part.strip()]


def _round_outward(lo, hi, slack):
    """Widen [lo, hi] to decimal-denominator endpoints, moving each end by
    less than slack.  Exact enclosures carry huge numerators; this keeps the
    report readable while staying a valid enclosure."""
    scale = 1
    while Fraction(1, scale) > slack:
        scale *= 10
    lo2 = Fraction(math.floor(lo * scale), scale)
    hi2 = Fraction(math.ceil(hi * scale), scale)
    return lo2, hi2


def _coset_arg(value):
    if value is None or value in ("tau", "S", "O"):
        return value
    return int(value)


# ---------------------------------------------------------------------------
# Commands.

def cmd_limit(cfg):
    fam = LimitFamily(_LIMIT_TAGS[cfg.family], cfg.q, cfg.t)
    tol = Fraction(cfg.tol) if cfg.tol else DEFAULT_TOL
    enc = limit_value(fam, tol / 2)
    lo, hi = _round_outward(enc.lo, enc.hi, tol / 4)
    base = fam.tag.split("_")[0] if fam.tag != "O_half" else "O"
    reference = q_infinity_limit(base, cfg.t)
    result = {
        "family": fam.tag,
        "q": cfg.q,
        "t": cfg.t,
        "tol": Fraction(tol),
        "lo": lo,
        "hi": hi,
        "width": hi - lo,
        "midpoint": float((lo + hi) / 2),
        "q_infinity": reference,
    }
    rows = [
        ["family", "q", "t", "lo", "hi", "width", "midpoint", "q_infinity"],
        [fam.tag, cfg.q, cfg.t, lo, hi, hi - lo,
         float((lo + hi) / 2), reference],
    ]
    return True, result, rows


def cmd_series(cfg):
    if cfg.family == "gl":
        s = gl_no_small_factor_series(cfg.q, cfg.t, cfg.order)
    else:
        mu = cfg.coset if cfg.coset is not None else 0
        if not isinstance(mu, int):
            raise ValueError("series cosets are determinant labels (integers)")
        s = sl_coset_series(cfg.q, cfg.t, mu, cfg.order)
    coeffs = [s.coeff(n) for n in range(cfg.order + 1)]
    tail = limit_from_series(s)
    result = {
        "family": cfg.family,
        "q": cfg.q,
        "t": cfg.t,
        "coset": cfg.coset,
        "order": cfg.order,
        "coefficients": coeffs,
        "last": coeffs[-1],
        "last_float": float(coeffs[-1]),
        "tail_gap": tail.gap,
    }
    rows = [["n", "coefficient"]]
    rows += [[n, c] for n, c in enumerate(coeffs)]
    return True, result, rows


def cmd_enumerate(cfg):
    cap = cfg.cap or DEFAULT_GROUP_CAP
    table = build_group(cfg.family, cfg.n, cfg.q, cap=cap)
    result = {
        "family": cfg.family,
        "n": cfg.n,
        "q": cfg.q,
        "order": table.order(),
        "generators": len(table.gens),
        "labels": sorted(table.label_values()),
        "coset_sizes": {
            str(lab): len(table.coset_indices(lab))
            for lab in sorted(table.label_values())
        },
    }
    rows = [["key", "value"],
            ["family", cfg.family], ["n", cfg.n], ["q", cfg.q],
            ["order", table.order()]]
    if cfg.t is not None:
        if cfg.coset == "tau":
            members = tau_membership(table, cfg.t)
            denom = table.order()
        else:
            members = membership_sets(table, cfg.t, cfg.coset)
            if cfg.coset in ("S", "O"):
                denom = table.order() // 2
            elif cfg.coset is None:
                denom = table.order()
            else:
                denom = len(table.coset_indices(cfg.coset))
        value = Fraction(len(members), denom)
        result.update({"t": cfg.t, "coset": cfg.coset,
                       "members": len(members), "proportion": value})
        rows += [["t", cfg.t], ["coset", cfg.coset],
                 ["members", len(members)], ["proportion", value]]
    return True, result, rows


# --- verify suites ---------------------------------------------------------

def _suite_exactness_bridge(cfg):
    if cfg.q is not None and cfg.n is not None and cfg.t is not None:
        grid = [(cfg.q, cfg.n, cfg.t)]
    else:
        grid = [(2, n, t) for n in (2, 3, 4) for t in (1, 2, 3)]
        grid += [(3, n, t) for n in (2, 3) for t in (1, 2)]
    cases = []
    failures = []
    for q, n, t in grid:
        for coset in [None] + list(range(q - 1)):
            via_series = proportion(("GL", n, q), t, coset=coset, method="series")
            via_enum = proportion(("GL", n, q), t, coset=coset)
            equal = via_series.value == via_enum.value
            record = {"q": q, "n": n, "t": t, "coset": coset,
                      "series": via_series.value, "enumeration": via_enum.value,
                      "equal": equal}
            cases.append(record)
            if not equal:
                failures.append(record)
    return not failures, {"cases": cases, "failures": failures}


def _suite_bounds(cfg):
    qs = _parse_int_list(cfg.q_list, (2, 3, 4, 5, 7, 8, 9))
    ts = _parse_int_list(cfg.t_list, (1, 2, 3, 4))
    tol = Fraction(cfg.tol) if cfg.tol else DEFAULT_TOL
    report = bound_suite(qs, ts, tol)
    # exact endpoints have huge numerators; widen them slightly for display
    for entry in report["entries"]:
        lo, hi = _round_outward(entry["lo"], entry["hi"], tol)
        entry.update(lo=lo, hi=hi, margin_to_1=1 - hi, margin_to_0=lo)
    return report["all_pass"], report


def _suite_inverse_transpose(cfg):
    n = cfg.n if cfg.n is not None else 3
    q = cfg.q if cfg.q is not None else 2
    t = cfg.t if cfg.t is not None else 1
    ok = inverse_transpose_identity_check(n, q, t)
    record = {"n": n, "q": q, "t": t, "holds": ok}
    return ok, {"cases": [record], "failures": [] if ok else [record]}


def _suite_orthogonal_reflection(cfg):
    n = cfg.n if cfg.n is not None else 5
    q = cfg.q if cfg.q is not None else 3
    t = cfg.t if cfg.t is not None else 1
    ok = orthogonal_reflection_identity_check(n, q, t)
    record = {"n": n, "q": q, "t": t, "holds": ok}
    return ok, {"cases": [record], "failures": [] if ok else [record]}


def _suite_identities(cfg):
    cases = []
    failures = []
    for n, q, t in [(2, 2, 1), (3, 2, 1), (3, 3, 1)]:
        ok = inverse_transpose_identity_check(n, q, t)
        record = {"identity": "inverse-transpose", "n": n, "q": q, "t": t,
                  "holds": ok}
        cases.append(record)
        if not ok:
            failures.append(record)
    for n, q, t in [(5, 3, 1)]:
        ok = orthogonal_reflection_identity_check(n, q, t)
        record = {"identity": "orthogonal-reflection", "n": n, "q": q, "t": t,
                  "holds": ok}
        cases.append(record)
        if not ok:
            failures.append(record)
    return not failures, {"cases": cases, "failures": failures}


def _suite_expectation(cfg):
    family = cfg.family or "GL"
    n = cfg.n if cfg.n is not None else 3
    q = cfg.q if cfg.q is not None else 2
    t = cfg.t if cfg.t is not None else 1
    k = cfg.k if cfg.k is not None else 1
    table = build_group(family, n, q, cap=cfg.cap or DEFAULT_GROUP_CAP)
    members = membership_sets(table, t, cfg.coset)
    if not members:
        raise ValueError("the sieved subset is empty at these parameters")
    spec = ActionSpec("subspace", k)
    mf = fixed_sets(table, members, spec)
    failures = []
    worst = None
    for x in range(len(table.elements)):
        rec = expectation_inequality(table, x, members, spec, member_fixed=mf)
        slack = rec["rhs"] - rec["lhs"]
        if worst is None or slack < worst:
            worst = slack
        if not rec["ok"]:
            failures.append({"x": x, **rec})
    summary = {"family": family, "n": n, "q": q, "t": t, "k": k,
               "members": len(members), "checked": len(table.elements),
               "min_slack": worst, "failures": failures}
    return not failures, summary


def _suite_fpr(cfg):
    family = cfg.family or "GL"
    n = cfg.n if cfg.n is not None else 3
    q = cfg.q if cfg.q is not None else 2
    table = build_group(family, n, q, cap=cfg.cap or DEFAULT_GROUP_CAP)
    reports = fpr_bound_check(table, kmax=cfg.k)
    bad = [r for r in reports if r.violations]
    return not bad, {"reports": reports, "failures": bad}


def _suite_coset_average(cfg):
    family = cfg.family or "GL"
    n = cfg.n if cfg.n is not None else 3
    q = cfg.q if cfg.q is not None else 2
    k = cfg.k if cfg.k is not None else 1
    table = build_group(family, n, q, cap=cfg.cap or DEFAULT_GROUP_CAP)
    rep = coset_average_fixed_points(table, ActionSpec("subspace", k),
                                     coset=cfg.coset)
    values = rep.orbit_values if rep.orbit_values is not None else (rep.value,)
    ok = all(v == 1 for v in values)
    record = {"family": family, "n": n, "q": q, "k": k, "coset": cfg.coset,
              "value": rep.value, "orbit_values": rep.orbit_values,
              "transitive": rep.transitive}
    return ok, {"cases": [record], "failures": [] if ok else [record]}


_SUITES = {
    "exactness-bridge": _suite_exactness_bridge,
    "bounds": _suite_bounds,
    "identities": _suite_identities,
    "inverse-transpose": _suite_inverse_transpose,
    "orthogonal-reflection": _suite_orthogonal_reflection,
    "expectation": _suite_expectation,
    "fpr": _suite_fpr,
    "coset-average": _suite_coset_average,
}


def cmd_verify(cfg):
    ok, detail = _SUITES[cfg.suite](cfg)
    result = {"suite": cfg.suite, "pass": ok, **detail}
    return ok, result, None


def cmd_probe(cfg):
    if not cfg.group or not cfg.group.startswith("psl2-"):
        raise ValueError("probe targets are named psl2-<prime>, e.g. psl2-7")
    p = int(cfg.group.split("-", 1)[1])
    group = psl2(p)
    if cfg.three_halves:
        records = three_halves_generation(group)
        ok = all(rec["proportion"] > 0 for rec in records)
        result = {"group": group.name, "order": group.order(),
                  "classes": records, "all_positive": ok}
        return ok, result, None
    if cfg.x is not None:
        x = cfg.x
    elif cfg.x_order is not None:
        x = None
        for cls in group.conjugacy_classes():
            rep = cls[0]
            if group.element_order(group.elements[rep]) == cfg.x_order:
                x = rep
                break
        if x is None:
            raise ValueError(f"no element of order {cfg.x_order}")
    else:
        raise ValueError("give --x, --x-order, or --three-halves")
    trials = cfg.trials if cfg.trials is not None else "exhaustive"
    report = generation_probe(group, x, trials=trials, seed=cfg.seed)
    return True, {"group": group.name, "order": group.order(),
                  "report": report}, None


def cmd_presets(cfg):
    text = resources.files("classprop").joinpath("presets.json").read_text()
    return True, json.loads(text), None


# ---------------------------------------------------------------------------
# Argument parsing.

def build_parser():
    parser = argparse.ArgumentParser(
        prog="classprop",
        description="Proportions of classical group elements whose "
                    "characteristic polynomial has no small degree factor.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("limit", help="rigorous enclosure of a limit")
    p.add_argument("--family", required=True, choices=sorted(_LIMIT_TAGS))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--tol", help="enclosure width target, e.g. 1e-6")
    common(p)

    p = sub.add_parser("series", help="coefficient table of a series")
    p.add_argument("--family", required=True, choices=("gl", "sl"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--coset", help="determinant label for sl")
    p.add_argument("--order", type=int, required=True)
    common(p)

    p = sub.add_parser("enumerate", help="build a group table")
    p.add_argument("--family", required=True, choices=_GROUP_FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--coset", help="label, or tau / S / O")
    p.add_argument("--cap", type=int, help="element count cap")
    common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True, choices=VERIFY_SUITES)
    p.add_argument("--family", choices=_GROUP_FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--coset", help="label, or S / O")
    p.add_argument("--q-list", help="comma separated q grid (bounds)")
    p.add_argument("--t-list", help="comma separated t grid (bounds)")
    p.add_argument("--tol")
    p.add_argument("--cap", type=int)
    common(p)

    p = sub.add_parser("probe", help="generation statistics")
    p.add_argument("--group", required=True, help="psl2-<prime>")
    p.add_argument("--x", type=int, help="element index")
    p.add_argument("--x-order", type=int, help="pick a class of this order")
    p.add_argument("--three-halves", action="store_true",
                   help="exhaustive check over every nontrivial class")
    p.add_argument("--trials", type=int, help="sample count (default exhaustive)")
    p.add_argument("--seed", type=int)
    common(p)

    p = sub.add_parser("presets", help="print the sieved-set parameter table")
    common(p)

    return parser


_COMMANDS = {
    "limit": cmd_limit,
    "series": cmd_series,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "probe": cmd_probe,
    "presets": cmd_presets,
}


def _config_from_args(args):
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    data = {k: v for k, v in vars(args).items() if k in fields}
    if data.get("coset") is not None:
        data["coset"] = _coset_arg(data["coset"])
    return RunConfig(**data)


def main(argv=None):
    args = build_parser().parse_args(argv)
    cfg = _config_from_args(args)
    try:
        ok, result, rows = _COMMANDS[cfg.command](cfg)
        text = _render(cfg, ok, result, rows)
    except ResourceCapExceeded as exc:
        print(f"classprop: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"classprop: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write(cfg, text)
    if not ok:
        failures = result.get("failures") if isinstance(result, dict) else None
        if failures is not None:
            print(json.dumps(_jsonable(failures), sort_keys=True, indent=2),
                  file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
