"""``pintz-forge`` command line.

Every report is a JSON object ``{"manifest": ..., "result": ...}`` (or a CSV
projection of the result). Parameters resolve as flags > ``--config`` file >
``PINTZ_*`` environment > built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import difflib
import io
import json
import logging
import math
import os
import sys
import time
import zlib
from dataclasses import asdict, dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .errors import (ConfigParseError, InvalidParams, NoExclusion, PintzError,
                     UsageError)
from .extreal import ExtReal
from .inference import (DEFAULT_C0, ExclusionQuery, best_c0, c0_grid, exclusion_check,
                        exclusion_region_beta, exclusion_region_gamma, pintz87_bound,
                        zeta_mertens_params)
from .mobius import (DEFAULT_SEGMENT, load_checkpoint, mean_abs, mertens_scan,
                     scan_record)
from .theorem import (QUAD_TOL, TheoremParams, lower_bound, mean_lower_constant)
from .zeta_bounds import GrowthBound, growth_bound_F, growth_bound_G, verify_lemma_chain

ENV_PREFIX = "PINTZ_"

# ---------------------------------------------------------------------------
# value parsing


def _integer(text: str) -> int:
    """Integer, also written as 1e8 or 100000000.0."""
    try:
        v = Decimal(str(text).strip())
    except InvalidOperation:
        raise ValueError(f"not an integer: {text!r}") from None
    if v != v.to_integral_value():
        raise ValueError(f"not an integer: {text!r}")
    return int(v)


def _real(text: str) -> float:
    v = float(str(text).strip())
    if not math.isfinite(v):
        raise ValueError(f"not a finite number: {text!r}")
    return v


def _ext(text: str) -> ExtReal:
    return ExtReal.parse(str(text))


def _flag(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _choice(*options: str) -> Callable[[str], str]:
    def conv(text: str) -> str:
        t = str(text).strip()
        if t not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {t!r}")
        return t
    return conv


@dataclass(frozen=True)
class Opt:
    dest: str
    conv: Callable[[str], Any]
    default: Any = None
    help: str = ""
    switch: bool = False  # store_true on the command line

    @property
    def flag(self) -> str:
        return "--" + self.dest.replace("_", "-")


COMMON = [
    Opt("emit", _choice("json", "csv"), "json", "output format"),
    Opt("no_timing", _flag, False, "record wall_time as 0 for byte-identical reports", switch=True),
]

MERTENS = [
    Opt("limit", _integer, None, "scan n = 1..LIMIT"),
    Opt("segment_size", _integer, DEFAULT_SEGMENT, "sieve segment length"),
    Opt("threads", _integer, 1, "worker processes"),
    Opt("verify_d", _real, None, "report n with |M(n)| > D sqrt(n)"),
    Opt("checkpoint", str, None, "JSON-lines checkpoint file (resumed if present)"),
    Opt("checkpoint_dir", str, None, "directory for an automatically named checkpoint"),
]

THEOREM = [
    Opt("y", _ext, None, "Y (decimal or exp:LOGY)"),
    Opt("beta0", _real, None, "real part of the zero"),
    Opt("gamma0", _ext, None, "imaginary part of the zero (decimal or exp:LOG)"),
    Opt("c0", _real, DEFAULT_C0, "analyticity offset, 0 < c0 < beta0"),
    Opt("preset", _choice("zeta-mertens", "generic"), None, "parameter preset"),
    Opt("ca", _real, None, "generic: c_A in |A(x)| <= c_A x^C"),
    Opt("cc", _real, None, "generic: C in |A(x)| <= c_A x^C"),
    Opt("cf", _real, None, "generic: growth constant of F"),
    Opt("bf", _real, None, "generic: growth exponent of F"),
    Opt("cg", _real, None, "generic: growth constant of G"),
    Opt("bg", _real, None, "generic: growth exponent of G"),
    Opt("f_rho0", _ext, None, "generic: |F(rho0)|"),
    Opt("tol", _real, QUAD_TOL, "relative quadrature tolerance"),
    Opt("extra_log_factor", _flag, False, "multiply the tail term by log Yt", switch=True),
    Opt("mean_constant", _flag, False, "also report mean_lower_constant at Y", switch=True),
]

INFER = [
    Opt("y", _ext, None, "Y (decimal or exp:LOGY)"),
    Opt("d", _real, None, "pointwise constant: |M(x)| <= d sqrt(x) on [1, Y]"),
    Opt("beta0", _real, None, "real part of the zero"),
    Opt("gamma0", _ext, None, "imaginary part of the zero (decimal or exp:LOG)"),
    Opt("c0", _real, DEFAULT_C0, "analyticity offset"),
    Opt("optimize_c0", _flag, False, "pick c0 from a 16-point grid", switch=True),
    Opt("tol", _real, None, "bisection tolerance (default 1e-3 on ln gamma, 1e-4 on beta)"),
]

INFER_REQUIRED = {
    "check": ("y", "d", "beta0", "gamma0"),
    "max-gamma": ("y", "d", "beta0"),
    "min-beta": ("y", "d", "gamma0"),
    "pintz87": ("y", "beta0", "gamma0"),
}

GENERIC_KEYS = ("ca", "cc", "cf", "bf", "cg", "bg", "f_rho0")

# every key a config file or PINTZ_ variable may set
KNOWN: dict[str, Opt] = {}
for _group in (COMMON, MERTENS, THEOREM, INFER):
    for _o in _group:
        KNOWN.setdefault(_o.dest, _o)


# ---------------------------------------------------------------------------
# configuration


def load_config(path) -> dict[str, Any]:
    """Parse a ``key = value`` file; ``#`` starts a comment.

    Keys are option names with ``_`` or ``-``. Unknown keys and malformed
    values raise ConfigParseError with the line number.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigParseError(f"cannot read config {path}: {exc.strerror}") from exc
    out: dict[str, Any] = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"expected key=value, got {raw.strip()!r}", no)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KNOWN:
            raise ConfigParseError(f"unknown key {key!r}{_suggest(key, KNOWN)}", no)
        try:
            out[key] = KNOWN[key].conv(value)
        except (ValueError, PintzError) as exc:
            raise ConfigParseError(f"bad value for {key}: {exc}", no) from exc
    return out


def _from_env(env) -> dict[str, Any]:
    out = {}
    for name, value in env.items():
        if not name.startswith(ENV_PREFIX) or name == ENV_PREFIX + "CONFIG":
            continue
        key = name[len(ENV_PREFIX):].lower()
        if key not in KNOWN:
            continue  # the environment is shared; ignore what is not ours
        try:
            out[key] = KNOWN[key].conv(value)
        except (ValueError, PintzError) as exc:
            raise UsageError(f"bad value in {name}: {exc}") from exc
    return out


def _suggest(word: str, vocab) -> str:
    close = difflib.get_close_matches(word, list(vocab), n=1)
    return f"; did you mean {close[0]!r}?" if close else ""


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2) with usage text
        raise UsageError(f"{self.prog}: {message}")


def _add(parser: argparse.ArgumentParser, opts: list[Opt]) -> None:
    for o in opts:
        if o.switch:
            parser.add_argument(o.flag, dest=o.dest, action="store_true",
                                default=argparse.SUPPRESS, help=o.help)
        else:
            parser.add_argument(o.flag, dest=o.dest, type=_wrap(o), metavar=o.dest.upper(),
                                default=argparse.SUPPRESS, help=o.help)
    parser.add_argument("--config", dest="config", default=argparse.SUPPRESS,
                        help="key=value file (flags override it, it overrides PINTZ_* vars)")


def _wrap(o: Opt):
    def conv(text):
        try:
            return o.conv(text)
        except PintzError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
    conv.__name__ = o.dest
    return conv


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pintz-forge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"pintz-forge {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    m = sub.add_parser("mertens", help="sieve M(n) and the integral of |M|")
    _add(m, COMMON + MERTENS)
    m.set_defaults(command="mertens", opts=COMMON + MERTENS)

    b = sub.add_parser("bounds", help="growth bounds of F and G")
    bsub = b.add_subparsers(dest="action", parser_class=_Parser, required=True)
    bv = bsub.add_parser("verify", help="re-check the numeric inequalities behind the bounds")
    _add(bv, COMMON)
    bv.set_defaults(opts=COMMON)

    t = sub.add_parser("theorem", help="evaluate the explicit lower bound")
    tsub = t.add_subparsers(dest="action", parser_class=_Parser, required=True)
    te = tsub.add_parser("eval", help="BoundBreakdown at Y")
    _add(te, COMMON + THEOREM)
    te.set_defaults(opts=COMMON + THEOREM)

    i = sub.add_parser("infer", help="zero-exclusion verdicts and regions")
    isub = i.add_subparsers(dest="action", parser_class=_Parser, required=True)
    for action in INFER_REQUIRED:
        ia = isub.add_parser(action)
        _add(ia, COMMON + INFER)
        ia.set_defaults(opts=COMMON + INFER)
    return p


def _parse(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    ns, extra = parser.parse_known_args(argv)
    if extra:
        opts = getattr(ns, "opts", [])
        vocab = [o.flag for o in opts] + ["--config", "--help"]
        msgs = []
        after_flag = False
        for tok in extra:
            if tok.startswith("-"):
                flag = tok.split("=", 1)[0]
                msgs.append(f"unknown flag {flag}{_suggest(flag, vocab)}")
                after_flag = "=" not in tok
            elif after_flag:
                after_flag = False  # the unknown flag's value
            else:
                msgs.append(f"unexpected argument {tok!r}")
        raise UsageError("; ".join(msgs))
    return ns


def resolve(ns: argparse.Namespace, env) -> dict[str, Any]:
    """Merge defaults < environment < config file < flags for this subcommand."""
    opts: list[Opt] = ns.opts
    dests = {o.dest for o in opts}
    cfg_path = getattr(ns, "config", None) or env.get(ENV_PREFIX + "CONFIG")
    layers = [
        {o.dest: o.default for o in opts},
        _from_env(env),
        load_config(cfg_path) if cfg_path else {},
        {k: v for k, v in vars(ns).items() if k in dests},
    ]
    out: dict[str, Any] = {}
    for layer in layers:
        out.update({k: v for k, v in layer.items() if k in dests})
    return out


# ---------------------------------------------------------------------------
# canonical output


def _plain(x):
    if isinstance(x, ExtReal):
        return x.serialize()
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def canonical_json(obj, indent: int | None = None) -> str:
    """Sorted keys, 17 significant digits for floats, non-finite floats as strings."""
    def enc(x, level):
        pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
        end = "" if indent is None else "\n" + " " * (indent * level)
        colon = ":" if indent is None else ": "
        if isinstance(x, bool) or x is None:
            return json.dumps(x)
        if isinstance(x, int):
            return str(x)
        if isinstance(x, float):
            if not math.isfinite(x):
                return json.dumps(repr(x))
            return format(x, ".17g")
        if isinstance(x, str):
            return json.dumps(x, ensure_ascii=False)
        if isinstance(x, dict):
            if not x:
                return "{}"
            items = [pad + json.dumps(k) + colon + enc(x[k], level + 1) for k in sorted(x)]
            return "{" + ",".join(items) + end + "}"
        if isinstance(x, list):
            if not x:
                return "[]"
            return "[" + ",".join(pad + enc(v, level + 1) for v in x) + end + "]"
        raise TypeError(f"cannot serialize {type(x).__name__}")
    return enc(_plain(obj), 0)


def digest(result: dict) -> str:
    return format(zlib.crc32(canonical_json(result).encode()), "08x")


@dataclass
class RunManifest:
    subcommand: str
    params: dict
    version: str = __version__
    wall_time: float = 0.0
    result_digest: str = ""

    def to_dict(self) -> dict:
        return {"subcommand": self.subcommand, "params": _plain(self.params),
                "version": self.version, "wall_time": self.wall_time,
                "result_digest": self.result_digest}


@dataclass
class Report:
    manifest: RunManifest
    result: dict
    rows: list[dict] = field(default_factory=list)  # CSV projection

    def to_json(self) -> str:
        return canonical_json({"manifest": self.manifest.to_dict(), "result": self.result},
                              indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.rows:
            cols = list(self.rows[0])
            w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            for r in self.rows:
                w.writerow({k: _csv_cell(v) for k, v in r.items()})
        return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, ExtReal):
        return v.serialize()
    if isinstance(v, float):
        return format(v, ".17g")
    return "" if v is None else v


# ---------------------------------------------------------------------------
# subcommands


def _require(params: dict, keys) -> None:
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise UsageError(f"missing required {flags}")


def run_mertens(params: dict, env) -> tuple[dict, list[dict]]:
    _require(params, ["limit"])
    limit = params["limit"]
    path = params["checkpoint"]
    if path is None:
        cdir = params["checkpoint_dir"] or env.get(ENV_PREFIX + "CHECKPOINT_DIR")
        if cdir:
            d_tag = "none" if params["verify_d"] is None else repr(params["verify_d"])
            path = str(Path(cdir) / f"mertens-{limit}-d{d_tag}.jsonl")
    start = load_checkpoint(path) if path else None
    if start is not None and start.cursor > limit:
        raise InvalidParams(f"checkpoint {path} is past limit {limit}")
    scan = mertens_scan(limit, params["segment_size"], params["verify_d"],
                        checkpoint=start, checkpoint_path=path,
                        workers=max(1, params["threads"]))
    result = scan_record(scan)
    result.pop("crc")
    result["mean_abs"] = mean_abs(scan)
    result["bound_holds"] = None if scan.sqrt_coeff is None else scan.first_violation is None
    row = {k: result[k] for k in ("limit", "M", "S_abs", "mean_abs", "max_ratio", "argmax",
                                  "first_violation", "last_violation")}
    return result, [row]


def run_bounds(params: dict, env) -> tuple[dict, list[dict]]:
    report = verify_lemma_chain()
    result = {"F": asdict(growth_bound_F()), "G": asdict(growth_bound_G()), **report.to_dict()}
    rows = [{"label": c.label, "lhs": c.lhs, "rhs": c.rhs, "slack": c.slack,
             "passed": c.passed} for c in report.checks]
    return result, rows


def _theorem_params(params: dict) -> TheoremParams:
    preset = params["preset"]
    given = [k for k in GENERIC_KEYS if params.get(k) is not None]
    if preset is None:
        preset = "generic" if given else "zeta-mertens"
    if preset == "zeta-mertens":
        if given:
            raise UsageError("--preset zeta-mertens fixes the constants; drop "
                             + ", ".join("--" + k.replace("_", "-") for k in given))
        return zeta_mertens_params(params["beta0"], params["gamma0"], params["c0"])
    _require(params, GENERIC_KEYS)
    return TheoremParams(
        pointwise_coeff=params["ca"], pointwise_power=params["cc"],
        numerator_growth=GrowthBound(params["cf"], params["bf"], 0.0),
        denominator_growth=GrowthBound(params["cg"], params["bg"], -1.0),
        beta0=params["beta0"], gamma0=params["gamma0"], c0=params["c0"],
        F_rho0_abs=params["f_rho0"])


def run_theorem(params: dict, env) -> tuple[dict, list[dict]]:
    _require(params, ["y", "beta0", "gamma0"])
    p = _theorem_params(params)
    b = lower_bound(params["y"], p, params["tol"], params["extra_log_factor"])
    result = b.to_dict()
    sqrtY = params["y"] ** 0.5
    result["total_over_sqrtY"] = (b.total / sqrtY).to_double()
    if params["mean_constant"]:
        result["mean_lower_constant"] = mean_lower_constant(params["y"], p, params["tol"])
    row = {"total": b.total, "total_over_sqrtY": result["total_over_sqrtY"],
           "main_term": b.main_term, "calE": b.calE, "tail_term": b.tail_term,
           "d1": b.d1, "d2": b.d2}
    return result, [row]


def run_infer(action: str, params: dict, env) -> tuple[dict, list[dict]]:
    _require(params, INFER_REQUIRED[action])
    horizon, sqrt_coeff = params["y"], params["d"]
    beta0, gamma0 = params["beta0"], params["gamma0"]

    if action == "pintz87":
        v = pintz87_bound(horizon, beta0, gamma0)
        result = {"bound": v, "applies": v is not None,
                  "log10_bound": None if v is None else (v.log10() if v.sign > 0 else None)}
        return result, [{"applies": v is not None, "bound": v}]

    if action == "check":
        c0 = best_c0(horizon, sqrt_coeff, beta0, gamma0) if params["optimize_c0"] else params["c0"]
        params["c0"] = c0
        r = exclusion_check(ExclusionQuery(horizon, sqrt_coeff, beta0, gamma0, c0))
        result = r.to_dict()
        return result, [{"verdict": r.verdict, "margin": r.margin, "lower": r.lower,
                         "upper": r.upper, "c0": c0}]

    tol = params["tol"]
    if action == "max-gamma":
        tol = 1e-3 if tol is None else tol
        region = lambda c: exclusion_region_gamma(horizon, sqrt_coeff, beta0, c, tol)  # noqa: E731
        better = lambda a, b: a > b  # noqa: E731
        grid = c0_grid(beta0)
    else:
        tol = 1e-4 if tol is None else tol
        region = lambda c: exclusion_region_beta(horizon, sqrt_coeff, gamma0, c, tol)  # noqa: E731
        better = lambda a, b: a < b  # noqa: E731
        grid = c0_grid(1.0)
    params["tol"] = tol
    if params["optimize_c0"]:
        best = None
        for c in grid:
            try:
                v = region(c)
            except NoExclusion:
                continue
            if best is None or better(v, best[1]):
                best = (c, v)
        if best is None:
            raise NoExclusion("no exclusion for any c0 on the grid")
        c0, value = best
    else:
        c0 = params["c0"]
        value = region(c0)
    params["c0"] = c0
    if action == "max-gamma":
        result = {"gamma_star": value, "log_gamma_star": float(value.log()),
                  "log10_gamma_star": value.log10(), "c0": c0}
        row = {"gamma_star": value, "log10_gamma_star": value.log10(), "c0": c0}
        # the boundary point itself, for auditing
        result["at_boundary"] = exclusion_check(ExclusionQuery(horizon, sqrt_coeff, beta0, value, c0)).to_dict()
    else:
        result = {"beta_star": value, "c0": c0}
        row = {"beta_star": value, "c0": c0}
        result["at_boundary"] = exclusion_check(ExclusionQuery(horizon, sqrt_coeff, value, gamma0, c0)).to_dict()
    return result, [row]


def parse_and_dispatch(argv: list[str], env=None, out=None) -> int:
    env = os.environ if env is None else env
    out = sys.stdout if out is None else out
    try:
        if not argv:
            raise UsageError("no subcommand; try: pintz-forge --help")
        ns = _parse(argv)
        params = resolve(ns, env)
        t0 = time.perf_counter()
        if ns.command == "mertens":
            name = "mertens"
            result, rows = run_mertens(params, env)
        elif ns.command == "bounds":
            name = "bounds verify"
            result, rows = run_bounds(params, env)
        elif ns.command == "theorem":
            name = "theorem eval"
            result, rows = run_theorem(params, env)
        else:
            name = f"infer {ns.action}"
            result, rows = run_infer(ns.action, params, env)
        wall = 0.0 if params.get("no_timing") else round(time.perf_counter() - t0, 6)
        result = _plain(result)
        manifest = RunManifest(name, {k: v for k, v in params.items()
                                      if k not in ("emit", "no_timing")},
                               wall_time=wall, result_digest=digest(result))
        rep = Report(manifest, result, rows)
        out.write(rep.to_csv() if params["emit"] == "csv" else rep.to_json())
        return 0
    except PintzError as exc:
        print(f"pintz-forge: error: {exc}", file=sys.stderr)
        return exc.exit_code


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    return parse_and_dispatch(sys.argv[1:] if argv is None else list(argv))


if __name__ == "__main__":
    sys.exit(main())
