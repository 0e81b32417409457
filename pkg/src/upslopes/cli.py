"""Command-line front end: ``python -m upslopes <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .basis import BasisSpec
from .cache import ENV_VAR, SeriesCache, default_cache
from .clay import clay_slopes, compare_predictions, period
from .eigen import cuspidal_eigenvector
from .spectral import (
    CharSeries,
    SlopeMultiset,
    char_series,
    classicality_flag,
    newton_slopes,
    stabilization_check,
)
from .upmatrix import up_matrix

COMMANDS = ("charpoly", "slopes", "eigen", "clay", "compare", "stabilize")
PIPELINE_PRIMES = (11, 17, 19)
CLAY_PRIMES = (5, 11, 17, 19)

log = logging.getLogger("upslopes")


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    command: str
    p: int
    weight: int = 0
    dim: int = 6
    prec: int = 13
    qprec: int | None = None  # None means "auto"
    output: str | None = None
    seed: int | None = None
    cache_dir: str | None = None
    iters: int = 9
    count: int = 10
    window: int | None = None
    dims: tuple[int, ...] = ()

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        primes = CLAY_PRIMES if self.command == "clay" else PIPELINE_PRIMES
        if self.p not in primes:
            raise ConfigError(f"--p must be one of {primes} for {self.command}")
        if self.weight != 0 and (self.weight < 4 or self.weight % 2):
            raise ConfigError("--weight must be 0 or an even integer >= 4")
        if self.prec < 1 or self.dim < 1:
            raise ConfigError("--prec and --dim must be positive")
        if self.iters < 1 or self.count < 1:
            raise ConfigError("--iters and --count must be positive")
        if self.qprec is not None and self.qprec < 2 * self.dim + 1:
            raise ConfigError("--qprec is smaller than the basis size")
        if self.command == "eigen" and self.weight != 0:
            raise ConfigError("eigen supports weight 0 only")
        if self.command == "compare" and self.weight != 0:
            raise ConfigError("the slope formulas are for weight 0")
        if self.command == "stabilize":
            if not self.dims or any(d < 1 for d in self.dims) or list(self.dims) != sorted(self.dims):
                raise ConfigError("--dims must be an ascending list of positive integers")

    def spec(self) -> BasisSpec:
        return BasisSpec(self.p, self.weight, self.dim, self.prec, self.qprec)

    def params(self) -> dict:
        out = {"command": self.command, "p": str(self.p)}
        if self.command != "clay":
            out.update(
                weight=str(self.weight),
                dim=str(self.dim),
                prec=str(self.prec),
                qprec="auto" if self.qprec is None else str(self.qprec),
            )
        if self.command == "eigen":
            out.update(iters=str(self.iters), seed=None if self.seed is None else str(self.seed))
        if self.command in ("clay", "compare"):
            out["count"] = str(self.count)
        if self.command == "compare":
            out["window"] = None if self.window is None else str(self.window)
        if self.command == "stabilize":
            out["dims"] = [str(d) for d in self.dims]
        return out


def _series_json(cs: CharSeries) -> list[dict]:
    return [{"coeff": str(c), "valuation": str(c.valuation())} for c in cs.coeffs]


def _slopes_json(sl: SlopeMultiset, weight: int) -> list[dict]:
    out = []
    removed = False
    for s in sl.segments:
        mult = s.mult
        base = {
            "slope": str(s.slope),
            "classical": {"classical": "yes", "boundary": "boundary", "unknown": "unknown"}[
                classicality_flag(s.slope, weight)
            ],
            "provisional": s.provisional,
            "lower_bound": s.lower_bound,
        }
        if not removed and s.slope == 0 and not s.provisional:
            # one slope-0 line is the constant / ordinary Eisenstein form
            out.append({**base, "mult": 1, "cuspidal": False})
            removed = True
            mult -= 1
            if not mult:
                continue
        out.append({**base, "mult": mult, "cuspidal": True})
    return out


def _slope_text(sl: SlopeMultiset) -> str:
    return ", ".join(str(s) for s in sl.segments)


def _pipeline(cfg: JobConfig, cache: SeriesCache | None):
    M = up_matrix(cfg.spec(), cache=cache)
    return M, char_series(M)


def run(cfg: JobConfig) -> tuple[dict, str]:
    """Execute one job; returns the JSON document and a text rendering."""
    cfg.validate()
    cache = default_cache(cfg.cache_dir)
    doc: dict = {"version": __version__, "params": cfg.params()}
    lines: list[str] = []
    if cfg.command in ("charpoly", "slopes"):
        M, cs = _pipeline(cfg, cache)
        doc["char_series"] = _series_json(cs)
        doc["precision_report"] = {k: str(v) for k, v in M.precision_report.items()}
        lines.append(f"det(1 - t U_{cfg.p}) mod {cfg.p}^{cfg.prec}, weight {cfg.weight}, d = {cfg.dim}")
        for i, c in enumerate(cs.coeffs):
            lines.append(f"  c_{i} = {c}   v = {c.valuation()}")
        if cfg.command == "slopes":
            sl = newton_slopes(cs)
            doc["slopes"] = _slopes_json(sl, cfg.weight)
            cusp = sl.cuspidal()
            doc["cuspidal_slopes"] = [str(x) for x in cusp.as_list(include_provisional=True)]
            lines = lines[:1]
            lines.append("  slopes:    " + _slope_text(sl))
            lines.append("  cuspidal:  " + ", ".join(doc["cuspidal_slopes"]))
            lines.append("  ('?' marks a provisional slope, '>=' a lower bound)")
    elif cfg.command == "eigen":
        M = up_matrix(cfg.spec(), cache=cache)
        res = cuspidal_eigenvector(M, cfg.iters, seed=cfg.seed)
        doc["eigen"] = res.to_json()
        doc["precision_report"] = {k: str(v) for k, v in M.precision_report.items()}
        lines.append(f"slope-{res.slope} cuspidal eigenvector of U_{cfg.p}, {res.iterations} iterations")
        lines.append(f"  eigenvalue = {res.eigenvalue}  (holds mod {cfg.p}^{res.precision})")
        for i, c in zip(res.indices, res.coordinates):
            lines.append(f"  [{i:+d}] {c}")
    elif cfg.command == "clay":
        pred = clay_slopes(cfg.p, cfg.count)
        doc["clay"] = pred.to_json()
        lines.append(f"p = {cfg.p}: {pred.convention}")
        lines.append("  " + " ".join("-" if v is None else str(v) for v in pred.values))
    elif cfg.command == "compare":
        M, cs = _pipeline(cfg, cache)
        sl = newton_slopes(cs)
        computed = sl.as_list(include_provisional=True)
        pred = clay_slopes(cfg.p, max(cfg.count, 2 * period(cfg.p)))
        window = cfg.window or min(len(computed), len(pred.defined()))
        rep = compare_predictions(pred, computed, window)
        doc["char_series"] = _series_json(cs)
        doc["slopes"] = _slopes_json(sl, cfg.weight)
        doc["clay"] = {**pred.to_json(), "comparison": rep.to_json()}
        doc["precision_report"] = {k: str(v) for k, v in M.precision_report.items()}
        lines.append(f"computed:  {', '.join(str(x) for x in rep.computed)}")
        lines.append(f"predicted: {', '.join(str(x) for x in rep.predicted)}")
        lines.append("match" if rep.match else f"mismatch: computed-only {rep.missing}, predicted-only {rep.extra}")
    elif cfg.command == "stabilize":
        spec = BasisSpec(cfg.p, cfg.weight, cfg.dims[0], cfg.prec)
        rep = stabilization_check(spec, cfg.dims, cfg.prec, cache=cache)
        doc["stabilization"] = {
            "dims": [str(d) for d in rep.d_list],
            "agree_prefix": [str(m) for m in rep.agree_prefix],
            "stable_prefix": str(rep.stable_prefix),
            "stable_coefficients": [str(c) for c in rep.stable_coefficients()],
            "stable_indices": [str(i) for i in rep.stable_indices],
        }
        last = rep.series[-1]
        lines.append(f"coefficients c_0..c_{rep.stable_prefix} agree for d in {list(rep.d_list)}")
        lines.append(f"individually stable indices: {rep.stable_indices}")
        for i in rep.stable_indices:
            lines.append(f"  c_{i} = {last[i]}")
    doc["timestamp"] = datetime.now(timezone.utc).isoformat()
    return doc, "\n".join(lines)


def _dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma-separated list of integers")


def _qprec(text: str) -> int | None:
    if text == "auto":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or 'auto'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="upslopes", description="Slopes of U_p on overconvergent forms for p = 11, 17, 19.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, pipeline=True):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--json", dest="output", metavar="PATH", help="write the JSON report here ('-' for stdout)")
        sp.add_argument("--cache-dir", help=f"q-expansion cache (default ${ENV_VAR})")
        sp.add_argument("-v", "--verbose", action="store_true")
        if pipeline:
            sp.add_argument("--weight", type=int, default=0)
            sp.add_argument("--dim", type=int, default=6, help="basis section |i| <= dim")
            sp.add_argument("--prec", type=int, default=13, help="p-adic precision N")
            sp.add_argument("--qprec", type=_qprec, default=None, help="q-precision or 'auto'")

    common(sub.add_parser("charpoly", help="characteristic series det(1 - tU_p)"))
    common(sub.add_parser("slopes", help="Newton polygon slopes"))
    sp = sub.add_parser("eigen", help="lowest-slope cuspidal eigenvector")
    common(sp)
    sp.add_argument("--iters", type=int, default=9)
    sp.add_argument("--seed", type=int, default=None, help="random unit start vector (default: z)")
    sp = sub.add_parser("clay", help="conjectural slope formulas")
    common(sp, pipeline=False)
    sp.add_argument("--count", type=int, default=10)
    sp = sub.add_parser("compare", help="computed slopes against the formulas")
    common(sp)
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--window", type=int, default=None)
    sp = sub.add_parser("stabilize", help="coefficient stability across section sizes")
    common(sp)
    sp.add_argument("--dims", type=_dims, required=True, help="ascending list such as 5,6,7,8")
    return parser


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    kw = {k: getattr(ns, k) for k in ("weight", "dim", "prec", "qprec", "iters", "seed", "count", "window", "dims") if hasattr(ns, k)}
    return JobConfig(command=ns.command, p=ns.p, output=ns.output, cache_dir=ns.cache_dir, **kw)


def _emit(doc: dict, text: str, output: str | None) -> None:
    payload = json.dumps(doc, indent=2)
    if output == "-":
        print(payload)
        return
    if output:
        with open(output, "w") as fh:
            fh.write(payload + "\n")
    if text:
        print(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)  # exits with 2 on malformed arguments
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(ns)
        cfg.validate()
    except (ConfigError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    try:
        doc, text = run(cfg)
    except (ArithmeticError, ValueError, OSError) as exc:
        err = {"version": __version__, "params": cfg.params(), "error": {"type": type(exc).__name__, "message": str(exc)}}
        _emit(err, "", cfg.output)
        print(json.dumps(err["error"]), file=sys.stderr)
        return 1
    _emit(doc, text, cfg.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
