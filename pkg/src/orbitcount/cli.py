"""Command-line front end.

    orbitcount degrees --family LINFRAC_GENERAL --params a0=2,a1=-3,a2=5,b0=7,b1=-2,b2=3 --n 5
    orbitcount verify  --family LINFRAC_SPECIAL --params a=2,b=3 --n-range 1-3

Reports are JSON documents with a ``schema_version`` and a ``run_info`` block
(timestamp, timings).  Everything outside ``run_info`` is a deterministic
function of the configuration, so two runs with the same config give
byte-identical reports once ``run_info`` is dropped.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from . import cohomology as C
from . import families as Fam
from . import projmap as PM
from . import solver as S

SCHEMA_VERSION = 1
COMMANDS = ("degrees", "analyze", "predict", "census", "verify")
DEFAULT_SEED = 20240601

# period budgets: degree growth is exponential for most families, so the
# numeric census is capped by the degree of the iterate rather than by n
MAX_PERIOD = {"degrees": 12, "analyze": 1, "predict": 60, "census": 8, "verify": 8}
CENSUS_MAX_DEGREE = 16
DEGREES_MAX_DEGREE = 256

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET = 0, 2, 3


class ConfigError(ValueError):
    """A configuration that cannot be run, with a field or line diagnostic."""


@dataclass
class RunConfig:
    command: str
    family: str
    params: dict
    n_min: int = 1
    n_max: int = 1
    tol: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    precision: int = 53
    references: int = 0
    out: str | None = field(default=None, compare=False)
    format: str = "json"

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"field 'command': expected one of {', '.join(COMMANDS)}, got {self.command!r}")
        if self.family not in Fam.TAGS:
            raise ConfigError(f"field 'family': unknown family {self.family!r}; expected one of {', '.join(Fam.TAGS)}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"field 'format': expected json or csv, got {self.format!r}")
        if not (1 <= self.n_min <= self.n_max):
            raise ConfigError(f"field 'n': need 1 <= n_min <= n_max, got {self.n_min}-{self.n_max}")
        budget = MAX_PERIOD[self.command]
        if self.command != "analyze" and self.n_max > budget:
            raise ConfigError(f"field 'n': {self.command} supports periods up to {budget}, got {self.n_max}")
        unknown = set(self.tol) - set(S.DEFAULTS)
        if unknown:
            raise ConfigError(f"field 'tol': unknown tolerance(s) {sorted(unknown)}")
        if any(not v > 0 for v in self.tol.values()):
            raise ConfigError("field 'tol': tolerances must be positive")
        if self.precision < 53:
            raise ConfigError("field 'precision': at least 53 bits")
        if self.references < 0:
            raise ConfigError("field 'references': must be non-negative")
        if self.format == "csv" and self.command not in ("census", "verify"):
            raise ConfigError("field 'format': csv export is available for census and verify only")
        return self

    @property
    def periods(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("out")  # where the report goes is not part of it
        d["tol"] = {k: repr(v) for k, v in sorted(self.tol.items())}
        return d

    @classmethod
    def from_json(cls, d: dict) -> "RunConfig":
        d = dict(d)
        d["tol"] = {k: float(v) for k, v in d.get("tol", {}).items()}
        return cls(**d)


# ---------------------------------------------------------------------------
# parsing


def _parse_range(text: str) -> tuple[int, int]:
    text = str(text).strip()
    lo, sep, hi = text.partition("-")
    try:
        return (int(lo), int(hi)) if sep else (int(text), int(text))
    except ValueError:
        raise ConfigError(f"field 'n': expected N or A-B, got {text!r}") from None


def _parse_tol(value) -> dict:
    if isinstance(value, dict):
        items = value.items()
    elif isinstance(value, (int, float)):
        return {"newton_tol": float(value)}
    else:
        text = str(value).strip()
        if "=" not in text:
            try:
                return {"newton_tol": float(text)}
            except ValueError:
                raise ConfigError(f"field 'tol': bad value {text!r}") from None
        items = (s.split("=", 1) for s in text.split(",") if s.strip())
    out = {}
    for k, v in items:
        try:
            out[k.strip()] = float(v)
        except (TypeError, ValueError):
            raise ConfigError(f"field 'tol.{k}': expected a number, got {v!r}") from None
    return out


def _parse_params(value) -> dict:
    if isinstance(value, dict):
        return {str(k): str(v) for k, v in value.items()}
    try:
        return Fam.parse_params(str(value))
    except ValueError as exc:
        raise ConfigError(f"field 'params': {exc}") from None


def load_config_file(path: str) -> dict:
    """Read a JSON config file; syntax errors are reported with line and column."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}:1:1: top level must be an object")
    known = {"command", "family", "params", "n", "n_range", "tol", "seed", "precision", "references", "out", "format"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{path}: unknown field(s) {sorted(unknown)}")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge a config file (if any) with command-line flags; flags win."""
    base = load_config_file(args.config) if args.config else {}
    merged = dict(base)
    for key in ("family", "params", "tol", "seed", "precision", "references", "out", "format"):
        v = getattr(args, key)
        if v is not None:
            merged[key] = v
    if args.n is not None:
        merged.pop("n_range", None)
        merged["n"] = args.n
    if args.n_range is not None:
        merged.pop("n", None)
        merged["n_range"] = args.n_range
    command = args.command or base.get("command")
    if command is None:
        raise ConfigError("field 'command': missing")
    if "family" not in merged:
        raise ConfigError("field 'family': missing")
    if "n" in merged and "n_range" in merged:
        raise ConfigError("fields 'n' and 'n_range' are mutually exclusive")
    span = merged.get("n_range", merged.get("n", 5 if command == "degrees" else 1))
    n_min, n_max = _parse_range(span)
    if command == "degrees":
        n_min = 1  # the degree table always starts at F^1
    try:
        seed = int(merged.get("seed", DEFAULT_SEED))
        precision = int(merged.get("precision", 53))
        references = int(merged.get("references", 0))
    except (TypeError, ValueError):
        raise ConfigError("fields 'seed', 'precision' and 'references' must be integers") from None
    return RunConfig(
        command=command, family=str(merged["family"]), params=_parse_params(merged.get("params", {})),
        n_min=n_min, n_max=n_max, tol=_parse_tol(merged.get("tol", {})), seed=seed,
        precision=precision, references=references, out=merged.get("out"), format=merged.get("format", "json"),
    ).validate()


# ---------------------------------------------------------------------------
# commands


def _spec(cfg: RunConfig):
    try:
        return Fam.build(cfg.family, cfg.params)
    except (Fam.DegenerateParameters, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"field 'params': {exc}") from None


def run_degrees(cfg: RunConfig, spec) -> dict:
    f = PM.homogenize(spec)
    seq = PM.degree_sequence(f, cfg.n_max, max_degree=DEGREES_MAX_DEGREE)
    return {"degrees": [{"n": k, "degree": d} for k, d in enumerate(seq, start=1)]}


def run_analyze(cfg: RunConfig, spec) -> dict:
    f = PM.homogenize(spec)
    ind = PM.indeterminacy_locus(f, seed=cfg.seed)
    curves = PM.critical_curves(f, seed=cfg.seed)
    stab = PM.exceptional_orbit_check(f, curves=curves, ind=ind, seed=cfg.seed)
    return {
        "map": [c.to_text() for c in f.components],
        "degree": f.degree,
        "indeterminacy": [p.to_json() for p in ind],
        "critical_curves": [c.to_json() for c in curves],
        "topological_degree": PM.topological_degree(f, seed=cfg.seed),
        "stability": stab.to_json(),
        "spurious": [s.to_json() for s in C.spurious_census(spec, seed=cfg.seed)],
    }


def run_predict(cfg: RunConfig, spec) -> dict:
    return {"predictions": [C.predicted_count(spec, n).to_json() for n in cfg.periods]}


def _census_all(cfg: RunConfig, spec) -> list:
    reports = []
    for n in cfg.periods:
        reports.append(S.census(spec, n, tol=cfg.tol, seed=cfg.seed, max_degree=CENSUS_MAX_DEGREE,
                                prec=cfg.precision, references=cfg.references))
    return reports


def run_census(cfg: RunConfig, spec) -> dict:
    return {"reports": _census_all(cfg, spec)}


def run_verify(cfg: RunConfig, spec) -> dict:
    reports = _census_all(cfg, spec)
    rows = []
    for r in reports:
        pred = r.prediction
        rows.append({
            "n": r.n,
            "predicted": pred.predicted if pred else None,
            "lefschetz": pred.lefschetz if pred else None,
            "spurious": pred.spurious if pred else None,
            "direct_p2": pred.direct_p2 if pred else None,
            "found": r.found_distinct,
            "verdict": r.verdict,
            "compared_against": r.compared_against,
            "genericity_flags": list(r.genericity_flags),
        })
    return {"table": rows, "reports": reports}


RUNNERS = {"degrees": run_degrees, "analyze": run_analyze, "predict": run_predict,
           "census": run_census, "verify": run_verify}


# ---------------------------------------------------------------------------
# reports


@dataclass
class RunReport:
    """In-memory form of an emitted report; ``run_info`` does not take part in equality."""

    command: str
    config: RunConfig
    results: dict
    schema_version: int = SCHEMA_VERSION
    run_info: dict = field(default_factory=dict, compare=False)

    def to_json(self, include_run_info: bool = True) -> dict:
        results = dict(self.results)
        if "reports" in results:
            results["reports"] = [r.to_json(include_timings=False) for r in results["reports"]]
        d = {"schema_version": self.schema_version, "command": self.command,
             "config": self.config.to_json(), "results": results}
        if include_run_info:
            d["run_info"] = self.run_info
        return d

    def dumps(self, include_run_info: bool = True) -> str:
        return json.dumps(self.to_json(include_run_info), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, d: dict) -> "RunReport":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ConfigError(f"unsupported report schema_version {d.get('schema_version')!r}")
        results = dict(d["results"])
        if "reports" in results:
            results["reports"] = [S.PeriodicReport.from_json(r) for r in results["reports"]]
        return cls(d["command"], RunConfig.from_json(d["config"]), results, d["schema_version"],
                   dict(d.get("run_info", {})))

    @classmethod
    def loads(cls, text: str) -> "RunReport":
        return cls.from_json(json.loads(text))

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "n", *S.CSV_COLUMNS])
        for r in self.results.get("reports", []):
            for row in r.csv_rows():
                w.writerow([r.family, r.n, *row])
        return buf.getvalue()


def run(cfg: RunConfig) -> RunReport:
    """Execute one configured command and return its report."""
    spec = _spec(cfg)
    t0 = time.perf_counter()
    results = RUNNERS[cfg.command](cfg, spec)
    elapsed = time.perf_counter() - t0
    info = {"timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "elapsed_s": round(elapsed, 6)}
    if "reports" in results:
        info["timings"] = [{"n": r.n, **{k: round(v, 6) for k, v in r.timings.items()}}
                           for r in results["reports"]]
    return RunReport(cfg.command, cfg, results, run_info=info)


def _summary(report: RunReport) -> str:
    res = report.results
    lines = [f"{report.command} {report.config.family} {report.config.params}"]
    if "degrees" in res:
        lines.append("degrees: " + ", ".join(str(r["degree"]) for r in res["degrees"]))
    if "predictions" in res:
        for p in res["predictions"]:
            lines.append(f"n={p['n']}: predicted {p['predicted']} (Lefschetz {p['lefschetz']} - spurious {p['spurious']})"
                         + (f"  [{'; '.join(p['notes'])}]" if p["notes"] else ""))
    if "table" in res:
        for r in res["table"]:
            lines.append(f"n={r['n']}: predicted {r['predicted']}, found {r['found']} -> {r['verdict']}"
                         + (f"  flags: {'; '.join(r['genericity_flags'])}" if r["genericity_flags"] else ""))
    elif "reports" in res:
        for r in res["reports"]:
            lines.append(f"n={r.n}: {r.found_distinct} valid points, verdict {r.verdict}")
    if "indeterminacy" in res:
        lines.append(f"degree {res['degree']}, d_top {res['topological_degree']}, "
                     f"{len(res['indeterminacy'])} indeterminacy point(s), stability {res['stability']['status']}")
    return "\n".join(lines)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orbitcount", description="Periodic-point counts for rational recurrences.")
    ap.add_argument("command", nargs="?", choices=COMMANDS, help="what to run (may come from --config)")
    ap.add_argument("--config", help="JSON config file; flags override its fields")
    ap.add_argument("--family", choices=Fam.TAGS)
    ap.add_argument("--params", help="comma-separated name=value pairs, e.g. a=2,b=3/4")
    span = ap.add_mutually_exclusive_group()
    span.add_argument("--n", help="period (or N for degrees)")
    span.add_argument("--n-range", dest="n_range", help="period range A-B")
    ap.add_argument("--tol", help="newton tolerance, or name=value overrides of the solver tolerances")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--precision", type=int, help="working precision in bits for multiple-root refinement")
    ap.add_argument("--references", type=int,
                    help="compare each census against this many random draws of the family (genericity check)")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--format", choices=("json", "csv"))
    ap.add_argument("--quiet", action="store_true", help="no summary on stderr")
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        report = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PM.BudgetExceeded, S.IllConditioned, PM.GenericityError) as exc:
        print(f"budget/conditioning failure: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    text = report.csv_text() if cfg.format == "csv" else report.dumps()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not args.quiet:
        print(_summary(report), file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
