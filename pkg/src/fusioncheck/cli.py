"""Command-line driver: ``fusioncheck check|spectra|catalog|oracle``."""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import catalog as cat
from . import criteria, fring, groups, integrality
from .report import (
    FAIL,
    FORMAT_VERSION,
    INCONCLUSIVE,
    PASS,
    CriterionReport,
    Witness,
    decimal,
    digits_for,
    overall_verdict,
    report_json,
)
from .ring import AxiomError, FusionRing, StructuralError, validate
from .spectra import DEFAULT_PRECISION, DEFAULT_SEED, SpectralError, character_table, decompose_regular

EXIT = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
EXIT_USAGE = 3
PRECISION_ENV = "FUSIONRING_PRECISION"
DEFAULT_TOL_EXP = -40
CRITERIA = ("axioms", "schur", "lpw", "lpw-general", "isaacs", "strong-isaacs", "all")
MAX_WITNESS_LINES = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass(frozen=True)
class RunConfig:
    precision: int = DEFAULT_PRECISION
    tol_exp: int | None = None
    nmax: int = 3
    s_values: tuple[Fraction, ...] = (Fraction(0), Fraction(1, 2), Fraction(1))
    criterion: str = "all"
    output: str = "text"
    seed: int = DEFAULT_SEED
    maxdeg: int | None = None

    def __post_init__(self):
        if self.precision < 64:
            raise UsageError("precision must be at least 64 bits")
        if self.tol_exp is not None and self.tol_exp > -16:
            raise UsageError("tolerance exponent must be <= -16")
        if not 3 <= self.nmax <= 6:
            raise UsageError("--n must be between 3 and 6")
        if any(s < 0 for s in self.s_values):
            raise UsageError("s values must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be an unsigned 64-bit integer")
        if self.maxdeg is not None and self.maxdeg < 1:
            raise UsageError("--maxdeg must be positive")

    @property
    def tolerance(self) -> str:
        """Decimal threshold; without ``--tol``, ``10^-40`` unless that sits
        below three quarters of the working precision, then ``2^(-precision/2)``."""
        if self.tol_exp is not None:
            return f"1e{self.tol_exp}"
        if DEFAULT_TOL_EXP * 3.3219 < -0.75 * self.precision:
            return f"{2.0 ** -(self.precision // 2):.6e}"
        return f"1e{DEFAULT_TOL_EXP}"


def _parse_s(text: str) -> tuple[Fraction, ...]:
    try:
        values = tuple(Fraction(part.strip()) for part in text.split(",") if part.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --s list {text!r}") from None
    if not values:
        raise UsageError("--s list is empty")
    return values


def _env_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV}={raw!r} is not an integer") from None


def _load(source: str, validated: bool = True) -> FusionRing:
    if source.startswith("catalog:"):
        try:
            return cat.catalog(source[len("catalog:"):])
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    try:
        return fring.parse_file(source, validate=validated)
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror}") from None
    except fring.ParseError as exc:
        raise UsageError(f"{source}: {exc}") from None
    except StructuralError as exc:
        raise UsageError(f"{source}: {exc}") from None


def axioms_report(ring: FusionRing, precision: int) -> CriterionReport:
    witnesses = [
        Witness((v.axiom, *v.indices), v.detail, "n/a") for v in validate(ring)
    ]
    return CriterionReport.from_findings(ring.name or "ring", "axioms", witnesses, precision, "0")


def run_check(ring: FusionRing, cfg: RunConfig) -> tuple[list[CriterionReport], list[str]]:
    """Reports for the selected criteria plus messages for standard error."""
    messages: list[str] = []
    axioms = axioms_report(ring, cfg.precision)
    sel = cfg.criterion
    reports = [axioms] if sel in ("axioms", "all") or axioms.verdict == FAIL else []
    if axioms.verdict == FAIL:
        if sel not in ("axioms", "all"):
            messages.append("ring fails the axioms; other criteria were not evaluated")
        return reports, messages
    if sel == "axioms":
        return reports, messages

    commutative = ring.is_commutative
    if commutative:
        spectrum = character_table(ring, cfg.precision, cfg.seed, cfg.tolerance)
        dims = spectrum.dims
    else:
        irreps = decompose_regular(ring, cfg.precision, cfg.seed, cfg.tolerance)
        dims = irreps.dims
    ns = range(3, cfg.nmax + 1)

    if sel in ("schur", "all"):
        reports.append(criteria.schur_inequalities(ring, dims, dims[0].context.mpf(cfg.tolerance)))
    if sel == "lpw-general" or (sel in ("lpw", "all") and not commutative):
        if sel != "lpw-general":
            messages.append("noncommutative ring: lpw routed to the product-vector search (lpw-general)")
        if commutative:
            irreps = decompose_regular(ring, cfg.precision, cfg.seed, cfg.tolerance)
        for n in ns:
            reports.append(criteria.lpw_general(irreps, n, seed=cfg.seed))
    elif sel in ("lpw", "all"):
        for n in ns:
            reports.append(criteria.lpw_positivity(spectrum, n))
    if sel in ("isaacs", "strong-isaacs", "all") and not commutative:
        if sel != "all":
            raise UsageError(f"--criterion {sel} requires a commutative ring")
        messages.append("noncommutative ring: integrality criteria skipped")
        return reports, messages
    if sel in ("isaacs", "all"):
        for s in cfg.s_values:
            reports.append(integrality.isaacs_check(spectrum, s, cfg.maxdeg))
            if s >= Fraction(1, 2):
                reports.append(integrality.frobenius_type_check(spectrum, s, cfg.maxdeg))
    if sel in ("strong-isaacs", "all"):
        reports.append(integrality.strongly_isaacs_check(spectrum, cfg.nmax, cfg.maxdeg))
    return reports, messages


def render_text(reports: list[CriterionReport]) -> str:
    lines = []
    for rep in reports:
        lines.append(f"{rep.verdict.upper():<13} {rep.criterion}  [{rep.ring}, {rep.precision_bits} bits, tol {rep.tolerance}]")
        for label, items in (("violation", rep.witnesses), ("warning", rep.warnings), ("unresolved", rep.inconclusive)):
            for w in items[:MAX_WITNESS_LINES]:
                idx = ",".join(str(x) for x in w.indices)
                extra = "".join(f" {k}={v}" for k, v in sorted(w.extra.items()) if k != "vectors")
                lines.append(f"    {label} at ({idx}): value {w.value}, margin {w.margin}{extra}")
            if len(items) > MAX_WITNESS_LINES:
                lines.append(f"    ... {len(items) - MAX_WITNESS_LINES} more {label} entries")
        for note in rep.notes:
            lines.append(f"    note: {note}")
    lines.append(f"overall: {overall_verdict(reports)}")
    return "\n".join(lines) + "\n"


def _emit(reports, cfg_output: str, out) -> int:
    out.write(report_json(*reports) if cfg_output == "json" else render_text(reports))
    return EXIT[overall_verdict(reports)]


def spectra_doc(ring: FusionRing, precision: int, seed: int, tolerance: str) -> dict:
    if ring.is_commutative:
        sp = character_table(ring, precision, seed, tolerance)
        digits = digits_for(precision)
        return {
            "format": FORMAT_VERSION,
            "ring": ring.name or "ring",
            "precision_bits": precision,
            "dims": [decimal(d, digits) for d in sp.dims],
            "fpdim": decimal(sp.fpdim, digits),
            "characters": [[decimal(x, digits) for x in row] for row in sp.chars],
            "codegrees": [decimal(a, digits) for a in sp.codegrees],
            "conjugates": list(sp.conj),
            "fp_index": sp.fp_index,
        }
    irr = decompose_regular(ring, precision, seed, tolerance)
    digits = digits_for(precision)
    return {
        "format": FORMAT_VERSION,
        "ring": ring.name or "ring",
        "precision_bits": precision,
        "dims": [decimal(d, digits) for d in irr.dims],
        "fpdim": decimal(irr.fpdim, digits),
        "irrep_dims": [rho.dim for rho in irr],
        "characters": [[decimal(x, digits) for x in rho.traces] for rho in irr],
        "codegrees": [decimal(rho.codegree, digits) for rho in irr],
        "conjugates": _conjugate_irreps(irr),
    }


def _conjugate_irreps(irr) -> list[int]:
    """Index of the irrep whose traces are the complex conjugates of each irrep's."""
    out = []
    for rho in irr:
        target = [x.conjugate() for x in rho.traces]
        errs = [max(abs(a - b) for a, b in zip(target, sigma.traces)) for sigma in irr]
        out.append(errs.index(min(errs)))
    return out


def _spectra_text(doc: dict) -> str:
    lines = [f"ring {doc['ring']} ({doc['precision_bits']} bits)", f"fpdim {doc['fpdim']}"]
    lines += [f"d[{i}] = {d}" for i, d in enumerate(doc["dims"])]
    for s, (row, a) in enumerate(zip(doc["characters"], doc["codegrees"])):
        head = f"rho[{s}]"
        if "irrep_dims" in doc:
            head += f" dim {doc['irrep_dims'][s]}"
        lines.append(f"{head}: codegree {a}; conjugate {doc['conjugates'][s]}")
        lines += [f"    b[{i}] -> {x}" for i, x in enumerate(row)]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fusioncheck", description="Categorification criteria for fusion rings.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def numeric_opts(q, with_n=True):
        q.add_argument("--precision", type=int, help=f"working precision in bits (default {DEFAULT_PRECISION}, env {PRECISION_ENV})")
        q.add_argument("--tol", type=int, dest="tol_exp", metavar="EXP", help="tolerance 10^EXP (default -40)")
        q.add_argument("--seed", type=int, default=DEFAULT_SEED)
        q.add_argument("--format", choices=("text", "json"), default="text", dest="output")
        if with_n:
            q.add_argument("--n", type=int, default=3, dest="nmax", help="largest n for the I_n and J_n tests (3..6)")

    c = sub.add_parser("check", help="evaluate criteria on a ring")
    c.add_argument("source", help="path to a .fring file or catalog:<name>")
    c.add_argument("--criterion", choices=CRITERIA, default="all")
    c.add_argument("--s", dest="s_list", default="0,1/2,1", help="comma-separated rationals")
    c.add_argument("--maxdeg", type=int, help="degree cap for minimal polynomials (default 2*rank)")
    numeric_opts(c)

    s = sub.add_parser("spectra", help="print dimensions, characters and codegrees")
    s.add_argument("source")
    numeric_opts(s, with_n=False)

    k = sub.add_parser("catalog", help="built-in rings")
    ksub = k.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ksub.add_parser("list")
    show = ksub.add_parser("show")
    show.add_argument("name")

    o = sub.add_parser("oracle", help="brute-force group cross-check")
    o.add_argument("group", choices=("s3",))
    numeric_opts(o)
    o.set_defaults(nmax=4)
    return p


def _config(args) -> RunConfig:
    precision = args.precision if args.precision is not None else _env_precision()
    return RunConfig(
        precision=precision,
        tol_exp=args.tol_exp,
        nmax=getattr(args, "nmax", 3),
        s_values=_parse_s(args.s_list) if hasattr(args, "s_list") else RunConfig.s_values,
        criterion=getattr(args, "criterion", "all"),
        output=args.output,
        seed=args.seed,
        maxdeg=getattr(args, "maxdeg", None),
    )


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "catalog":
            if args.action == "list":
                for name, desc in sorted(cat.describe().items()):
                    out.write(f"{name:<12} {desc}\n")
                return 0
            out.write(fring.serialize(_load("catalog:" + args.name)))
            return 0
        cfg = _config(args)
        if args.command == "check":
            try:
                ring = _load(args.source, validated=False)
            except AxiomError as exc:  # pragma: no cover - _load skips validation
                raise UsageError(str(exc)) from None
            reports, messages = run_check(ring, cfg)
            for m in messages:
                err.write(f"fusioncheck: {m}\n")
            return _emit(reports, cfg.output, out)
        if args.command == "spectra":
            ring = _load(args.source)
            doc = spectra_doc(ring, cfg.precision, cfg.seed, cfg.tolerance)
            out.write(json.dumps(doc, indent=2) + "\n" if cfg.output == "json" else _spectra_text(doc))
            return 0
        if args.command == "oracle":
            group = groups.symmetric_group(3)
            ring = cat.catalog("rep_s3")
            spectrum = character_table(ring, cfg.precision, cfg.seed, cfg.tolerance)
            ns = tuple(range(3, cfg.nmax + 1))
            reports = [groups.crosscheck_repG(group, ring, spectrum, ns), _orbit_report(group, ns, cfg.precision)]
            return _emit(reports, cfg.output, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except AxiomError as exc:
        err.write(f"fusioncheck: {exc}\n")
        return EXIT[FAIL]
    except SpectralError as exc:
        err.write(f"fusioncheck: spectral computation failed: {exc}\n")
        return EXIT[INCONCLUSIVE]
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return EXIT_USAGE


def _orbit_report(group, ns, precision) -> CriterionReport:
    witnesses = []
    for n in ns:
        for tup in itertools.product(range(len(group.classes)), repeat=n):
            for size, k in groups.orbit_divisibility(group, tup):
                witnesses.append(Witness((n, *tup), str(size), str(size % len(group.classes[tup[k]])), {"slot": k}))
    return CriterionReport.from_findings(
        "S3", "group-orbit-divisibility", witnesses, precision, "0", parameters={"ns": list(ns)}
    )


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
