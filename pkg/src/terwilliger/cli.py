"""Command-line front end: per-stage subcommands and the full report."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import chars as chars_mod
from . import orbitals as orb_mod
from . import scheme as scheme_mod
from . import switching as sw_mod
from . import wedderburn as wed_mod
from .fieldla import sample_primes
from .groups import SymmetricGroup, build_group, inversion_closed
from .partitions import Partition
from .tables import BlockDimTable, render_cells

ENV_PREFIX = "TERWILLIGER_"


class UsageError(ValueError):
    """Bad flag combination or group/format mismatch."""


def _env(name: str, fallback=None):
    return os.environ.get(ENV_PREFIX + name, fallback)


@dataclass
class RunConfig:
    group: str
    primes: tuple[int, ...] = ()
    seed: int = 0
    max_width: int = 6
    use_bounds: bool = True
    fmt: str = "md"
    blocks: str | None = None
    threads: int = 1


def _split_blocks(spec: str) -> list[str]:
    """Split a label filter like "[6,1],[7]" on depth-0 commas."""
    out, depth, cur = [], 0, ""
    for ch in spec:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            if cur.strip():
                out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def _filter_table(table: BlockDimTable, blocks: str | None) -> BlockDimTable:
    if not blocks:
        return table
    want = _split_blocks(blocks)
    missing = [w for w in want if w not in table.labels]
    if missing:
        raise UsageError(f"unknown block labels: {missing}; have {table.labels}")
    idx = [table.labels.index(w) for w in want]
    dims = [[table.dims[a][b] for b in idx] for a in idx]
    return BlockDimTable(labels=want, dims=dims)


class Pipeline:
    """Lazy pipeline over one group; every stage is computed once."""

    def __init__(self, cfg: RunConfig, progress=None):
        self.cfg = cfg
        self.progress = progress
        self.group = build_group(cfg.group)
        self.checks: dict[str, bool] = {}
        self._scheme = None
        self._orbindex = None
        self._closure = None
        self._chartable = None
        self._mults = None
        self._centralizer = None
        self._cpis = None
        self._wedderburn = None
        self._thinness = None

    # -- stages ------------------------------------------------------------

    @property
    def scheme(self):
        if self._scheme is None:
            self._scheme = scheme_mod.build_scheme(self.group)
        return self._scheme

    @property
    def tensor(self):
        return scheme_mod.intersection_numbers(self.scheme)

    @property
    def orbindex(self):
        if self._orbindex is None:
            self._orbindex = orb_mod.OrbitalIndex(self.scheme, seed=self.cfg.seed)
            self._orbindex.validate_against_tensor(self.tensor)
            burn = orb_mod.burnside_orbital_count(self.scheme)
            self.checks["burnside_equals_orbit_total"] = burn == self._orbindex.total
        return self._orbindex

    def primes(self) -> tuple[int, int]:
        given = tuple(self.cfg.primes)
        if len(given) > 2:
            raise UsageError("at most two explicit primes")
        if len(given) == 2:
            return given
        avoid = 2 * self.group.order
        extra: list[int] = []
        k = 0
        while len(given) + len(extra) < 2:
            cand = sample_primes(self.cfg.seed + k, 1, avoid)[0]
            if cand not in given and cand not in extra:
                extra.append(cand)
            k += 1
        return given + tuple(extra)

    @property
    def closure(self) -> sw_mod.ClosureResult:
        if self._closure is None:
            bounds = self.orbindex.table() if self.cfg.use_bounds else None
            self._closure = sw_mod.run_to_stationary(
                self.scheme,
                self.orbindex,
                primes=self.primes(),
                bounds=bounds,
                max_width=self.cfg.max_width,
                threads=self.cfg.threads,
                progress=self.progress,
            )
            dim_t0 = self._closure.dim_t0
            dim_t = self._closure.dim_t
            tilde = self.orbindex.total
            centr = scheme_mod.conj_centralizer_dim(self.scheme)
            self.checks["sandwich_dims"] = dim_t0 <= dim_t <= tilde <= centr
            final = self._closure.final_table
            orbt = self.orbindex.table()
            self.checks["blocks_within_orbit_bounds"] = all(
                final.dims[a][b] <= orbt.dims[a][b]
                for a in range(len(final.labels))
                for b in range(len(final.labels))
            )
        return self._closure

    @property
    def is_symmetric_group(self) -> bool:
        return isinstance(self.group, SymmetricGroup) and self.group.n >= 3

    @property
    def chartable(self):
        if self._chartable is None:
            self._chartable = chars_mod.char_table(self.group.n)
        return self._chartable

    @property
    def mults(self):
        if self._mults is None:
            pi = chars_mod.perm_char_H1(self.group, self.scheme.classes)
            self._mults = chars_mod.multiplicities(pi, self.group.n)
            total = sum(m * m for _, m in self._mults.nonzero())
            self.checks["multiplicities_match_orbit_total"] = total == self.orbindex.total
        return self._mults

    @property
    def centralizer(self) -> chars_mod.CentralizerReport:
        if self._centralizer is None:
            self._centralizer = chars_mod.centralizer_wedderburn(self.mults)
        return self._centralizer

    @property
    def cpis(self):
        if self._cpis is None:
            builder = wed_mod.CpiBuilder(self.orbindex, self.chartable)
            self._cpis = builder.build_all(self.mults)
        return self._cpis

    @property
    def wedderburn(self) -> wed_mod.WedderburnReport:
        if self._wedderburn is None:
            self._wedderburn = wed_mod.decompose_T(
                self.closure, self.centralizer, self.cpis
            )
            self.checks["wedderburn_reconciled"] = self._wedderburn.reconciled
        return self._wedderburn

    @property
    def thinness(self) -> wed_mod.ThinReport:
        if self._thinness is None:
            self._thinness = wed_mod.thinness(self.cpis, self.orbindex)
        return self._thinness

    def conjecture(self) -> dict:
        if not self.is_symmetric_group:
            raise UsageError("the conjecture check needs a symmetric group of degree >= 3")
        n = self.group.n
        label = Partition(tuple([n - 1, 1])).label()
        t_block = self.closure.final_table.get(label, label)
        tilde_block = self.orbindex.table().get(label, label)
        return {
            "n": n,
            "block": f"({label},{label})",
            "t_block": t_block,
            "tilde_block": tilde_block,
            "strict": t_block < tilde_block,
        }


# -- rendering ---------------------------------------------------------------


def _print_table(table: BlockDimTable, fmt: str, corner: str = "") -> str:
    if fmt == "json":
        return table.to_json() + "\n"
    if fmt == "csv":
        return table.to_csv()
    return table.to_markdown(corner=corner)


def _growth_sections(pipe: Pipeline, fmt: str) -> list[str]:
    out = []
    tables = pipe.closure.tables
    for lvl in range(1, len(tables)):
        base, new = tables[lvl - 1], tables[lvl]
        if base.dims == new.dims:
            continue
        out.append(f"Growth at level {lvl} (base+growth):\n")
        if fmt == "md":
            out.append(
                _filter_table(base, pipe.cfg.blocks).growth_markdown(
                    _filter_table(new, pipe.cfg.blocks), corner=f"T{lvl}"
                )
            )
        else:
            out.append(_print_table(_filter_table(new, pipe.cfg.blocks), fmt))
    return out


def cmd_scheme(pipe: Pipeline) -> str:
    s = pipe.scheme
    mode = "full" if pipe.group.order <= 48 else "sampled"
    axioms = scheme_mod.verify_axioms(s, mode=mode, samples=2000, seed=pipe.cfg.seed)
    pipe.checks["scheme_axioms"] = axioms.ok
    info = {
        "group": pipe.group.name,
        "order": pipe.group.order,
        "n_classes": s.classes.n_classes,
        "class_labels": s.classes.label_strings(),
        "class_sizes": s.classes.sizes,
        "inversion_closed": inversion_closed(s.classes),
        "dim_t0": scheme_mod.dim_T0(pipe.tensor),
        "conj_centralizer_dim": scheme_mod.conj_centralizer_dim(s),
        "axioms": {"mode": axioms.mode, "ok": axioms.ok, "violations": axioms.violations},
    }
    if pipe.cfg.fmt == "json":
        return json.dumps(info, indent=2) + "\n"
    lines = [f"{k}: {v}" for k, v in info.items() if k != "axioms"]
    lines.append(f"axioms[{axioms.mode}]: {'ok' if axioms.ok else axioms.violations}")
    return "\n".join(lines) + "\n"


def cmd_characters(pipe: Pipeline) -> str:
    if not pipe.is_symmetric_group:
        raise UsageError("character tables are available for symmetric groups only")
    table = pipe.chartable
    sums = chars_mod.row_sums(table)
    eig = chars_mod.scheme_eigenmatrix(pipe.group.n)
    if pipe.cfg.fmt == "json":
        return (
            json.dumps(
                {
                    "n": table.n,
                    "rows": [lam.label() for lam in table.row_labels],
                    "cols": [mu.label() for mu in table.col_labels],
                    "values": table.values,
                    "row_sums": [sums[lam] for lam in table.row_labels],
                    "eigenmatrix": eig.values,
                    "eigen_multiplicities": eig.multiplicities,
                },
                indent=2,
            )
            + "\n"
        )
    # printed rows follow the descending label order of the stored table
    out = ["Character table (rows descending, columns ascending):\n"]
    cells = [[""] + [mu.label() for mu in table.col_labels]]
    for lam, row in zip(table.row_labels, table.values):
        cells.append([lam.label()] + [str(v) for v in row])
    out.append(render_cells(cells))
    out.append("\nRow sums: " + ", ".join(f"{k.label()}:{v}" for k, v in sums.items()))
    out.append("\n\nScheme eigenvalue table (entry chi*|C|/f, multiplicity f^2):\n")
    cells = [[""] + [mu.label() for mu in eig.col_labels] + ["mult"]]
    for lam, row, m in zip(eig.row_labels, eig.values, eig.multiplicities):
        cells.append([lam.label()] + [str(v) for v in row] + [str(m)])
    out.append(render_cells(cells))
    return "".join(out)


def cmd_centralizer(pipe: Pipeline) -> str:
    table = pipe.orbindex.table()
    burn = orb_mod.burnside_orbital_count(pipe.scheme)
    out = []
    if pipe.cfg.fmt == "json":
        payload = {
            "table": json.loads(table.to_json()),
            "total": pipe.orbindex.total,
            "burnside": burn,
        }
        if pipe.is_symmetric_group:
            payload["multiplicities"] = {
                sp.label(): m for sp, m in pipe.mults.nonzero()
            }
            payload["dim"] = pipe.centralizer.dim
        return json.dumps(payload, indent=2) + "\n"
    out.append("Centralizer-algebra block dimensions (orbit counts):\n")
    out.append(_print_table(_filter_table(table, pipe.cfg.blocks), pipe.cfg.fmt))
    out.append(f"\ntotal: {pipe.orbindex.total}\norbit-counting check: {burn}\n")
    if pipe.is_symmetric_group:
        out.append(
            "multiplicities: "
            + " + ".join(f"{m}*{sp.label()}" for sp, m in pipe.mults.nonzero())
            + f"\ndim: {pipe.centralizer.dim}\n"
        )
    return "".join(out)


def cmd_terwilliger(pipe: Pipeline) -> str:
    res = pipe.closure
    flags = sw_mod.triple_regularity(res)
    if pipe.cfg.fmt == "json":
        return (
            json.dumps(
                {
                    "primes": list(res.primes),
                    "width": res.width,
                    "dims_per_level": res.dims_per_level,
                    "dim_t0": res.dim_t0,
                    "dim_t": res.dim_t,
                    "block_table": json.loads(res.final_table.to_json()),
                    "triply_regular": flags.triply_regular,
                    "triply_transitive": flags.triply_transitive,
                },
                indent=2,
            )
            + "\n"
        )
    out = [
        f"primes: {res.primes}\n",
        f"dims per level: {res.dims_per_level}\n",
        f"switching width: {res.width}\n",
        f"dim T0 = {res.dim_t0}, dim T = {res.dim_t}\n",
        f"triply regular: {flags.triply_regular}, "
        f"triply transitive: {flags.triply_transitive}\n",
        "\nFinal block dimension table:\n",
        _print_table(_filter_table(res.final_table, pipe.cfg.blocks), pipe.cfg.fmt),
    ]
    out.extend(_growth_sections(pipe, pipe.cfg.fmt))
    return "".join(out)


def cmd_wedderburn(pipe: Pipeline) -> str:
    if not pipe.is_symmetric_group:
        raise UsageError("the Wedderburn pipeline needs a symmetric group (>= 3)")
    rep = pipe.wedderburn
    if pipe.cfg.fmt == "json":
        return (
            json.dumps(
                {
                    "dim_t": rep.dim_t,
                    "components": json.loads(rep.to_json()),
                    "members": [sp.label() for sp in rep.members],
                    "non_members": [sp.label() for sp in rep.non_members],
                    "reconciled": rep.reconciled,
                },
                indent=2,
            )
            + "\n"
        )
    return (
        f"dim T = {rep.dim_t}\n"
        f"components ({len(rep.components)}): {rep.to_markdown()}\n"
        f"sizes: {sorted((c.size for c in rep.components if c.size), reverse=True)}\n"
        f"non-members of T: {[sp.label() for sp in rep.non_members]}\n"
        f"reconciled: {rep.reconciled}\n"
    )


def cmd_thinness(pipe: Pipeline) -> str:
    if not pipe.is_symmetric_group:
        raise UsageError("thinness reports need a symmetric group (>= 3)")
    rep = pipe.thinness
    if pipe.cfg.fmt == "json":
        return rep.to_json() + "\n"
    lines = ["label dim thin block_dims"]
    for e in rep.entries:
        lines.append(
            f"{e.label.label()} {e.dim} {'thin' if e.thin else 'not-thin'} {e.block_dims}"
        )
    return "\n".join(lines) + "\n"


def cmd_conjecture(pipe: Pipeline) -> str:
    data = pipe.conjecture()
    if pipe.cfg.fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    return (
        f"n={data['n']} block {data['block']}: "
        f"dim in T = {data['t_block']}, in centralizer = {data['tilde_block']}, "
        f"strict: {data['strict']}\n"
    )


def cmd_report(pipe: Pipeline) -> str:
    sections = [cmd_scheme(pipe), cmd_centralizer(pipe), cmd_terwilliger(pipe)]
    if pipe.is_symmetric_group:
        sections.append(cmd_wedderburn(pipe))
        sections.append(cmd_thinness(pipe))
        sections.append(cmd_conjecture(pipe))
    checks = dict(sorted(pipe.checks.items()))
    if pipe.cfg.fmt == "json":
        merged = {}
        names = ["scheme", "centralizer", "terwilliger"]
        if pipe.is_symmetric_group:
            names += ["wedderburn", "thinness", "conjecture"]
        for name, body in zip(names, sections):
            merged[name] = json.loads(body)
        merged["checks"] = checks
        merged["seed"] = pipe.cfg.seed
        return json.dumps(merged, indent=2) + "\n"
    sections.append(
        "Reconciliation checks:\n"
        + "\n".join(f"  {k}: {'ok' if v else 'FAIL'}" for k, v in checks.items())
        + "\n"
    )
    return ("\n" + "-" * 60 + "\n").join(sections)


COMMANDS = {
    "scheme": cmd_scheme,
    "characters": cmd_characters,
    "centralizer": cmd_centralizer,
    "terwilliger": cmd_terwilliger,
    "wedderburn": cmd_wedderburn,
    "thinness": cmd_thinness,
    "conjecture": cmd_conjecture,
    "report": cmd_report,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="terwilliger",
        description=(
            "Terwilliger algebras of conjugacy-class association schemes: "
            "dimensions, block tables, Wedderburn decompositions, thinness. "
            f"Flags may also be set via {ENV_PREFIX}* environment variables."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument(
            "--group",
            default=_env("GROUP"),
            required=_env("GROUP") is None,
            help="group descriptor: sym:N or file:PATH",
        )
        p.add_argument(
            "--prime",
            action="append",
            type=int,
            default=None,
            help="explicit working prime (repeat for two)",
        )
        p.add_argument("--seed", type=int, default=int(_env("SEED", "0")))
        p.add_argument("--max-width", type=int, default=int(_env("MAX_WIDTH", "6")))
        p.add_argument(
            "--bounds",
            choices=["on", "off"],
            default=_env("BOUNDS", "on"),
            help="prune blocks at their orbit-count bound",
        )
        p.add_argument(
            "--format",
            choices=["md", "csv", "json"],
            default=_env("FORMAT", "md"),
            dest="fmt",
        )
        p.add_argument("--blocks", default=_env("BLOCKS"))
        p.add_argument("--threads", type=int, default=int(_env("THREADS", "1")))
        p.add_argument("--quiet", action="store_true", help="suppress progress lines")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    primes_env = _env("PRIME")
    primes = tuple(args.prime) if args.prime else ()
    if not primes and primes_env:
        primes = tuple(int(tok) for tok in primes_env.split(",") if tok)
    cfg = RunConfig(
        group=args.group,
        primes=primes,
        seed=args.seed,
        max_width=args.max_width,
        use_bounds=args.bounds == "on",
        fmt=args.fmt,
        blocks=args.blocks,
        threads=args.threads,
    )

    def progress(level, block, rank, elapsed):
        print(
            f"level={level} block={block} rank={rank} elapsed={elapsed:.1f}s",
            file=sys.stderr,
        )

    try:
        pipe = Pipeline(cfg, progress=None if args.quiet else progress)
        text = COMMANDS[args.command](pipe)
    except (sw_mod.ClosureError, AssertionError, ValueError, OSError) as exc:
        print(f"error[{args.command}]: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return 0 if all(pipe.checks.values()) else 1


if __name__ == "__main__":
    raise SystemExit(main())
