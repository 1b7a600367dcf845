"""Centrally primitive idempotents, thinness, and the final decomposition.

Idempotents of the stabilizer centralizer algebra are block-diagonal across
conjugacy classes and constant on pair orbits, so each one is stored as one
exact rational vector per diagonal block.  Values come from coset sums over
class transversals; membership in the closed algebra is a blockwise echelon
reduction under both working primes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .chars import CentralizerReport, CharTable, char_table
from .groups import SymmetricGroup, centralizer_elements, inversion_closed
from .orbitals import OrbitalIndex
from .partitions import SignedPartition
from .switching import ClosureResult, chain_products


@dataclass
class CPIdem:
    """One centrally primitive idempotent in orbit coordinates.

    block_values[c] holds the exact value of the idempotent on each orbit of
    C_c x C_c; off-diagonal blocks vanish.
    """

    label: SignedPartition
    degree: int
    multiplicity: int
    block_values: dict[int, list[Fraction]]

    def block_vector_mod(self, c: int, p: int) -> np.ndarray:
        out = np.empty(len(self.block_values[c]), dtype=np.int64)
        for t, v in enumerate(self.block_values[c]):
            out[t] = v.numerator * pow(v.denominator, -1, p) % p
        return out

    def block_matrix_mod(self, orbindex: OrbitalIndex, c: int, p: int) -> np.ndarray:
        """Materialize the |C_c| x |C_c| block as residues mod p."""
        vec = self.block_vector_mod(c, p)
        return vec[orbindex.block_labels[(c, c)]]

    def block_trace(self, orbindex: OrbitalIndex, c: int) -> Fraction:
        counts = orbindex.diag_pair_counts[c]
        return sum(
            (v * int(n) for v, n in zip(self.block_values[c], counts)),
            start=Fraction(0),
        )


def add_idempotents(label_a: CPIdem, label_b: CPIdem) -> CPIdem:
    """Sum of two idempotents (orthogonal by construction)."""
    if set(label_a.block_values) != set(label_b.block_values):
        raise ValueError("mismatched block structure")
    values = {
        c: [x + y for x, y in zip(label_a.block_values[c], label_b.block_values[c])]
        for c in label_a.block_values
    }
    return CPIdem(
        label=label_a.label,
        degree=label_a.degree,
        multiplicity=label_a.multiplicity + label_b.multiplicity,
        block_values=values,
    )


class CpiBuilder:
    """Builds idempotents from coset sums of character values."""

    def __init__(self, orbindex: OrbitalIndex, table: CharTable | None = None):
        scheme = orbindex.scheme
        g = scheme.group
        cls = scheme.classes
        if not inversion_closed(cls):
            raise ValueError("idempotents need inversion-closed classes")
        if not isinstance(g, SymmetricGroup):
            raise ValueError("signed-character idempotents are symmetric-group only")
        self.orbindex = orbindex
        self.group = g
        self.classes = cls
        self.table = table if table is not None else char_table(g.n)
        self.centralizers = [
            centralizer_elements(g, rep) for rep in cls.representatives
        ]

    def _char_by_class(self, sp: SignedPartition) -> list[int]:
        row = [self.table.value(sp.base, mu) for mu in self.table.col_labels]
        return row

    def _coset_sum(self, chi: list[int], x: int, y: int) -> int:
        """Sum of chi over {g : g x g^-1 = y} for x, y in the same class."""
        g = self.group
        cls = self.classes
        c = cls.class_of[x]
        ty = cls.transversal[y]
        tx_inv = g.inv(cls.transversal[x])
        total = 0
        for w in self.centralizers[c]:
            total += chi[cls.class_of[g.mul(g.mul(ty, w), tx_inv)]]
        return total

    def build(self, sp: SignedPartition) -> CPIdem:
        """Idempotent for one signed character; raises if it is zero."""
        g = self.group
        cls = self.classes
        oi = self.orbindex
        chi = self._char_by_class(sp)
        f = chi[0]
        order2 = 2 * g.order
        values: dict[int, list[Fraction]] = {}
        for c in range(cls.n_classes):
            px, py = oi.block_reps[(c, c)]
            elems = cls.elements[c]
            vec: list[Fraction] = []
            for a, b in zip(px, py):
                x, y = elems[int(a)], elems[int(b)]
                s_plus = self._coset_sum(chi, x, y)
                s_minus = self._coset_sum(chi, g.inv(x), y)
                vec.append(Fraction(f * (s_plus + sp.sign * s_minus), order2))
            values[c] = vec
        e = CPIdem(label=sp, degree=f, multiplicity=0, block_values=values)
        trace = sum((e.block_trace(oi, c) for c in values), start=Fraction(0))
        if trace.denominator != 1 or int(trace) % f:
            raise AssertionError(f"trace {trace} of {sp} is not a multiple of {f}")
        m = int(trace) // f
        if m == 0:
            raise ValueError(f"character {sp} does not occur: zero idempotent")
        e.multiplicity = m
        return e

    def build_all(self, mults) -> dict[SignedPartition, CPIdem]:
        """Idempotents for every signed character of nonzero multiplicity."""
        out: dict[SignedPartition, CPIdem] = {}
        for sp, m in mults.nonzero():
            e = self.build(sp)
            if e.multiplicity != m:
                raise AssertionError(
                    f"trace multiplicity {e.multiplicity} != <pi,chi> = {m} for {sp}"
                )
            out[sp] = e
        return out


def idempotent_defect(
    e: CPIdem, other: CPIdem | None, orbindex: OrbitalIndex, p: int
) -> int:
    """Nonzero count of e*other - (e if same) mod p; 0 means the identity holds."""
    bad = 0
    for c in e.block_values:
        u = e.block_vector_mod(c, p)[None, :]
        v = (other if other is not None else e).block_vector_mod(c, p)[None, :]
        prod = chain_products(orbindex, (c, c), c, u, v, p)[0, 0]
        expected = u[0] if other is None else np.zeros_like(prod)
        bad += int(np.count_nonzero((prod - expected) % p))
    return bad


def completeness_defect(
    cpis: dict[SignedPartition, CPIdem], orbindex: OrbitalIndex, p: int
) -> int:
    """Nonzero count of (sum of idempotents) - identity mod p."""
    bad = 0
    for c in range(orbindex.n_classes):
        total = np.zeros(orbindex.r[(c, c)], dtype=np.int64)
        for e in cpis.values():
            total = (total + e.block_vector_mod(c, p)) % p
        ident = (orbindex.diag_pair_counts[c] > 0).astype(np.int64)
        bad += int(np.count_nonzero((total - ident) % p))
    return bad


def module_block_dims(e: CPIdem, orbindex: OrbitalIndex) -> list[int]:
    """dim of each class slice of the irreducible module for e.

    The diagonal block of a block-diagonal idempotent is idempotent, so its
    rank equals its trace; dividing by the character degree must be exact.
    """
    dims: list[int] = []
    for c in sorted(e.block_values):
        tr = e.block_trace(orbindex, c)
        if tr.denominator != 1:
            raise AssertionError(f"non-integral block trace at class {c}")
        dim, rem = divmod(int(tr), e.degree)
        if rem:
            raise AssertionError(
                f"block trace {tr} at class {c} not divisible by degree {e.degree}"
            )
        if dim < 0:
            raise AssertionError(f"negative block dimension at class {c}")
        dims.append(dim)
    if sum(dims) != e.multiplicity:
        raise AssertionError("block dimensions do not sum to the multiplicity")
    return dims


@dataclass
class ThinEntry:
    label: SignedPartition
    dim: int
    block_dims: list[int]
    thin: bool


@dataclass
class ThinReport:
    entries: list[ThinEntry]

    def flag(self, sp: SignedPartition) -> bool:
        for entry in self.entries:
            if entry.label == sp:
                return entry.thin
        raise KeyError(str(sp))

    def to_json(self) -> str:
        return json.dumps(
            [
                {
                    "label": e.label.label(),
                    "dim": e.dim,
                    "block_dims": e.block_dims,
                    "thin": e.thin,
                }
                for e in self.entries
            ]
        )


def thinness(
    cpis: dict[SignedPartition, CPIdem], orbindex: OrbitalIndex
) -> ThinReport:
    """Thin flags: a module is thin iff every class slice has dim <= 1."""
    entries = []
    n_classes = orbindex.n_classes
    for sp, e in cpis.items():
        dims = module_block_dims(e, orbindex)
        thin = all(d <= 1 for d in dims)
        if e.multiplicity > n_classes and thin:
            raise AssertionError("module larger than the class count cannot be thin")
        entries.append(
            ThinEntry(label=sp, dim=e.multiplicity, block_dims=dims, thin=thin)
        )
    return ThinReport(entries=entries)


def cpi_membership(e: CPIdem, result: ClosureResult) -> bool:
    """Whether e lies in the closed algebra: blockwise echelon residuals.

    Every switching-basis element is supported in a single block and e is
    supported on diagonal blocks, so membership decomposes blockwise.  Both
    primes must agree.
    """
    verdicts = []
    for closure in result.closures:
        p = closure.field.p
        member = True
        for c in e.block_values:
            vec = e.block_vector_mod(c, p)
            residual = closure.blocks[(c, c)].reduce(vec)
            if np.count_nonzero(residual):
                member = False
                break
        verdicts.append(member)
    if verdicts[0] != verdicts[1]:
        raise AssertionError(
            f"membership of {e.label} disagrees between the working primes"
        )
    return verdicts[0]


def _rank_mod(mat: np.ndarray, p: int) -> int:
    """Dense Gaussian-elimination rank of a small matrix mod p."""
    a = mat % p
    rank = 0
    rows, cols = a.shape
    for col in range(cols):
        piv = None
        for r in range(rank, rows):
            if a[r, col] % p:
                piv = r
                break
        if piv is None:
            continue
        a[[rank, piv]] = a[[piv, rank]]
        a[rank] = a[rank] * pow(int(a[rank, col]), -1, p) % p
        for r in range(rows):
            if r != rank and a[r, col]:
                a[r] = (a[r] - a[r, col] * a[rank]) % p
        rank += 1
        if rank == rows:
            break
    return rank


def algebra_times_idempotent_dim(e: CPIdem, result: ClosureResult) -> int:
    """dim of (closed algebra) * e, blockwise, agreed under both primes."""
    dims = []
    for closure in result.closures:
        p = closure.field.p
        oi = closure.orbindex
        total = 0
        for (i, k), blk in closure.blocks.items():
            if not blk.raw:
                continue
            rows = np.stack(blk.raw)
            evec = e.block_vector_mod(k, p)[None, :]
            prods = chain_products(oi, (i, k), k, rows, evec, p)[:, 0, :]
            total += _rank_mod(prods, p)
        dims.append(total)
    if dims[0] != dims[1]:
        raise AssertionError(f"dim(T*e) for {e.label} disagrees between primes")
    return dims[0]


@dataclass
class WedderburnComponent:
    labels: tuple[SignedPartition, ...]
    size: int | None
    dim: int

    def label_strings(self) -> list[str]:
        return [sp.label() for sp in self.labels]


@dataclass
class WedderburnReport:
    components: list[WedderburnComponent]
    dim_t: int
    members: list[SignedPartition]
    non_members: list[SignedPartition]

    @property
    def total_dim(self) -> int:
        return sum(c.dim for c in self.components)

    @property
    def reconciled(self) -> bool:
        return self.total_dim == self.dim_t

    def sizes(self) -> list[int]:
        return [c.size for c in self.components if c.size is not None]

    def to_json(self) -> str:
        return json.dumps(
            [{"labels": c.label_strings(), "size": c.size} for c in self.components]
        )

    def to_markdown(self) -> str:
        parts = []
        for c in self.components:
            tag = "+".join(c.label_strings())
            parts.append(f"M_{c.size}[{tag}]" if c.size is not None else f"?[{tag}]")
        return " (+) ".join(parts)


def decompose_T(
    result: ClosureResult,
    centralizer: CentralizerReport,
    cpis: dict[SignedPartition, CPIdem],
) -> WedderburnReport:
    """Wedderburn components of the closed algebra from the centralizer's.

    High-multiplicity characters transfer unchanged (the dimension-gap
    corollary); remaining member idempotents are sized by dim(T*e); the
    non-members are partitioned into minimal sums lying in T, each giving
    one component.  The squared sizes must add up to dim T.
    """
    dim_t = result.dim_t
    dim_tilde = centralizer.dim
    delta = dim_tilde - dim_t
    if delta < 0:
        raise AssertionError("closed algebra larger than its centralizer bound")

    members: list[SignedPartition] = []
    non_members: list[SignedPartition] = []
    components: list[WedderburnComponent] = []
    pending: list[tuple[SignedPartition, int]] = []

    for sp, m in centralizer.components:
        e = cpis[sp]
        in_t = cpi_membership(e, result)
        if 2 * m - 1 > delta:
            # the gap corollary forces T*e = centralizer block of e
            if not in_t:
                raise AssertionError(
                    f"{sp} must lie in T by the dimension-gap corollary"
                )
            members.append(sp)
            components.append(WedderburnComponent((sp,), m, m * m))
        elif in_t:
            members.append(sp)
            d = algebra_times_idempotent_dim(e, result)
            if d == m * m:
                components.append(WedderburnComponent((sp,), m, d))
            else:
                # e splits inside the closed algebra; record the raw dimension
                components.append(WedderburnComponent((sp,), None, d))
        else:
            non_members.append(sp)
            pending.append((sp, m))

    if pending:
        merged = _merge_non_members(result, cpis, pending)
        components.extend(merged)

    report = WedderburnReport(
        components=components,
        dim_t=dim_t,
        members=members,
        non_members=non_members,
    )
    if not report.reconciled:
        raise AssertionError(
            f"Wedderburn reconciliation failed: sum of component dims "
            f"{report.total_dim} != dim T = {dim_t}; components: "
            f"{report.to_markdown()}"
        )
    return report


def _merge_non_members(
    result: ClosureResult,
    cpis: dict[SignedPartition, CPIdem],
    pending: list[tuple[SignedPartition, int]],
) -> list[WedderburnComponent]:
    """Minimal sums of non-member idempotents that land in the algebra.

    Exhaustive search by subset size; accepted subsets must partition the
    non-member set, and each sum acts as one component whose dimension is
    checked against dim(T*sum).
    """
    out: list[WedderburnComponent] = []
    remaining = list(range(len(pending)))
    for size in range(2, len(pending) + 1):
        if not remaining:
            break
        for combo in itertools.combinations(list(remaining), size):
            if any(idx not in remaining for idx in combo):
                continue
            total = None
            for idx in combo:
                e = cpis[pending[idx][0]]
                total = e if total is None else add_idempotents(total, e)
            if not cpi_membership(total, result):
                continue
            d = algebra_times_idempotent_dim(total, result)
            ms = {pending[idx][1] for idx in combo}
            size_guess = isqrt(d)
            if size_guess * size_guess != d or (len(ms) == 1 and d != pending[combo[0]][1] ** 2):
                raise AssertionError(
                    f"merged idempotent {[str(pending[i][0]) for i in combo]} has "
                    f"irregular dimension {d}"
                )
            labels = tuple(pending[idx][0] for idx in combo)
            out.append(WedderburnComponent(labels, size_guess, d))
            remaining = [idx for idx in remaining if idx not in combo]
    if remaining:
        raise AssertionError(
            "non-member idempotents could not be partitioned into sums lying "
            f"in the algebra: {[str(pending[i][0]) for i in remaining]}"
        )
    return out
