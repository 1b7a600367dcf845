"""The conjugacy-class association scheme and its intersection numbers."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .groups import ConjugacyData, GroupTable, conjugacy_classes


@dataclass
class ClassScheme:
    """Scheme on G with (x,y) in relation i iff x^-1 y lies in class i."""

    group: GroupTable
    classes: ConjugacyData
    _tensor: "IntersectionTensor | None" = field(default=None, repr=False)

    def relation_of(self, x: int, y: int) -> int:
        g = self.group
        return self.classes.class_of[g.mul(g.inv(x), y)]

    @property
    def n_classes(self) -> int:
        return self.classes.n_classes


def build_scheme(g: GroupTable) -> ClassScheme:
    return ClassScheme(group=g, classes=conjugacy_classes(g))


@dataclass
class IntersectionTensor:
    """Sparse intersection numbers p_ij^k, keyed (i,j,k)."""

    entries: dict[tuple[int, int, int], int]
    n_classes: int

    @property
    def d(self) -> int:
        return self.n_classes - 1

    def get(self, i: int, j: int, k: int) -> int:
        return self.entries.get((i, j, k), 0)

    def to_json(self) -> str:
        rows = [
            {"i": i, "j": j, "k": k, "p": p}
            for (i, j, k), p in sorted(self.entries.items())
        ]
        return json.dumps(rows)


def _raw_intersection_entries(s: ClassScheme) -> dict[tuple[int, int, int], int]:
    g = s.group
    cls = s.classes
    entries: dict[tuple[int, int, int], int] = {}
    for k, y in enumerate(cls.representatives):
        for i, members in enumerate(cls.elements):
            for z in members:
                j = cls.class_of[g.mul(g.inv(z), y)]
                key = (i, j, k)
                entries[key] = entries.get(key, 0) + 1
    return entries


def intersection_numbers(s: ClassScheme) -> IntersectionTensor:
    """Compute all p_ij^k from one representative pair (1, g_k) per k.

    For (1, y) with y in C_k:  p_ij^k = #{z in C_i : z^-1 y in C_j},
    so one scan of C_i buckets every j at once.  Cached on the scheme.
    """
    if s._tensor is not None:
        return s._tensor
    tensor = IntersectionTensor(
        entries=_raw_intersection_entries(s), n_classes=s.classes.n_classes
    )
    _validate_tensor(tensor, s.classes)
    s._tensor = tensor
    return tensor


def _validate_tensor(t: IntersectionTensor, cls: ConjugacyData) -> None:
    # Each z in C_i contributes to exactly one j: sum_j p_ij^k = |C_i|.
    for k in range(t.n_classes):
        for i in range(t.n_classes):
            total = sum(t.get(i, j, k) for j in range(t.n_classes))
            if total != cls.sizes[i]:
                raise AssertionError(f"row sum p_{i}j^{k} = {total} != |C_{i}|")
    for j in range(t.n_classes):
        for k in range(t.n_classes):
            if t.get(0, j, k) != (1 if j == k else 0):
                raise AssertionError("p_0j^k != delta_jk")


def dim_T0(t: IntersectionTensor) -> int:
    """Number of nonzero intersection numbers."""
    return sum(1 for p in t.entries.values() if p != 0)


def conj_centralizer_dim(s: ClassScheme) -> int:
    """Dimension of the conjugation centralizer algebra: sum of |G|/|C_i|."""
    n = s.group.order
    return sum(n // size for size in s.classes.sizes)


@dataclass
class AxiomReport:
    """Diagnostics from verify_axioms; never raises, collects violations."""

    mode: str
    checked_pairs: int
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_axioms(
    s: ClassScheme,
    mode: str = "full",
    samples: int = 10_000,
    seed: int = 0,
) -> AxiomReport:
    """Check the scheme axioms on all pairs (full) or a random sample.

    Checks: the diagonal is relation 0, converses land in the inverse
    class, and p_ij^k does not depend on the representative pair of S_k.
    """
    if mode not in ("full", "sampled"):
        raise ValueError(f"mode must be 'full' or 'sampled', got {mode!r}")
    g = s.group
    cls = s.classes
    entries = _raw_intersection_entries(s)
    t = IntersectionTensor(entries=entries, n_classes=cls.n_classes)
    report = AxiomReport(mode=mode, checked_pairs=0)
    for j in range(cls.n_classes):
        for k in range(cls.n_classes):
            if t.get(0, j, k) != (1 if j == k else 0):
                report.violations.append(f"p_0{j}^{k} != delta")

    for x in range(g.order):
        if s.relation_of(x, x) != 0:
            report.violations.append(f"diagonal pair ({x},{x}) not in relation 0")

    if mode == "full":
        pairs = ((x, y) for x in range(g.order) for y in range(g.order))
    else:
        rng = random.Random(seed)
        pairs = (
            (rng.randrange(g.order), rng.randrange(g.order)) for _ in range(samples)
        )

    inv_counts_cache: dict[int, dict[int, int]] = {}
    for x, y in pairs:
        report.checked_pairs += 1
        k = s.relation_of(x, y)
        back = s.relation_of(y, x)
        if back != cls.inverse_class[k]:
            report.violations.append(
                f"converse of ({x},{y}) lands in {back}, expected {cls.inverse_class[k]}"
            )
            continue
        counts: dict[int, int] = {}
        for i, members in enumerate(cls.elements):
            for c in members:
                z = g.mul(x, c)
                j = s.relation_of(z, y)
                counts[i * cls.n_classes + j] = counts.get(i * cls.n_classes + j, 0) + 1
        expected = inv_counts_cache.get(k)
        if expected is None:
            expected = {
                i * cls.n_classes + j: t.get(i, j, k)
                for i in range(cls.n_classes)
                for j in range(cls.n_classes)
                if t.get(i, j, k)
            }
            inv_counts_cache[k] = expected
        if counts != expected:
            report.violations.append(
                f"intersection numbers at pair ({x},{y}) differ from class-{k} values"
            )
        if len(report.violations) >= 20:
            report.violations.append("... further violations suppressed")
            break
    return report
