"""Closure of the switching-product chain: T0, T1, ... until stationary.

The fast engine works blockwise in orbit coordinates: every switching
product commutes with the identity-stabilizer action, hence is constant on
its pair orbits, so the block of the algebra lives inside a space whose
dimension is the block's orbit count.  Products are evaluated at one
representative pair per orbit through precomputed bilinear contraction
tables, and ranks are tracked mod two independent primes.

A literal matrix engine over the ambient |C_i| x |C_k| coordinates (built on
the sparse field primitives) is kept as an independent oracle for small
groups.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import fieldla
from .fieldla import FieldCtx, RankTracker, modmul, restrict_block, sample_primes, spmm, vectorize
from .orbitals import OrbitalIndex
from .scheme import ClassScheme, conj_centralizer_dim, dim_T0, intersection_numbers
from .tables import BlockDimTable

Word = tuple[tuple[int, int, int], ...]


class ClosureError(RuntimeError):
    pass


class PrimeDisagreement(ClosureError):
    """The two working primes produced different dimension tables."""


class _Block:
    """Echelon state of one (i,k) block under one prime."""

    __slots__ = ("r", "p", "pivots", "rows", "raw", "words")

    def __init__(self, r: int, p: int):
        self.r = r
        self.p = p
        self.pivots: list[int] = []
        self.rows: list[np.ndarray] = []
        self.raw: list[np.ndarray] = []
        self.words: list[Word] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def insert_batch(
        self, cands: np.ndarray, word_of, cap: int
    ) -> list[int]:
        """Insert candidate rows (already mod p); return indices that grew rank."""
        p = self.p
        residual = cands % p
        if self.pivots:
            coeffs = residual[:, self.pivots]
            if coeffs.any():
                residual = (residual - modmul(coeffs, np.vstack(self.rows), p)) % p
        grown: list[int] = []
        n = residual.shape[0]
        for idx in range(n):
            if self.rank >= cap:
                break
            v = residual[idx]
            nz = np.nonzero(v)[0]
            if nz.size == 0:
                continue
            piv = int(nz[0])
            v = v * pow(int(v[piv]), -1, p) % p
            for other in self.rows:
                c = int(other[piv])
                if c:
                    other -= c * v
                    other %= p
            self.pivots.append(piv)
            self.rows.append(v)
            self.raw.append(cands[idx] % p)
            self.words.append(word_of(idx))
            grown.append(idx)
            if idx + 1 < n:
                col = residual[idx + 1 :, piv]
                mask = col.nonzero()[0]
                if mask.size:
                    residual[idx + 1 + mask] = (
                        residual[idx + 1 + mask] - np.outer(col[mask], v)
                    ) % p
        return grown

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Residual of one vector against the echelon rows."""
        p = self.p
        v = vec % p
        for piv, row in zip(self.pivots, self.rows):
            c = int(v[piv])
            if c:
                v = (v - c * row) % p
        return v


class SwitchingClosure:
    """Switching basis of one prime: per-block trackers plus provenance."""

    def __init__(self, scheme: ClassScheme, orbindex: OrbitalIndex, fieldctx: FieldCtx):
        self.scheme = scheme
        self.orbindex = orbindex
        self.field = fieldctx
        self.level = -1
        nc = scheme.classes.n_classes
        self.blocks: dict[tuple[int, int], _Block] = {
            (i, k): _Block(orbindex.r[(i, k)], fieldctx.p)
            for i in range(nc)
            for k in range(nc)
        }
        # length-1 generator vectors per block: relation indicators
        self.gens: dict[tuple[int, int], tuple[list[int], np.ndarray]] = {}
        for (i, k), rel in orbindex.block_rel.items():
            js = sorted(set(int(j) for j in rel))
            mat = np.stack([(rel == j).astype(np.int64) for j in js])
            self.gens[(i, k)] = (js, mat)
        self.frontier: dict[tuple[int, int], list[int]] = {}
        self.history: list[BlockDimTable] = []

    @property
    def total_dim(self) -> int:
        return sum(b.rank for b in self.blocks.values())

    def block_dims(self) -> BlockDimTable:
        nc = self.scheme.classes.n_classes
        dims = [[self.blocks[(i, k)].rank for k in range(nc)] for i in range(nc)]
        return BlockDimTable(labels=self.scheme.classes.label_strings(), dims=dims)

    def _cap(self, key: tuple[int, int], bounds: BlockDimTable | None) -> int:
        blk = self.blocks[key]
        cap = blk.r
        if bounds is not None:
            i, k = key
            labels = self.scheme.classes.label_strings()
            declared = bounds.get(labels[i], labels[k])
            if declared < blk.rank:
                raise ClosureError(
                    f"bound {declared} below observed rank {blk.rank} in block "
                    f"({labels[i]},{labels[k]}): prime collision or bad bound"
                )
            cap = min(cap, declared)
        return cap

    def generate_t0(self, bounds: BlockDimTable | None = None) -> None:
        if self.level >= 0:
            raise ClosureError("level 0 already generated")
        for key in sorted(self.blocks, key=self._block_order):
            js, mat = self.gens[key]
            i, k = key
            cap = self._cap(key, bounds)
            grown = self.blocks[key].insert_batch(
                mat, lambda idx: ((i, js[idx], k),), cap
            )
            if len(grown) != len(js):
                raise ClosureError(
                    f"length-1 generators of block {key} are not independent"
                )
            self.frontier[key] = list(range(len(grown)))
        self.level = 0
        self.history.append(self.block_dims())

    def _block_order(self, key: tuple[int, int]):
        sizes = self.scheme.classes.sizes
        return (sizes[key[0]] * sizes[key[1]], key)

    def extend_level(
        self,
        bounds: BlockDimTable | None = None,
        threads: int = 1,
        progress=None,
    ) -> dict[tuple[int, int], int]:
        """One closure step: frontier rows times length-1 generators."""
        if self.level < 0:
            raise ClosureError("generate level 0 first")
        nc = self.scheme.classes.n_classes
        targets = sorted(self.blocks, key=self._block_order)
        start = time.monotonic()

        def work(key: tuple[int, int]) -> tuple[tuple[int, int], int, list[int]]:
            i, m = key
            blk = self.blocks[key]
            cap = self._cap(key, bounds)
            before = blk.rank
            new_rows: list[int] = []
            if blk.rank >= cap:
                return key, 0, new_rows
            for nu in range(nc):
                rows_idx = self.frontier.get((i, nu), [])
                if not rows_idx:
                    continue
                left_blk = self.blocks[(i, nu)]
                left = np.stack([left_blk.raw[t] for t in rows_idx])
                words = [left_blk.words[t] for t in rows_idx]
                js, gmat = self.gens[(nu, m)]
                cands = self._chain_products(key, nu, left, gmat)
                n2 = len(js)

                def word_of(idx: int, words=words, js=js, nu=nu, m=m, n2=n2) -> Word:
                    return words[idx // n2] + ((nu, js[idx % n2], m),)

                base = blk.rank
                grown = blk.insert_batch(cands, word_of, cap)
                new_rows.extend(range(base, base + len(grown)))
                if blk.rank >= cap:
                    break
            return key, blk.rank - before, new_rows

        results = []
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(work, targets))
        else:
            results = [work(key) for key in targets]

        growth: dict[tuple[int, int], int] = {}
        new_frontier: dict[tuple[int, int], list[int]] = {}
        labels = self.scheme.classes.label_strings()
        for key, grew, new_rows in results:
            growth[key] = grew
            new_frontier[key] = new_rows
            if progress is not None and grew:
                progress(
                    self.level + 1,
                    f"({labels[key[0]]},{labels[key[1]]})",
                    self.blocks[key].rank,
                    time.monotonic() - start,
                )
        self.frontier = new_frontier
        self.level += 1
        self.history.append(self.block_dims())
        return growth

    def _chain_products(
        self,
        target: tuple[int, int],
        nu: int,
        left: np.ndarray,
        gmat: np.ndarray,
    ) -> np.ndarray:
        out = chain_products(self.orbindex, target, nu, left, gmat, self.field.p)
        n1, n2 = left.shape[0], gmat.shape[0]
        return out.reshape(n1 * n2, self.orbindex.r[target])


def chain_products(
    orbindex: OrbitalIndex,
    target: tuple[int, int],
    nu: int,
    left: np.ndarray,
    right: np.ndarray,
    p: int,
) -> np.ndarray:
    """Products of orbit-constant blocks: (left in (i,nu)) x (right in (nu,m)).

    Evaluated per target orbit t at its representative pair (x_t, y_t):
    sum over z in C_nu of L(x_t, z) * R(z, y_t), realized as the bilinear
    form with the contraction table C_t[a, b] = #{z : orbit(x_t,z)=a,
    orbit(z,y_t)=b}.  Returns an (n_left, n_right, r_target) array mod p.
    """
    i, m = target
    px, py = orbindex.block_reps[target]
    rows_a = orbindex.block_labels[(i, nu)][px, :]
    cols_b = orbindex.block_labels[(nu, m)][:, py]
    ra = orbindex.r[(i, nu)]
    rb = orbindex.r[(nu, m)]
    n1, n2 = left.shape[0], right.shape[0]
    rt = orbindex.r[target]
    out = np.empty((n1, n2, rt), dtype=np.int64)
    left = left % p
    rt_mat = right.T % p
    for t in range(rt):
        combined = rows_a[t].astype(np.int64) * rb + cols_b[:, t]
        ct = np.bincount(combined, minlength=ra * rb).reshape(ra, rb)
        out[:, :, t] = modmul(modmul(left, ct, p), rt_mat, p)
    return out


@dataclass
class ClosureResult:
    """Two-prime stationary closure with its full level history."""

    scheme: ClassScheme
    orbindex: OrbitalIndex
    primes: tuple[int, int]
    closures: tuple[SwitchingClosure, SwitchingClosure]
    width: int
    tables: list[BlockDimTable] = field(default_factory=list)

    @property
    def dim_t0(self) -> int:
        return self.tables[0].total()

    @property
    def dim_t(self) -> int:
        return self.tables[-1].total()

    @property
    def dims_per_level(self) -> list[int]:
        return [t.total() for t in self.tables]

    @property
    def final_table(self) -> BlockDimTable:
        return self.tables[-1]

    @property
    def basis(self) -> SwitchingClosure:
        return self.closures[0]


def generate_T0(
    scheme: ClassScheme, orbindex: OrbitalIndex, fieldctx: FieldCtx
) -> SwitchingClosure:
    closure = SwitchingClosure(scheme, orbindex, fieldctx)
    closure.generate_t0()
    tensor_dim = dim_T0(intersection_numbers(scheme))
    if closure.total_dim != tensor_dim:
        raise ClosureError(
            f"level-0 dimension {closure.total_dim} != nonzero intersection "
            f"numbers {tensor_dim}"
        )
    return closure


def extend_level(
    closure: SwitchingClosure, bounds: BlockDimTable | None = None, threads: int = 1
) -> dict[tuple[int, int], int]:
    return closure.extend_level(bounds=bounds, threads=threads)


def block_dims(closure: SwitchingClosure) -> BlockDimTable:
    return closure.block_dims()


def _run_once(
    scheme: ClassScheme,
    orbindex: OrbitalIndex,
    fieldctx: FieldCtx,
    bounds: BlockDimTable | None,
    max_width: int,
    threads: int,
    progress,
) -> tuple[SwitchingClosure, int]:
    closure = generate_T0(scheme, orbindex, fieldctx)
    for level in range(1, max_width + 2):
        growth = closure.extend_level(bounds=bounds, threads=threads, progress=progress)
        if not any(growth.values()):
            return closure, level - 1
    raise ClosureError(f"closure still growing after max width {max_width}; aborting")


def run_to_stationary(
    scheme: ClassScheme,
    orbindex: OrbitalIndex | None = None,
    *,
    seed: int = 0,
    primes: tuple[int, int] | None = None,
    bounds: BlockDimTable | None = None,
    max_width: int = 6,
    threads: int = 1,
    progress=None,
) -> ClosureResult:
    """Close the chain under two primes and cross-check every level."""
    if max_width < 1:
        raise ValueError("max_width must be >= 1")
    if orbindex is None:
        orbindex = OrbitalIndex(scheme)
    avoid = 2 * scheme.group.order
    attempts = 0
    while True:
        pair = primes if primes is not None else sample_primes(seed + attempts, 2, avoid)
        if len(pair) != 2 or pair[0] == pair[1]:
            raise ValueError("need two distinct primes")
        for p in pair:
            if avoid % p == 0:
                raise ValueError(f"prime {p} divides twice the group order")
        c1, w1 = _run_once(
            scheme, orbindex, FieldCtx(pair[0]), bounds, max_width, threads, progress
        )
        c2, w2 = _run_once(
            scheme, orbindex, FieldCtx(pair[1]), bounds, max_width, threads, None
        )
        same = w1 == w2 and len(c1.history) == len(c2.history)
        if same:
            same = all(
                t1.dims == t2.dims for t1, t2 in zip(c1.history, c2.history)
            )
        if same:
            return ClosureResult(
                scheme=scheme,
                orbindex=orbindex,
                primes=(pair[0], pair[1]),
                closures=(c1, c2),
                width=w1,
                tables=list(c1.history),
            )
        attempts += 1
        if primes is not None or attempts >= 2:
            raise PrimeDisagreement(
                f"dimension tables disagree under primes {pair}"
                + ("; a fresh prime pair also disagreed" if attempts >= 2 else "")
            )


@dataclass(frozen=True)
class TripleRegularity:
    triply_regular: bool
    triply_transitive: bool


def triple_regularity(result: ClosureResult) -> TripleRegularity:
    """T0 = T, and additionally T0 = conjugation centralizer."""
    centr = conj_centralizer_dim(result.scheme)
    regular = result.dim_t0 == result.dim_t
    transitive = result.dim_t0 == centr
    if transitive and not regular:
        raise AssertionError("triply transitive requires triply regular")
    return TripleRegularity(triply_regular=regular, triply_transitive=transitive)


class MatrixClosure:
    """Reference engine over ambient coordinates (independent oracle).

    Tracks each block in the flattened |C_i|*|C_k| space with sparse
    echelon trackers; feasible for the small symmetric groups only.
    """

    def __init__(self, scheme: ClassScheme, fieldctx: FieldCtx | fieldla.RationalField):
        self.scheme = scheme
        self.field = fieldctx
        cls = scheme.classes
        nc = cls.n_classes
        self.trackers = {
            (i, k): RankTracker(cls.sizes[i] * cls.sizes[k], fieldctx)
            for i in range(nc)
            for k in range(nc)
        }
        self.basis_mats: dict[tuple[int, int], list] = {
            key: [] for key in self.trackers
        }
        self.frontier: dict[tuple[int, int], list] = {}
        self.gen_mats: dict[tuple[int, int], list[tuple[int, object]]] = {}
        self.level = -1
        self.history: list[BlockDimTable] = []
        tensor = intersection_numbers(scheme)
        for i in range(nc):
            for k in range(nc):
                gens = []
                for j in range(nc):
                    if tensor.get(i, j, k):
                        gens.append((j, restrict_block(scheme, i, j, k)))
                self.gen_mats[(i, k)] = gens

    def block_dims(self) -> BlockDimTable:
        nc = self.scheme.classes.n_classes
        dims = [[self.trackers[(i, k)].rank for k in range(nc)] for i in range(nc)]
        return BlockDimTable(labels=self.scheme.classes.label_strings(), dims=dims)

    @property
    def total_dim(self) -> int:
        return sum(t.rank for t in self.trackers.values())

    def generate_t0(self) -> None:
        for key, gens in sorted(self.gen_mats.items()):
            new = []
            for _, mat in gens:
                if self.trackers[key].insert(vectorize(mat)):
                    self.basis_mats[key].append(mat)
                    new.append(mat)
            self.frontier[key] = new
        self.level = 0
        self.history.append(self.block_dims())

    def extend_level(self) -> int:
        nc = self.scheme.classes.n_classes
        grown_total = 0
        new_frontier: dict[tuple[int, int], list] = {
            key: [] for key in self.trackers
        }
        for i in range(nc):
            for m in range(nc):
                key = (i, m)
                for nu in range(nc):
                    for left in self.frontier.get((i, nu), []):
                        for _, gen in self.gen_mats[(nu, m)]:
                            prod = spmm(left, gen, self.field)
                            if prod.is_zero():
                                continue
                            if self.trackers[key].insert(vectorize(prod)):
                                self.basis_mats[key].append(prod)
                                new_frontier[key].append(prod)
                                grown_total += 1
        self.frontier = new_frontier
        self.level += 1
        self.history.append(self.block_dims())
        return grown_total


def run_matrix_closure(
    scheme: ClassScheme,
    fieldctx: FieldCtx | fieldla.RationalField,
    max_width: int = 6,
) -> tuple[MatrixClosure, int]:
    """Reference stationary closure; returns the engine and the width."""
    closure = MatrixClosure(scheme, fieldctx)
    closure.generate_t0()
    for level in range(1, max_width + 2):
        if closure.extend_level() == 0:
            return closure, level - 1
    raise ClosureError(f"reference closure did not stabilize within {max_width}")
