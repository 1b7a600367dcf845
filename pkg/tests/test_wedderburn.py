import itertools
from fractions import Fraction

import numpy as np
import pytest

import golden
import terwilliger as tw
from terwilliger.groups import load_cayley_table
from terwilliger.orbitals import OrbitalIndex
from terwilliger.partitions import SignedPartition, parse_partition, parse_signed_partition
from terwilliger.wedderburn import (
    CpiBuilder,
    _rank_mod,
    add_idempotents,
    algebra_times_idempotent_dim,
    completeness_defect,
    cpi_membership,
    idempotent_defect,
    module_block_dims,
    thinness,
)


def test_builder_rejects_non_symmetric(q8_path):
    s = tw.build_scheme(load_cayley_table(q8_path))
    with pytest.raises(ValueError):
        CpiBuilder(OrbitalIndex(s))


def test_zero_idempotent_rejected(stages):
    builder = CpiBuilder(stages.orbindex(4), stages.chartable(4))
    with pytest.raises(ValueError):
        builder.build(parse_signed_partition("[4]-"))


def test_trace_multiplicities_match_inner_products(stages):
    for n in (3, 4, 5):
        for sp, e in stages.cpis(n).items():
            assert e.multiplicity == stages.mults(n).get(sp)


def test_idempotence_both_primes(stages):
    for n in (3, 4, 5):
        oi = stages.orbindex(n)
        primes = stages.closure(n).primes
        for e in stages.cpis(n).values():
            for p in primes:
                assert idempotent_defect(e, None, oi, p) == 0


def test_pairwise_orthogonality_small(stages):
    for n in (3, 4):
        oi = stages.orbindex(n)
        p = stages.closure(n).primes[0]
        cpis = list(stages.cpis(n).values())
        for a, b in itertools.combinations(cpis, 2):
            assert idempotent_defect(a, b, oi, p) == 0


def test_orthogonality_sampled_s6(stages):
    oi = stages.orbindex(6)
    p = stages.closure(6).primes[0]
    cpis = list(stages.cpis(6).values())
    import random

    rng = random.Random(4)
    for _ in range(8):
        a, b = rng.sample(cpis, 2)
        assert idempotent_defect(a, b, oi, p) == 0


def test_completeness(stages):
    for n in (3, 4, 5, 6):
        oi = stages.orbindex(n)
        for p in stages.closure(n).primes:
            assert completeness_defect(stages.cpis(n), oi, p) == 0


def test_rank_equals_trace_times_degree(stages):
    # ambient block rank check against the exact trace formula
    for n in (4, 5):
        oi = stages.orbindex(n)
        p = stages.closure(n).primes[0]
        for e in stages.cpis(n).values():
            dims = module_block_dims(e, oi)
            for c, d in enumerate(dims):
                block = e.block_matrix_mod(oi, c, p)
                assert _rank_mod(block, p) == d * e.degree


def test_s4_idempotent_rank_example(stages):
    e = stages.cpis(4)[parse_signed_partition("[2^2]+")]
    oi = stages.orbindex(4)
    total = sum(Fraction(e.block_trace(oi, c)) for c in range(5))
    assert total == 6  # multiplicity 3 times degree 2
    p = stages.closure(4).primes[0]
    ranks = sum(
        _rank_mod(e.block_matrix_mod(oi, c, p), p) for c in range(5)
    )
    assert ranks == 6


def test_s4_module_block_dims(stages):
    oi = stages.orbindex(4)
    cpis = stages.cpis(4)
    primary = cpis[parse_signed_partition("[4]+")]
    assert module_block_dims(primary, oi) == [1, 1, 1, 1, 1]
    e22 = cpis[parse_signed_partition("[2^2]+")]
    dims = module_block_dims(e22, oi)
    assert sorted(dims) == [0, 0, 1, 1, 1]


def test_s5_non_thin_module(stages):
    oi = stages.orbindex(5)
    e = stages.cpis(5)[parse_signed_partition("[3,1^2]-")]
    dims = module_block_dims(e, oi)
    assert sum(dims) == 5
    assert max(dims) >= 2


def test_thinness_s4_all_thin(stages):
    rep = stages.thin(4)
    assert all(e.thin for e in rep.entries)


def test_thinness_s5(stages):
    rep = stages.thin(5)
    not_thin = {e.label.label() for e in rep.entries if not e.thin}
    assert not_thin == golden.S5_NOT_THIN


def test_thinness_s6(stages):
    rep = stages.thin(6)
    thin = {e.label.label() for e in rep.entries if e.thin}
    assert thin == golden.S6_THIN
    dims_not_thin = sorted(e.dim for e in rep.entries if not e.thin)
    assert dims_not_thin == [6, 7, 8, 8, 9, 9, 15]


def test_thin_report_json(stages):
    import json

    data = json.loads(stages.thin(4).to_json())
    assert len(data) == 5
    assert all(set(d) == {"label", "dim", "block_dims", "thin"} for d in data)


def test_membership_s4_all_members(stages):
    res = stages.closure(4)
    for e in stages.cpis(4).values():
        assert cpi_membership(e, res)


def test_membership_s6_non_members(stages):
    res = stages.closure(6)
    cpis = stages.cpis(6)
    non_members = {
        sp.label() for sp, e in cpis.items() if not cpi_membership(e, res)
    }
    assert non_members == golden.S6_NON_MEMBERS


def test_wedderburn_s4(stages):
    rep = stages.wedderburn(4)
    assert [c.size for c in rep.components] == golden.S4_WEDDERBURN_SIZES
    assert rep.reconciled
    assert not rep.non_members


def test_wedderburn_s5(stages):
    rep = stages.wedderburn(5)
    assert [c.size for c in rep.components] == golden.S5_WEDDERBURN_SIZES
    assert rep.reconciled


def test_wedderburn_s6(stages):
    rep = stages.wedderburn(6)
    assert sorted(c.size for c in rep.components) == golden.S6_WEDDERBURN_MULTISET
    assert rep.total_dim == 758 == rep.dim_t
    pairs = {
        frozenset(c.label_strings()) for c in rep.components if len(c.labels) > 1
    }
    assert pairs == golden.S6_MERGED_PAIRS
    assert all(c.size == 1 for c in rep.components if len(c.labels) > 1)


def test_algebra_times_idempotent_full_blocks(stages):
    res = stages.closure(4)
    cpis = stages.cpis(4)
    for sp, e in cpis.items():
        d = algebra_times_idempotent_dim(e, res)
        assert d == e.multiplicity**2


def test_merged_sum_is_idempotent(stages):
    oi = stages.orbindex(6)
    cpis = stages.cpis(6)
    p = stages.closure(6).primes[0]
    a = cpis[parse_signed_partition("[1^6]+")]
    b = cpis[parse_signed_partition("[2^2,1^2]+")]
    s = add_idempotents(a, b)
    assert s.multiplicity == 2
    assert idempotent_defect(s, None, oi, p) == 0


def test_pigeonhole_guard(stages):
    # a module wider than the class count cannot be thin
    for n in (5, 6):
        for entry in stages.thin(n).entries:
            if entry.dim > stages.scheme(n).n_classes:
                assert not entry.thin


def test_block_values_are_exact_fractions(stages):
    e = stages.cpis(3)[parse_signed_partition("[3]+")]
    for vec in e.block_values.values():
        assert all(isinstance(v, Fraction) for v in vec)


def test_identity_vector_distributes(stages):
    # sum of all idempotent traces per class recovers the class size
    for n in (4, 5):
        oi = stages.orbindex(n)
        cls = stages.scheme(n).classes
        cpis = stages.cpis(n)
        for c in range(cls.n_classes):
            total = sum(e.block_trace(oi, c) for e in cpis.values())
            assert total == cls.sizes[c]
