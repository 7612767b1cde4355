import json
from fractions import Fraction as F
from importlib import resources

import pytest
from hypothesis import given

from latlim import ordercont as oc
from latlim.errors import NotRepresentable, UnknownExample
from latlim.ratcore import minimize_linear_over_max
from latlim.seqlat import EPSeq, SpaceTag
from latlim.seqlat import unit as e
from strategies import epseqs, finite_seqs

C = SpaceTag("c")
C0 = SpaceTag("c0_closure_model")
ONES = EPSeq.constant(1)


def partial_sums(n):
    return [EPSeq.finite([1] * k) for k in range(1, n + 1)]


def test_increasing_non_cauchy_in_c():
    v = oc.verify_increasing_non_cauchy(C, partial_sums(6), ONES, 1)
    assert v.holds and v.method == "certificate"


def test_membership_gate_in_c0():
    v = oc.verify_increasing_non_cauchy(C0, partial_sums(6), ONES, 1)
    assert not v.holds and "member" in json.dumps(v.witness)


def test_constant_sequence_fails_delta():
    v = oc.verify_increasing_non_cauchy(C, [e(1)] * 4, ONES, 1)
    assert not v.holds


def test_disjoint_witness():
    assert oc.verify_disjoint_witness(C, ONES, [e(n) for n in range(1, 6)], 1).holds
    assert not oc.verify_disjoint_witness(C, ONES, [e(1)] * 4, 1).holds
    halves = [EPSeq.finite([0] * (n - 1) + [F(1, 2 ** n)]) for n in range(1, 5)]
    assert not oc.verify_disjoint_witness(C, ONES, halves, 1).holds


def test_band_projection_examples():
    P = oc.BandProjection.first(C, 2)
    assert oc.band_project(P, ONES) == EPSeq.finite((1, 1))
    full = oc.BandProjection(C, frozenset(), cofinite=True)
    assert oc.band_project(full, ONES) == ONES
    Q = oc.BandProjection.first(C, 1).complement()
    assert oc.band_project(Q, EPSeq.of((5,), (1,))) == EPSeq.of((0,), (1,))
    with pytest.raises(NotRepresentable):
        oc.band_project(P, (1, 2))


@given(epseqs())
def test_band_projection_is_idempotent_with_disjoint_complement(s):
    for n in (1, 3):
        P = oc.BandProjection.first(C, n)
        ps = oc.band_project(P, s)
        assert oc.band_project(P, ps) == ps
        a = abs(s)
        assert (oc.band_project(P, a) & (a - oc.band_project(P, a))) == EPSeq.zero()


@given(finite_seqs())
def test_band_density_in_c0(probe):
    bands = [oc.BandProjection.first(C0, i) for i in range(1, 8)]
    rep = oc.check_band_density(C0, bands, [probe], F(1, 1000))
    assert rep.status == "pass"


def test_band_density_zero_probe_first_band():
    bands = [oc.BandProjection.first(C0, i) for i in range(1, 4)]
    rep = oc.check_band_density(C0, bands, [EPSeq.zero()], F(1, 2))
    assert rep.claims[0].detail["band"] == 1


@pytest.mark.parametrize("eps", [F(1, 2), F(1)])
def test_band_density_fails_in_c(eps):
    bands = [oc.BandProjection.first(C, i) for i in range(1, 6)]
    rep = oc.check_band_density(C, bands, [ONES], eps)
    assert rep.status == "fail"
    assert rep.claims[0].detail["norms"] == ["1"] * 5


@pytest.mark.parametrize("N", [1, 2, 7, 10])
def test_lower_bound_is_half(N):
    assert oc.example_53_lower_bound(N) == F(1, 2)


def test_lower_bound_without_average_term():
    assert minimize_linear_over_max(oc.example_53_terms(1, drop_average=True)) == 0


def test_permanence_experiment():
    v = oc.permanence_experiment(seed=0)
    assert v.holds and v.inconclusive


@pytest.mark.parametrize("ex_id", oc.EXAMPLE_IDS)
def test_bundles_pass(ex_id):
    rep = oc.build_example(ex_id, 0).run()
    assert rep.status == "pass"
    assert all(c.status in ("pass", "inconclusive") for c in rep.claims)


def test_l1_averaging_bundle_exact_claims():
    rep = oc.build_example("5.1", 0).run()
    for name in ("system valid (identity, cocycle)", "edges IP on truncations",
                 "edges not lattice homomorphisms", "images coincide"):
        assert rep.claim(name).status == "pass"
    iso = rep.claim("legs isometric (sampled)")
    assert iso.status == "inconclusive" and not iso.required


def test_sup_norm_bundle_prints_bound():
    rep = oc.build_example("5.3", 0).run()
    assert "lower bound = 1/2 (exact)" in rep.notes


def test_unknown_example():
    with pytest.raises(UnknownExample):
        oc.build_example("9.9")


@pytest.mark.parametrize("ex_id", oc.EXAMPLE_IDS)
def test_shipped_claims_files_match(ex_id):
    path = resources.files("latlim") / "bundles" / f"example-{ex_id}.claims.json"
    shipped = json.loads(path.read_text())
    assert shipped["claims"] == oc.build_example(ex_id, 0).expected_claims
