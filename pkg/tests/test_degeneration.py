import random

import pytest

from borderlab import (
    PlacementError,
    PrimeField,
    QQ,
    SizeGuardError,
    Tensor,
    build_planted_tensor,
    build_pyramid,
    certify_lower_bound,
    hypercube_dichotomy,
    jacobian_dominance_rank,
    limit_at_zero,
    min_slice_cover,
    pyramid_size,
    pyramid_weight_profile,
    recheck_certificate,
    recognize_unit_tensor,
    unit_tensor,
)
from borderlab.degeneration import (
    WeightProfile,
    default_rank,
    fit_bound,
    is_downward_closed,
    restriction_agrees,
)


# ---------------------------------------------------------------------------
# weight profiles
# ---------------------------------------------------------------------------

def test_profile_9_3_third_factor():
    profile = pyramid_weight_profile(9, 3)
    assert profile.weights[2] == (-16, -8, -4, 0, 0, 0, 0, 0, 0)
    assert profile.weights[0] == tuple(2 ** j for j in range(1, 10))
    assert profile.weights[0] == profile.weights[1]


def test_profile_smallest():
    # third-factor weight -2^(r-l+2) = -4; the corner 2 + 2 - 4 = 0 is the
    # whole zero locus, which is what makes S nonzero at this size
    profile = pyramid_weight_profile(1, 1)
    assert profile.weights == ((2,), (2,), (-4,))


def test_profile_monotone():
    for n in (1, 2, 5, 17, 40, 64):
        for r in (1, n // 2 or 1, n):
            profile = pyramid_weight_profile(n, r)
            for ws in profile.weights:
                assert all(ws[i] <= ws[i + 1] for i in range(len(ws) - 1))


def test_profile_validation():
    with pytest.raises(ValueError):
        pyramid_weight_profile(3, 4)
    with pytest.raises(ValueError):
        WeightProfile(dims=(2,), weights=((3, 1),))


# ---------------------------------------------------------------------------
# the pyramid
# ---------------------------------------------------------------------------

def test_pyramid_corners_r4():
    pattern = build_pyramid(pyramid_weight_profile(6, 4))
    assert pattern.zero_set == {(4, 4, 1), (3, 3, 2), (2, 2, 3), (1, 1, 4)}


def test_pyramid_size_r3():
    pattern = build_pyramid(pyramid_weight_profile(9, 3))
    assert pattern.size == 14 == pyramid_size(3)


def test_pyramid_r1():
    pattern = build_pyramid(pyramid_weight_profile(1, 1))
    assert pattern.positions == {(1, 1, 1)} == pattern.zero_set


def test_pyramid_closed_form_grid():
    # build_pyramid self-checks the closed form for canonical profiles
    for n in range(1, 33):
        for r in range(1, n + 1):
            build_pyramid(pyramid_weight_profile(n, r))
    for n, r in ((48, 10), (64, 13), (64, 64)):
        build_pyramid(pyramid_weight_profile(n, r))


def test_pyramid_downward_closed():
    pattern = build_pyramid(pyramid_weight_profile(9, 3))
    assert is_downward_closed(pattern.positions, 3)


# ---------------------------------------------------------------------------
# the planted tensor
# ---------------------------------------------------------------------------

def test_planted_tensor_9_3_layout():
    t_tilde, s_tensor, placements = build_planted_tensor(QQ, 9, 3)
    spots = {(p.s, p.layer, p.axis, p.start) for p in placements}
    assert spots == {(0, 3, "j", 4), (1, 2, "k", 4), (2, 1, "j", 5)}
    assert sorted(pos for pos, _ in s_tensor.support()) == [(1, 1, 3), (2, 2, 2), (3, 3, 1)]
    pattern = build_pyramid(pyramid_weight_profile(9, 3))
    assert restriction_agrees(t_tilde, s_tensor, pattern)
    # identity blocks land where the placements say
    assert t_tilde.get((4, 1, 3)) == QQ.one()
    assert t_tilde.get((1, 4, 2)) == QQ.one() and t_tilde.get((2, 5, 2)) == QQ.one()
    assert t_tilde.get((1, 5, 2)) == QQ.zero()  # off-diagonal of the identity block
    assert all(t_tilde.get((5 + i, 1 + i, 1)) == QQ.one() for i in range(3))


def test_planted_tensor_fit_boundaries():
    # exactly at the boundary the greedy packing succeeds
    for n, r in ((16, 5), (25, 7), (64, 13)):
        t_tilde, _, placements = build_planted_tensor(QQ, n, r)
        assert len(placements) == r
        for p in placements:
            assert p.interval[1] <= n
    with pytest.raises(PlacementError) as err:
        build_planted_tensor(QQ, 10, 4)
    assert "(r+3)^2/4" in str(err.value)
    assert fit_bound(4) == 13


def test_planted_intervals_disjoint():
    _, _, placements = build_planted_tensor(QQ, 64, 13)
    for axis in ("j", "k"):
        spans = sorted(p.interval for p in placements if p.axis == axis)
        for (a1, b1), (a2, b2) in zip(spans, spans[1:]):
            assert b1 < a2
        assert all(a >= 14 for a, _ in spans)  # packed from r+1


def test_limit_of_planted_tensor_is_diagonal():
    for n, r in ((9, 3), (16, 5)):
        field = PrimeField(101)
        t_tilde, s_tensor, _ = build_planted_tensor(field, n, r)
        lam = pyramid_weight_profile(n, r).subgroup(field)
        assert limit_at_zero(lam, t_tilde) == s_tensor
        assert recognize_unit_tensor(s_tensor) == r


# ---------------------------------------------------------------------------
# Jacobian rank
# ---------------------------------------------------------------------------

def test_jacobian_rank_9_3():
    field = PrimeField(1000003)
    t_tilde, _, _ = build_planted_tensor(field, 9, 3)
    pattern = build_pyramid(pyramid_weight_profile(9, 3))
    assert jacobian_dominance_rank(t_tilde, pattern, field) == 14


def test_jacobian_rank_over_rationals():
    t_tilde, _, _ = build_planted_tensor(QQ, 9, 3)
    pattern = build_pyramid(pyramid_weight_profile(9, 3))
    assert jacobian_dominance_rank(t_tilde, pattern, QQ) == 14


def test_jacobian_rank_without_blocks_drops():
    field = PrimeField(1000003)
    for n, r in ((9, 3), (8, 2)):
        _, s_tensor, _ = build_planted_tensor(field, n, r)
        pattern = build_pyramid(pyramid_weight_profile(n, r))
        assert jacobian_dominance_rank(s_tensor, pattern, field) < pattern.size


def test_jacobian_rank_r1_diagonal_only():
    field = QQ
    _, s_tensor, _ = build_planted_tensor(field, 4, 1)
    pattern = build_pyramid(pyramid_weight_profile(4, 1))
    assert jacobian_dominance_rank(s_tensor, pattern, field) == 1


def test_deleting_one_block_drops_rank():
    field = PrimeField(1000003)
    n, r = 9, 3
    t_tilde, _, placements = build_planted_tensor(field, n, r)
    pattern = build_pyramid(pyramid_weight_profile(n, r))
    dropped = 0
    for block in placements:
        entries = {}
        for pos, v in t_tilde.support():
            j, k, l = pos
            if l == block.layer:
                lo, hi = block.interval
                if block.axis == "j" and lo <= j <= hi and 1 <= k <= block.s + 1:
                    continue
                if block.axis == "k" and lo <= k <= hi and 1 <= j <= block.s + 1:
                    continue
            entries[pos] = v
        stripped = Tensor.from_entries(field, t_tilde.dims, entries)
        if jacobian_dominance_rank(stripped, pattern, field) < pattern.size:
            dropped += 1
    assert dropped >= 1


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

def test_certify_9():
    cert = certify_lower_bound(9)
    assert cert.verdict == "Certified"
    assert (cert.r, cert.jacobian_rank, cert.pyramid_size) == (3, 14, 14)
    assert cert.prime is not None and cert.prime.bit_length() == 62


def test_certify_8_default_rank():
    assert default_rank(8) == 2
    cert = certify_lower_bound(8)
    assert cert.verdict == "Certified"
    assert (cert.r, cert.pyramid_size) == (2, 5)


def test_certify_49():
    cert = certify_lower_bound(49)
    assert cert.verdict == "Certified"
    assert (cert.r, cert.jacobian_rank) == (11, 506)


def test_certify_over_rationals():
    cert = certify_lower_bound(9, field=QQ)
    assert cert.verdict == "Certified"
    assert cert.prime is None


def test_certify_rejects_tiny_n_without_r():
    with pytest.raises(ValueError):
        certify_lower_bound(3)


def test_recheck_round_trip_and_tamper():
    cert = certify_lower_bound(9, rng=random.Random(4))
    results = recheck_certificate(cert, rng=random.Random(99))
    assert all(ok for _, ok, _ in results)

    # tamper inside the pyramid: the restriction clause must fail
    import dataclasses

    entries = dict(cert.t_tilde.support())
    entries[(1, 1, 1)] = cert.t_tilde.field.one()  # (1,1,1) is in P but not in S
    tampered = dataclasses.replace(
        cert, t_tilde=Tensor.from_entries(cert.t_tilde.field, cert.t_tilde.dims, entries)
    )
    results = recheck_certificate(tampered, rng=random.Random(99))
    by_clause = {clause: ok for clause, ok, _ in results}
    assert by_clause["restriction"] is False


# ---------------------------------------------------------------------------
# dichotomy and slice covers
# ---------------------------------------------------------------------------

def test_dichotomy_full_cube():
    cube = {(i, j, k) for i in (1, 2) for j in (1, 2) for k in (1, 2)}
    out = hypercube_dichotomy(cube, 2, 3)
    assert out.kind == "hypercube"
    assert out.hypercube == frozenset(cube)


def test_dichotomy_cover_three_slices():
    pts = {
        (j, k, l)
        for j in (1, 2, 3)
        for k in (1, 2, 3)
        for l in (1, 2, 3)
        if 1 in (j, k, l)
    }
    out = hypercube_dichotomy(pts, 2, 3)
    assert out.kind == "cover"
    assert set(out.cover) == {(0, 1), (1, 1), (2, 1)}
    assert out.cover_size == 3  # d*(s-1)


def test_dichotomy_on_pyramid():
    pattern = build_pyramid(pyramid_weight_profile(6, 4))
    # (2,2,2) is inside the rank-4 pyramid, (3,3,3) is not
    assert hypercube_dichotomy(pattern.positions, 2, 3).kind == "hypercube"
    assert hypercube_dichotomy(pattern.positions, 3, 3).kind == "cover"


def test_dichotomy_rejects_non_downward_closed():
    with pytest.raises(ValueError):
        hypercube_dichotomy({(2, 2)}, 2, 2)


def test_min_slice_cover_unit_supports():
    for r in (1, 2, 3):
        support = {pos for pos, _ in unit_tensor(QQ, r, 3).support()}
        assert min_slice_cover(support, (r,) * 3) == r


def test_min_slice_cover_single_slice():
    support = {(1, k, l) for k in (1, 2, 3) for l in (1, 2, 3)}
    assert min_slice_cover(support, (3, 3, 3)) == 1


def test_min_slice_cover_pyramid_r3():
    pattern = build_pyramid(pyramid_weight_profile(3, 3))
    assert min_slice_cover(pattern.positions, (3, 3, 3)) == 3


def test_min_slice_cover_guard():
    support = {(i, 1) for i in range(1, 10)}
    with pytest.raises(SizeGuardError):
        min_slice_cover(support, (9, 9))
