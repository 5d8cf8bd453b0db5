"""Black box construction, shadow verification and cheater elimination."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.models.access import AccessStructure
from app.models.blackbox import CheatReason, ShadowPair
from app.models.field import FieldMatrix, FieldVector, Modulus
from app.models.sharing import SecretVector, ShareBundle
from app.services import worked_example as wx
from app.services.blackbox_service import BlackBoxService
from app.services.lmss_service import LmssService
from app.utils.errors import DimensionMismatch
from app.utils.rng import make_rng

Z7 = Modulus(7)


def _pair(values):
    return ShadowPair(FieldVector.of(Z7, values[0]), FieldVector.of(Z7, values[1]))


def _unordered(pair):
    return {tuple(pair.y1.to_list()), tuple(pair.y2.to_list())}


@pytest.fixture
def bundle():
    return LmssService.distribute(
        wx.build_msp(), SecretVector.of(Z7, wx.SECRETS), make_rng(0), FieldVector.of(Z7, wx.RHO_TAIL)
    )


@pytest.fixture
def built(bundle):
    return BlackBoxService.build(bundle, make_rng(0), y_override=FieldMatrix.from_rows(Z7, wx.Y_ROWS))


class TestBuild:

    def test_sigma_doubles_every_share(self, bundle):
        sigma = BlackBoxService.sigma_matrix(bundle)
        assert np.diag(sigma.entries).tolist() == [4, 4, 5, 5, 6, 6, 3, 3]

    def test_issued_shadows_match_reference_pairs(self, built):
        _, shadows = built
        for p, reference in wx.REFERENCE_SHADOWS.items():
            assert _unordered(shadows[p]) == _unordered(_pair(reference))

    def test_state_keeps_shares_and_owners(self, built):
        state, _ = built
        assert state.stored_shares.to_list() == [4, 5, 6, 3]
        assert state.row_owners == (1, 2, 3, 4)
        assert [state.share_of(p) for p in (1, 2, 3, 4)] == [4, 5, 6, 3]

    def test_y_override_must_fit(self, bundle):
        with pytest.raises(DimensionMismatch):
            BlackBoxService.build(bundle, make_rng(0), y_override=FieldMatrix.identity(Z7, 6))

    def test_custom_owners(self, bundle):
        state, shadows = BlackBoxService.build(bundle, make_rng(1), row_owners=(4, 3, 2, 1))
        assert sorted(shadows) == [1, 2, 3, 4]
        assert state.share_of(4) == 4
        assert BlackBoxService.verify_shadows(state, 4, shadows[4]).share == 4


class TestVerifyShadows:

    @pytest.mark.parametrize('participant,share', [(1, 4), (2, 5), (3, 6), (4, 3)])
    def test_reference_shadows_are_accepted(self, built, participant, share):
        state, _ = built
        verdict = BlackBoxService.verify_shadows(state, participant, _pair(wx.REFERENCE_SHADOWS[participant]))
        assert verdict.accepted
        assert verdict.share == share
        assert verdict.to_dict() == {'participant': participant, 'verdict': 'honest'}

    def test_someone_elses_shadows(self, built):
        state, shadows = built
        verdict = BlackBoxService.verify_shadows(state, 1, shadows[2])
        assert verdict.reason is CheatReason.EIGENVALUE_MISMATCH
        assert verdict.share is None

    def test_dependent_pair(self, built):
        state, shadows = built
        y = shadows[1].y1
        verdict = BlackBoxService.verify_shadows(state, 1, ShadowPair(y, y.scale(3)))
        assert verdict.reason is CheatReason.DEPENDENT_SHADOWS

    def test_zero_vector_is_dependent(self, built):
        state, shadows = built
        pair = ShadowPair(FieldVector.zeros(Z7, 8), shadows[1].y2)
        assert BlackBoxService.verify_shadows(state, 1, pair).reason is CheatReason.DEPENDENT_SHADOWS

    def test_mixed_eigenspaces(self, built):
        state, shadows = built
        pair = ShadowPair(shadows[1].y1 + shadows[2].y1, shadows[1].y2)
        verdict = BlackBoxService.verify_shadows(state, 1, pair)
        assert verdict.reason is CheatReason.NOT_EIGENVECTOR
        assert verdict.to_dict() == {'participant': 1, 'verdict': 'cheater', 'reason': 'not_eigenvector'}

    def test_one_good_one_foreign_vector(self, built):
        state, shadows = built
        pair = ShadowPair(shadows[1].y1, shadows[3].y2)
        assert BlackBoxService.verify_shadows(state, 1, pair).reason is CheatReason.EIGENVALUE_MISMATCH

    def test_wrong_length(self, built):
        state, _ = built
        with pytest.raises(DimensionMismatch):
            BlackBoxService.verify_shadows(state, 1, _pair(([1, 0], [0, 1])))

    def test_unknown_participant(self, built):
        state, shadows = built
        with pytest.raises(ValueError):
            BlackBoxService.verify_shadows(state, 5, shadows[1])

    def test_random_forgeries_are_rejected(self, built):
        state, _ = built
        rng = make_rng(2024)
        for _ in range(500):
            forged = BlackBoxService.random_forged_pair(Z7, 4, rng)
            assert not BlackBoxService.verify_shadows(state, 1, forged).accepted

    def test_equal_shares_accept_each_others_shadows(self):
        shares = FieldVector.of(Z7, [3, 3])
        bundle = ShareBundle(Z7, shares, shares)
        state, shadows = BlackBoxService.build(bundle, make_rng(5))
        assert BlackBoxService.verify_shadows(state, 2, shadows[1]).accepted


class TestCompleteness:

    def test_thousand_builds_of_the_worked_example(self, bundle):
        rng = make_rng(7)
        for _ in range(1000):
            state, shadows = BlackBoxService.build(bundle, rng)
            for p, pair in shadows.items():
                assert BlackBoxService.verify_shadows(state, p, pair).share == state.share_of(p)

    @settings(max_examples=50, deadline=None)
    @given(
        st.sampled_from([2, 3, 5, 7, 11]),
        st.integers(min_value=1, max_value=5),
        st.integers(min_value=0, max_value=2 ** 32 - 1)
    )
    def test_any_shares_any_seed(self, d, m, seed):
        modulus = Modulus(d)
        rng = make_rng(seed)
        shares = FieldVector(modulus, rng.integers(0, d, size=m))
        state, shadows = BlackBoxService.build(ShareBundle(modulus, shares, shares), rng)
        assert sorted(shadows) == list(range(1, m + 1))
        for p, pair in shadows.items():
            verdict = BlackBoxService.verify_shadows(state, p, pair)
            assert verdict.accepted
            assert verdict.share == shares[p - 1]


def _in_eigenspace(x_matrix, value, vectors):
    """Mask of the rows y of `vectors` with X y = value·y mod d."""
    d = x_matrix.modulus.d
    shifted = (x_matrix.entries - value * np.eye(x_matrix.rows, dtype=np.int64)) % d
    return ((vectors @ shifted.T) % d == 0).all(axis=1)


def _blind_forgeries(state, claimed, count, rng):
    """
    Verify `count` uniform random pairs submitted as `claimed`.

    Only pairs with both vectors in the claimed share's eigenspace can
    pass, so the real verifier runs on those plus a few others.
    """
    modulus = state.modulus
    y1 = rng.integers(0, modulus.d, size=(count, 2 * state.m), dtype=np.int64)
    y2 = rng.integers(0, modulus.d, size=(count, 2 * state.m), dtype=np.int64)
    share = state.share_of(claimed)
    hits = _in_eigenspace(state.x_matrix, share, y1) & _in_eigenspace(state.x_matrix, share, y2)
    accepted = 0
    for k in np.nonzero(hits)[0]:
        pair = ShadowPair(FieldVector(modulus, y1[k]), FieldVector(modulus, y2[k]))
        accepted += BlackBoxService.verify_shadows(state, claimed, pair).accepted
    for k in np.nonzero(~hits)[0][:5]:
        pair = ShadowPair(FieldVector(modulus, y1[k]), FieldVector(modulus, y2[k]))
        assert not BlackBoxService.verify_shadows(state, claimed, pair).accepted
    return accepted


class TestSoundness:
    """Blind forgeries against Black boxes with distinct random shares."""

    def test_hundred_thousand_forgeries_never_pass(self):
        rng = make_rng(31337)
        builds, per_build = 100, 1000
        accepted = 0
        moduli = set()
        for _ in range(builds):
            d = int(rng.choice([7, 11, 13]))
            m = int(rng.integers(4, 7))
            modulus = Modulus(d)
            shares = FieldVector(modulus, rng.choice(d, size=m, replace=False))
            state, _ = BlackBoxService.build(ShareBundle(modulus, shares, shares), rng)
            claimed = int(rng.integers(1, m + 1))
            accepted += _blind_forgeries(state, claimed, per_build, rng)
            moduli.add(d)
        assert builds * per_build == 100_000
        assert len(moduli) > 1
        assert accepted == 0

    def test_small_fields_accept_at_the_predicted_rate(self):
        # Eigenspaces are 2-dimensional, so a blind pair passes with
        # probability (d²-1)(d²-d)/d^(4m)
        d, m, trials = 3, 2, 20_000
        modulus = Modulus(d)
        shares = FieldVector.of(modulus, [1, 2])
        state, _ = BlackBoxService.build(ShareBundle(modulus, shares, shares), make_rng(3))
        accepted = _blind_forgeries(state, 1, trials, make_rng(4))
        expected = trials * (d ** 2 - 1) * (d ** 2 - d) / d ** (4 * m)
        assert abs(accepted - expected) <= 6 * np.sqrt(expected)


class TestIdentifyAndRelease:

    def test_all_honest(self, built):
        state, shadows = built
        gamma = AccessStructure.of(*wx.GAMMA_1)
        report, released = BlackBoxService.identify_and_release(
            state, {p: shadows[p] for p in (1, 2, 3)}, gamma
        )
        assert not report.aborted
        assert report.honest() == (1, 2, 3)
        assert released == {1: 4, 2: 5, 3: 6}

    def test_cheater_breaks_authorization(self, built):
        state, shadows = built
        gamma = AccessStructure.of(*wx.GAMMA_1)
        submissions = {1: shadows[1], 2: shadows[3], 3: shadows[3]}
        report, released = BlackBoxService.identify_and_release(state, submissions, gamma)
        assert report.aborted
        assert released is None
        assert report.cheaters() == {2: CheatReason.EIGENVALUE_MISMATCH}

    def test_cheater_removed_and_rest_still_authorized(self, built):
        state, shadows = built
        gamma = AccessStructure.of(*wx.GAMMA_1)
        submissions = {p: shadows[p] for p in (1, 2, 3)}
        submissions[4] = BlackBoxService.random_forged_pair(Z7, 4, make_rng(1))
        report, released = BlackBoxService.identify_and_release(state, submissions, gamma)
        assert not report.aborted
        assert set(report.cheaters()) == {4}
        assert released == {1: 4, 2: 5, 3: 6}

    def test_report_dict(self, built):
        state, shadows = built
        report, _ = BlackBoxService.identify_and_release(
            state, {p: shadows[p] for p in (1, 2, 3, 4)}, AccessStructure.of([1, 2, 3, 4])
        )
        data = report.to_dict()
        assert data['aborted'] is False
        assert [v['participant'] for v in data['verdicts']] == [1, 2, 3, 4]
