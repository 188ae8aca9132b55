import numpy as np
import pytest

from conftest import random_psd
from pba_workbench.beliefs import (
    BeliefSpec,
    JointBelief,
    VariableSet,
    adjust_expectation,
    adjust_variance,
    check_coherence,
)
from pba_workbench.errors import CoherenceError, InvalidInput, ShapeError


def scalar_joint(var_b=4.0, var_d=1.0, cov=1.0, pb=0.0, pd=0.0):
    return JointBelief(
        prevision_b=[pb], prevision_d=[pd],
        var_b=[[var_b]], var_d=[[var_d]], cov_bd=[[cov]],
    )


class TestVariableSet:
    def test_requires_unique_nonempty_names(self):
        with pytest.raises(InvalidInput):
            VariableSet(names=("a", "a"))
        with pytest.raises(InvalidInput):
            VariableSet(names=("a", ""))
        with pytest.raises(InvalidInput):
            VariableSet(names=())

    def test_defaults(self):
        vs = VariableSet(names=("a", "b"))
        assert vs.units == ("", "")
        assert vs.integral == (False, False)
        assert vs.index("b") == 1


class TestBeliefSpec:
    def test_rejects_indefinite_covariance(self):
        with pytest.raises(CoherenceError):
            BeliefSpec(
                variables=VariableSet(names=("a", "b")),
                prevision=[0.0, 0.0],
                covariance=[[1.0, 2.0], [2.0, 1.0]],
            )

    def test_repair_mode_clips_and_warns(self):
        with pytest.warns(UserWarning, match="Frobenius"):
            spec = BeliefSpec(
                variables=VariableSet(names=("a", "b")),
                prevision=[0.0, 0.0],
                covariance=[[1.0, 2.0], [2.0, 1.0]],
                repair=True,
            )
        assert np.linalg.eigvalsh(spec.covariance)[0] >= -1e-12

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            BeliefSpec(
                variables=VariableSet(names=("a", "b")),
                prevision=[0.0],
                covariance=np.eye(2),
            )


class TestCoherence:
    def test_independent_blocks_pass(self):
        j = JointBelief(
            prevision_b=np.zeros(2), prevision_d=np.zeros(2),
            var_b=np.eye(2), var_d=np.eye(2), cov_bd=np.zeros((2, 2)),
        )
        verdict = check_coherence(j)
        assert verdict.passed
        assert all(c.passed for c in verdict.conditions)

    def test_overcorrelated_scalar_fails_schur(self):
        verdict = check_coherence(scalar_joint(var_b=1.0, var_d=1.0, cov=1.2))
        assert not verdict.passed
        failed = {c.name for c in verdict.failures()}
        assert failed == {"schur_psd"}  # 1 - 1.44 < 0

    def test_range_condition_detected(self):
        # Var(D) singular in the direction cov points through
        j = JointBelief(
            prevision_b=[0.0], prevision_d=[0.0, 0.0],
            var_b=[[1.0]], var_d=[[1.0, 0.0], [0.0, 0.0]], cov_bd=[[0.0, 0.5]],
        )
        verdict = check_coherence(j)
        assert not verdict.passed
        assert "cov_in_range" in {c.name for c in verdict.failures()}

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            JointBelief(
                prevision_b=[0.0], prevision_d=[0.0],
                var_b=[[1.0]], var_d=[[1.0]], cov_bd=[[1.0, 0.0]],
            )


class TestAdjustment:
    def test_uninformative_data_leaves_prevision(self):
        j = JointBelief(
            prevision_b=[1.0, 2.0], prevision_d=[0.0],
            var_b=np.eye(2), var_d=[[1.0]], cov_bd=np.zeros((2, 1)),
        )
        np.testing.assert_allclose(adjust_expectation(j, [37.0]), [1.0, 2.0])
        np.testing.assert_allclose(adjust_variance(j), np.eye(2))

    def test_scalar_example(self):
        j = scalar_joint()
        assert adjust_expectation(j, [3.0]) == pytest.approx([3.0])  # 0 + 1*1*3
        np.testing.assert_allclose(adjust_variance(j), [[3.0]])  # 4 - 1

    def test_incoherent_prior_refused(self):
        with pytest.raises(CoherenceError):
            adjust_expectation(scalar_joint(var_b=1.0, var_d=1.0, cov=1.2), [1.0])

    def test_observation_shape_checked(self):
        with pytest.raises(ShapeError):
            adjust_expectation(scalar_joint(), [1.0, 2.0])

    def test_adjusted_diagonal_never_exceeds_prior(self, rng):
        for _ in range(25):
            nb, nd = rng.integers(1, 5, size=2)
            joint = random_psd(rng, nb + nd)
            j = JointBelief(
                prevision_b=rng.normal(size=nb), prevision_d=rng.normal(size=nd),
                var_b=joint[:nb, :nb], var_d=joint[nb:, nb:], cov_bd=joint[:nb, nb:],
            )
            adj = adjust_variance(j)
            assert np.all(np.diag(adj) <= np.diag(j.var_b) + 1e-9 * max(1, np.abs(joint).max()))

    def test_projection_orthogonality_and_idempotence(self, rng):
        for _ in range(25):
            nb, nd = rng.integers(1, 5, size=2)
            joint = random_psd(rng, nb + nd)
            pb, pd = rng.normal(size=nb), rng.normal(size=nd)
            j = JointBelief(
                prevision_b=pb, prevision_d=pd,
                var_b=joint[:nb, :nb], var_d=joint[nb:, nb:], cov_bd=joint[:nb, nb:],
            )
            scale = max(np.abs(joint).max(), 1.0)
            from pba_workbench.linalg import pseudo_inverse

            resolver = j.cov_bd @ pseudo_inverse(j.var_d)
            residual_cov = j.cov_bd - resolver @ j.var_d
            assert np.abs(residual_cov).max(initial=0.0) <= 1e-8 * scale

            # adjusting again by the same data changes nothing
            d = rng.normal(size=nd)
            once = adjust_expectation(j, d)
            j2 = JointBelief(
                prevision_b=once, prevision_d=pd,
                var_b=adjust_variance(j), var_d=j.var_d, cov_bd=residual_cov,
            )
            twice = adjust_expectation(j2, d)
            np.testing.assert_allclose(twice, once, rtol=0, atol=1e-8 * max(np.abs(once).max(), 1))
            np.testing.assert_allclose(
                adjust_variance(j2), j2.var_b, rtol=0, atol=1e-8 * scale
            )

    def test_pythagoras_decomposition(self, rng):
        # Var(B - d) = Var(B - adjusted(B)) + Var(adjusted(B) - d) for affine d of D
        for _ in range(25):
            nb, nd = rng.integers(1, 5, size=2)
            joint = random_psd(rng, nb + nd)
            j = JointBelief(
                prevision_b=rng.normal(size=nb), prevision_d=rng.normal(size=nd),
                var_b=joint[:nb, :nb], var_d=joint[nb:, nb:], cov_bd=joint[:nb, nb:],
            )
            from pba_workbench.linalg import pseudo_inverse

            lmap = rng.normal(size=(nb, nd))
            resolver = j.cov_bd @ pseudo_inverse(j.var_d)
            var_b_minus_d = j.var_b - j.cov_bd @ lmap.T - lmap @ j.cov_bd.T + lmap @ j.var_d @ lmap.T
            var_adj_minus_d = (resolver - lmap) @ j.var_d @ (resolver - lmap).T
            lhs = var_b_minus_d
            rhs = adjust_variance(j) + var_adj_minus_d
            scale = max(np.abs(lhs).max(), np.abs(rhs).max(), 1.0)
            assert np.abs(lhs - rhs).max() <= 1e-8 * scale
