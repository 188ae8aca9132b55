import numpy as np
import pytest

from conftest import (
    full_output_joint,
    random_batch,
    random_structure,
    stacked_values,
)
from pba_workbench.beliefs import BeliefSpec, JointBelief, VariableSet, adjust_expectation
from pba_workbench.errors import EmptyClass, IncoherentElicitation, ShapeError
from pba_workbench.synthesis import (
    ClassStructure,
    ModelOutput,
    ModelOutputBatch,
    convergence_limit,
    derive_weights,
    dominance_check,
    pba,
    sample_means,
)

V1 = VariableSet(names=("x",))


def one_d_two_classes(var_x=1.0):
    """Two scalar classes: Var(mu_i)=1, Cov(mu_1,mu_2)=0, Cov(X,mu)=(0.5, 0.25)."""
    prior = BeliefSpec(variables=V1, prevision=[0.0], covariance=[[var_x]])
    cs = ClassStructure(
        quantity=V1,
        class_labels=("a", "b"),
        n=(1, 1),
        prevision_mu=[0.0, 0.0],
        var_mu=np.eye(2),
        var_resid=(np.array([[0.5]]), np.array([[0.5]])),
        cov_x_mu=np.array([[0.5, 0.25]]),
    )
    return prior, cs


class TestSampleMeans:
    def test_mean_of_identical_outputs(self):
        cs = ClassStructure(
            quantity=V1, class_labels=("a",), n=(2,), prevision_mu=[0.0],
            var_mu=[[1.0]], var_resid=([[0.5]],), cov_x_mu=[[0.5]],
        )
        z = np.array([3.0])
        batch = ModelOutputBatch(
            variables=V1, outputs={"a": (ModelOutput("m1", z), ModelOutput("m2", z))}
        )
        sm = sample_means(cs, batch)
        np.testing.assert_allclose(sm.zbar, z)

    def test_two_member_class_halves_residual(self):
        cs = ClassStructure(
            quantity=V1, class_labels=("a",), n=(2,), prevision_mu=[0.0],
            var_mu=[[1.0]], var_resid=([[0.5]],), cov_x_mu=[[0.5]],
        )
        batch = ModelOutputBatch(
            variables=V1, outputs={"a": (ModelOutput("m1", [1.0]), ModelOutput("m2", [2.0]))}
        )
        sm = sample_means(cs, batch)
        np.testing.assert_allclose(sm.zbar, [1.5])
        np.testing.assert_allclose(sm.var_zbar, [[1.0 + 0.5 / 2]])

    def test_large_count_limit_is_mean_variance(self):
        n = 100_000
        cs = ClassStructure(
            quantity=V1, class_labels=("a",), n=(n,), prevision_mu=[0.0],
            var_mu=[[1.0]], var_resid=([[0.5]],), cov_x_mu=[[0.5]],
        )
        batch = ModelOutputBatch(
            variables=V1, outputs={"a": tuple(ModelOutput(f"m{i}", [0.0]) for i in range(n))}
        )
        sm = sample_means(cs, batch)
        assert sm.var_zbar[0, 0] == pytest.approx(1.0, abs=1e-4)

    def test_missing_class_is_empty_class(self):
        prior, cs = one_d_two_classes()
        batch = ModelOutputBatch(variables=V1, outputs={"a": (ModelOutput("m1", [1.0]),)})
        with pytest.raises(EmptyClass):
            sample_means(cs, batch)

    def test_count_mismatch_is_shape_error(self):
        cs = ClassStructure(
            quantity=V1, class_labels=("a",), n=(2,), prevision_mu=[0.0],
            var_mu=[[1.0]], var_resid=([[0.5]],), cov_x_mu=[[0.5]],
        )
        batch = ModelOutputBatch(variables=V1, outputs={"a": (ModelOutput("m1", [1.0]),)})
        with pytest.raises(ShapeError):
            sample_means(cs, batch)


class TestDeriveWeights:
    def test_perfect_proxy_class(self, rng):
        vs = VariableSet(names=("a", "b"))
        var_mu = np.array([[2.0, 0.3], [0.3, 1.0]])
        var_x = var_mu + np.diag([0.5, 0.2])
        prior = BeliefSpec(variables=vs, prevision=[1.0, 2.0], covariance=var_x)
        cs = ClassStructure(
            quantity=vs, class_labels=("only",), n=(1,), prevision_mu=[0.5, 0.5],
            var_mu=var_mu, var_resid=(np.eye(2) * 0.1,), cov_x_mu=var_mu,
        )
        w = derive_weights(prior, cs)
        np.testing.assert_allclose(w.a, np.eye(2), atol=1e-10)
        np.testing.assert_allclose(w.prevision_u, [0.5, 1.5])
        np.testing.assert_allclose(w.var_u, np.diag([0.5, 0.2]), atol=1e-10)

    def test_one_d_two_class_hand_solve(self):
        prior, cs = one_d_two_classes()
        w = derive_weights(prior, cs)
        np.testing.assert_allclose(w.a, [[0.5, 0.25]])
        np.testing.assert_allclose(w.var_u, [[1.0 - 0.3125]])

    def test_indefinite_discrepancy_rejected(self):
        prior = BeliefSpec(variables=V1, prevision=[0.0], covariance=[[1.0]])
        cs = ClassStructure(
            quantity=V1, class_labels=("a",), n=(1,), prevision_mu=[0.0],
            var_mu=[[1.0]], var_resid=([[0.1]],), cov_x_mu=[[2.0]],
        )
        with pytest.raises(IncoherentElicitation, match="over-claim"):
            derive_weights(prior, cs)

    def test_weight_consistency_by_construction(self, rng):
        for _ in range(20):
            prior, cs = random_structure(rng)
            w = derive_weights(prior, cs)
            lhs = prior.covariance
            rhs = w.a @ cs.var_mu @ w.a.T + w.var_u
            scale = max(np.abs(lhs).max(), 1.0)
            assert np.abs(lhs - rhs).max() <= 1e-8 * scale

    def test_minimum_norm_solution_under_rank_deficiency(self, rng):
        for _ in range(10):
            prior, cs = random_structure(rng, rank_deficient=True)
            w = derive_weights(prior, cs)
            # A Var(mu) must still reproduce Cov(X, mu)
            scale = max(np.abs(cs.cov_x_mu).max(), 1.0)
            assert np.abs(w.a @ cs.var_mu - cs.cov_x_mu).max() <= 1e-7 * scale


class TestPba:
    def test_zero_informative_classes_change_nothing(self):
        prior = BeliefSpec(variables=V1, prevision=[5.0], covariance=[[2.0]])
        cs = ClassStructure(
            quantity=V1, class_labels=("a",), n=(1,), prevision_mu=[1.0],
            var_mu=[[1.0]], var_resid=([[0.5]],), cov_x_mu=[[0.0]],
        )
        batch = ModelOutputBatch(variables=V1, outputs={"a": (ModelOutput("m1", [10.0]),)})
        report = pba(prior, cs, batch)
        np.testing.assert_allclose(report.pba, [5.0])
        np.testing.assert_allclose(report.resolved_pct, [0.0], atol=1e-9)
        np.testing.assert_allclose(report.max_resolvable_pct, [0.0], atol=1e-9)

    def test_two_stage_equals_one_stage(self, rng):
        for _ in range(20):
            prior, cs = random_structure(rng)
            batch = random_batch(rng, cs)
            report = pba(prior, cs, batch)
            prevision_z, var_z, _, cov_x_z = full_output_joint(cs)
            joint = JointBelief(
                prevision_b=prior.prevision, prevision_d=prevision_z,
                var_b=prior.covariance, var_d=var_z, cov_bd=cov_x_z,
            )
            direct = adjust_expectation(joint, stacked_values(cs, batch))
            scale = max(np.abs(direct).max(), 1.0)
            assert np.abs(report.pba - direct).max() <= 1e-8 * scale

    def test_sample_mean_sufficiency(self, rng):
        for n_fixture in (1, 2, 5):
            prior, cs = random_structure(rng, q=2, m=2)
            cs = cs.with_counts((n_fixture, n_fixture))
            batch = random_batch(rng, cs)
            sm = sample_means(cs, batch)
            mean_joint = JointBelief(
                prevision_b=cs.prevision_mu, prevision_d=cs.prevision_mu,
                var_b=cs.var_mu, var_d=sm.var_zbar, cov_bd=cs.var_mu,
            )
            via_means = adjust_expectation(mean_joint, sm.zbar)
            prevision_z, var_z, cov_mu_z, _ = full_output_joint(cs)
            full_joint = JointBelief(
                prevision_b=cs.prevision_mu, prevision_d=prevision_z,
                var_b=cs.var_mu, var_d=var_z, cov_bd=cov_mu_z,
            )
            via_all = adjust_expectation(full_joint, stacked_values(cs, batch))
            scale = max(np.abs(via_all).max(), 1.0)
            assert np.abs(via_means - via_all).max() <= 1e-8 * scale

    def test_resolution_accounting_bounds(self, rng):
        for _ in range(20):
            prior, cs = random_structure(rng)
            report = pba(prior, cs, random_batch(rng, cs))
            assert np.all(report.resolved_pct >= -1e-6)
            assert np.all(report.resolved_pct <= report.max_resolvable_pct + 1e-6)
            assert np.all(report.max_resolvable_pct <= 100.0 + 1e-6)


class TestDominance:
    def test_degenerate_equality(self):
        # one class, one model, X = mu exactly: synthesis reproduces the model
        var = np.array([[2.0]])
        prior = BeliefSpec(variables=V1, prevision=[1.0], covariance=var)
        cs = ClassStructure(
            quantity=V1, class_labels=("a",), n=(1,), prevision_mu=[1.0],
            var_mu=var, var_resid=(np.zeros((1, 1)),), cov_x_mu=var,
        )
        batch = ModelOutputBatch(variables=V1, outputs={"a": (ModelOutput("m1", [4.0]),)})
        rows = dominance_check(prior, cs, batch)
        assert len(rows) == 1
        assert rows[0].model_dist == pytest.approx(rows[0].pba_dist, abs=1e-12)
        assert rows[0].dominated
        report = pba(prior, cs, batch)
        np.testing.assert_allclose(report.pba, [4.0])

    def test_random_specs_always_dominated(self, rng):
        for _ in range(100):
            prior, cs = random_structure(rng, n_max=3)
            rows = dominance_check(prior, cs, random_batch(rng, cs))
            assert rows and all(r.dominated for r in rows)


class TestConvergence:
    def test_limit_at_prior_mean_is_prior_prevision(self, rng):
        prior, cs = random_structure(rng)
        lim = convergence_limit(prior, cs)
        np.testing.assert_allclose(
            lim.limit(cs.prevision_mu), prior.prevision, atol=1e-8 * max(1, np.abs(prior.prevision).max())
        )

    def test_one_d_arithmetic(self):
        prior, cs = one_d_two_classes()
        lim = convergence_limit(prior, cs)
        pu = derive_weights(prior, cs).prevision_u[0]
        assert lim.limit([2.0, 4.0])[0] == pytest.approx(0.5 * 2 + 0.25 * 4 + pu)

    def test_diagnostic_monotone(self, rng):
        for _ in range(20):
            prior, cs = random_structure(rng)
            lim = convergence_limit(prior, cs)
            mu_star = cs.prevision_mu + rng.normal(0, 10, size=cs.m * cs.q)
            diag = lim.diagnostic(mu_star)
            assert diag.monotone, diag.distances
