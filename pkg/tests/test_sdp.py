import math

import numpy as np
import pytest

from helpers import cycle4, equilateral, star13
from mdrlab import metric, sdp
from mdrlab.errors import CertificateInvalid, NotPSD, TooLarge


class TestC2Sdp:
    def test_simplex_isometric(self):
        for n in (4, 7, 10):
            alpha, witness, _ = sdp.c2_sdp(equilateral(n), tol=1e-6)
            assert abs(alpha - 1.0) <= 1e-6
            assert witness.n == n

    def test_cycle4(self):
        alpha, _, _ = sdp.c2_sdp(cycle4(), tol=1e-4)
        assert abs(alpha - math.sqrt(2)) <= 1e-3

    def test_star13(self):
        alpha, _, _ = sdp.c2_sdp(star13(), tol=1e-4)
        assert abs(alpha - 2.0 / math.sqrt(3)) <= 1e-3

    def test_three_points_isometric(self):
        # any 3-point metric embeds isometrically in the plane
        rng = np.random.default_rng(0)
        for _ in range(5):
            m = metric.PointCloud(rng.standard_normal((3, 3)), "l2").to_metric()
            alpha, _, _ = sdp.c2_sdp(m, tol=1e-4)
            assert alpha <= 1.0 + 2e-4
        m = metric.random_metric(3, 17, style="shortest_path")
        alpha, _, _ = sdp.c2_sdp(m, tol=1e-4)
        assert alpha <= 1.0 + 2e-4
        assert sdp.c2_bruteforce(m, starts=8, seed=5) <= 1.0 + 1e-6

    def test_euclidean_cloud_isometric(self):
        rng = np.random.default_rng(1)
        m = metric.PointCloud(rng.standard_normal((6, 4)), "l2").to_metric()
        alpha, _, _ = sdp.c2_sdp(m, tol=1e-4)
        assert alpha <= 1.0 + 2e-4

    def test_at_least_one(self):
        rng = np.random.default_rng(2)
        for seed in range(3):
            m = metric.random_metric(6, seed, style="shortest_path")
            alpha, _, _ = sdp.c2_sdp(m, tol=1e-4)
            assert alpha >= 1.0 - 1e-4

    def test_size_cap(self):
        with pytest.raises(TooLarge):
            sdp.c2_sdp(equilateral(65))

    def test_tol_floor(self):
        with pytest.raises(ValueError):
            sdp.c2_sdp(equilateral(4), tol=1e-8)

    def test_witness_box_constraints(self):
        m = cycle4()
        tol = 1e-4
        alpha, witness, _ = sdp.c2_sdp(m, tol=tol)
        d2 = sdp._dist2_of(witness.Q)
        lo = m.dist**2
        off = ~np.eye(4, dtype=bool)
        rel_lo = ((lo - d2)[off] / lo[off]).max()
        rel_hi = ((d2 - alpha**2 * lo)[off] / lo[off]).max()
        assert rel_lo <= tol and rel_hi <= tol * alpha**2 + 1e-12


class TestBruteforceOracle:
    def test_cycle4(self):
        got = sdp.c2_bruteforce(cycle4(), starts=32, seed=0)
        assert abs(got - math.sqrt(2)) <= 1e-6

    def test_star13(self):
        got = sdp.c2_bruteforce(star13(), starts=32, seed=1)
        assert abs(got - 2.0 / math.sqrt(3)) <= 1e-6

    def test_simplex(self):
        assert abs(sdp.c2_bruteforce(equilateral(5), starts=8, seed=2) - 1.0) <= 1e-6

    def test_agrees_with_sdp_on_random_metric(self):
        m = metric.random_metric(5, 42, style="shortest_path")
        alpha_sdp, _, _ = sdp.c2_sdp(m, tol=1e-4)
        alpha_bf = sdp.c2_bruteforce(m, starts=32, seed=3)
        assert abs(alpha_sdp - alpha_bf) <= 2e-3


class TestCertificates:
    def test_zero_certificate_always_holds(self):
        m = cycle4()
        cert = sdp.NegativeTypeCertificate(np.zeros((4, 4)))
        for alpha in (1.0, 1.2, 3.0):
            holds, lhs, rhs = sdp.check_certificate(m, cert, alpha)
            assert holds and lhs == 0.0 and rhs == 0.0

    def test_simplex_alpha_one(self):
        # row sums zero force sum a_ij d^2 = -d^2 * trace(A) <= 0 = rhs
        m = equilateral(5)
        rng = np.random.default_rng(3)
        j = np.eye(5) - np.ones((5, 5)) / 5
        for _ in range(10):
            b = rng.standard_normal((5, 5))
            a = j @ (b @ b.T) @ j
            cert = sdp.NegativeTypeCertificate(a)
            holds, lhs, rhs = sdp.check_certificate(m, cert, 1.0)
            assert holds
            assert lhs <= 1e-9 and rhs == 0.0

    def test_violating_certificate_for_cycle4(self):
        cert = sdp.find_violating_certificate(cycle4(), 1.3, seed=0)
        assert cert is not None
        holds, lhs, rhs = sdp.check_certificate(cycle4(), cert, 1.3)
        assert not holds and lhs > rhs

    def test_hand_built_cycle4_certificate(self):
        # rank-one alternating-sign witness: the short-diagonals inequality
        v = np.array([1.0, -1.0, 1.0, -1.0])
        cert = sdp.NegativeTypeCertificate(np.outer(v, v))
        holds_low, _, _ = sdp.check_certificate(cycle4(), cert, 1.3)
        holds_high, _, _ = sdp.check_certificate(cycle4(), cert, math.sqrt(2) + 1e-9)
        assert not holds_low
        assert holds_high

    def test_duality_consistency(self):
        # a violating certificate at alpha0 forces c2 >= alpha0 - tol
        alpha0 = 1.3
        cert = sdp.find_violating_certificate(cycle4(), alpha0, seed=1)
        assert cert is not None
        alpha, _, _ = sdp.c2_sdp(cycle4(), tol=1e-4)
        assert alpha >= alpha0 - 1e-4

    def test_invalid_certificates(self):
        with pytest.raises(CertificateInvalid):
            sdp.NegativeTypeCertificate(np.array([[1.0, 0.0], [0.0, 1.0]]))  # rows not zero-sum
        with pytest.raises(CertificateInvalid):
            sdp.NegativeTypeCertificate(np.array([[-1.0, 1.0], [1.0, -1.0]]))  # negative definite
        m = cycle4()
        good = sdp.NegativeTypeCertificate(np.zeros((3, 3)))
        with pytest.raises(CertificateInvalid):
            sdp.check_certificate(m, good, 1.5)  # size mismatch


class TestExtractPoints:
    def test_identity_gram(self):
        cloud = sdp.extract_points(sdp.GramCandidate(np.eye(3)))
        d = cloud.pairwise()
        off = ~np.eye(3, dtype=bool)
        assert np.allclose(d[off], math.sqrt(2))

    def test_zero_gram(self):
        cloud = sdp.extract_points(sdp.GramCandidate(np.zeros((4, 4))))
        assert np.allclose(cloud.coords, 0.0)

    def test_distance_reproduction(self):
        rng = np.random.default_rng(5)
        b = rng.standard_normal((6, 6))
        q = b @ b.T
        cloud = sdp.extract_points(sdp.GramCandidate(q))
        want = np.sqrt(np.maximum(sdp._dist2_of(q), 0.0))
        assert np.abs(cloud.pairwise() - want).max() <= 1e-6

    def test_witness_realizes_reported_distortion(self):
        tol = 1e-4
        for m in (cycle4(), star13()):
            alpha, witness, _ = sdp.c2_sdp(m, tol=tol)
            cloud = sdp.extract_points(witness)
            rep = metric.distortion(m, cloud.to_metric(), np.arange(m.n))
            assert rep.distortion <= alpha + 2 * tol

    def test_not_psd(self):
        with pytest.raises(NotPSD):
            sdp.GramCandidate(np.array([[1.0, 2.0], [2.0, 1.0]]))
