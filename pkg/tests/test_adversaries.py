import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wrot import adversaries as adv
from wrot.protocol import OutOfRange, build_povm, build_signal_states, make_params
from wrot.qalg import JointState, eigs2, make_state

SQ2 = math.sqrt(2)


@st.composite
def ball_points(draw):
    r = draw(st.floats(0, 1))
    phi = draw(st.floats(0, 2 * math.pi))
    return adv.PureCheatState(r * math.cos(phi), r * math.sin(phi))


def numpy_bot_shift(a, d1, d2):
    """Independent route: build E3 with numpy and evaluate psi^dagger E3 psi - a."""
    one = np.array([0, 1.0])
    w = np.array([math.sqrt(1 - a * a), -a])
    e3 = np.eye(2) - (np.outer(one, one) + np.outer(w, w)) / (1 + a)
    psi = np.array([math.sqrt(max(0.0, 1 - d1 * d1 - d2 * d2)), d1 + 1j * d2])
    return float(np.vdot(psi, e3 @ psi).real) - a


class TestCheatState:
    def test_honest_zero(self):
        assert adv.cheat_state(adv.PureCheatState(0, 0)) == make_state(1, 0)

    def test_one(self):
        s = adv.cheat_state(adv.PureCheatState(1, 0))
        assert s.amp0 == 0 and s.amp1 == 1

    def test_boundary_allowed(self):
        adv.cheat_state(adv.PureCheatState(0.6, 0.8))

    def test_outside_ball(self):
        with pytest.raises(adv.OutOfBall):
            adv.PureCheatState(0.8, 0.8)


class TestAdvantageFormula:
    @pytest.mark.parametrize("a", [0.01, 0.3, 0.5, 0.99])
    def test_honest_preparation_has_no_advantage(self, a):
        assert adv.alice_advantage_analytic(a, adv.PureCheatState(0, 0)) == 0.0

    @pytest.mark.parametrize(
        "d, expected",
        [((0.5, 0.0), 1 / 6), ((-math.sqrt(0.75), 0.0), -0.5), ((0.0, 1.0), -1 / 3), ((0.0, 0.0), 0.0)],
    )
    def test_values_at_half(self, d, expected):
        state = adv.PureCheatState(*d)
        # expected values come from the numpy route, checked here before use
        assert numpy_bot_shift(0.5, *d) == pytest.approx(expected, abs=1e-14)
        assert adv.alice_advantage_analytic(0.5, state) == pytest.approx(expected, abs=1e-14)
        assert adv.alice_advantage_numeric(0.5, state) == pytest.approx(expected, abs=1e-14)

    @given(st.floats(0.001, 0.999), ball_points())
    @settings(max_examples=300)
    def test_analytic_equals_numeric(self, a, d):
        v = adv.alice_advantage_analytic(a, d)
        assert v == pytest.approx(adv.alice_advantage_numeric(a, d), abs=1e-10)
        assert v == pytest.approx(numpy_bot_shift(a, d.d1, d.d2), abs=1e-10)

    @given(st.floats(0.001, 0.999), ball_points())
    @settings(max_examples=300)
    def test_range(self, a, d):
        v = adv.alice_advantage_analytic(a, d)
        assert -a - 1e-10 <= v <= a * (1 - a) / (1 + a) + 1e-10

    def test_dense_grid(self):
        assert adv.advantage_grid_discrepancy(np.linspace(0.01, 0.99, 50), 50) < 1e-10


class TestAliceExtremes:
    def test_max_at_half(self):
        rep = adv.max_alice_advantage(0.5)
        assert rep.v == pytest.approx(1 / 6, abs=1e-15)
        assert rep.state.d1 == pytest.approx(0.5)
        assert rep.p_bot_observed == pytest.approx(0.5 + 1 / 6)
        assert rep.to_record()["kind"] == "alice_max"

    def test_max_matches_search(self):
        for a in (0.05, 0.5, 0.8):
            rep = adv.max_alice_advantage(a)
            found = adv.search_alice_extreme(a, "max")
            assert found.v == pytest.approx(rep.v, abs=1e-6)
            assert found.d1 == pytest.approx(rep.state.d1, abs=1e-3)
            assert abs(found.d2) < 1e-3

    def test_min_matches_search(self):
        for a in (0.2, 0.5, 0.9):
            found = adv.search_alice_extreme(a, "min")
            assert found.v == pytest.approx(-a, abs=1e-6)

    def test_min_at_half(self):
        rep = adv.min_alice_advantage(0.5)
        assert rep.v == pytest.approx(-0.5, abs=1e-12)
        assert rep.state.d1 == pytest.approx(-math.sqrt(0.75), abs=1e-12)
        assert rep.state.d2 == 0.0
        assert rep.p_bot_observed == pytest.approx(0.0, abs=1e-12)

    def test_min_kernel_direction(self, grid99):
        for a in grid99:
            rep = adv.min_alice_advantage(a)
            # kernel of E3 is proportional to (sqrt(1 - a^2), -(1 + a))
            norm = math.sqrt(2 + 2 * a)
            assert rep.state.d1 == pytest.approx(-(1 + a) / norm, abs=1e-12)
            assert rep.v == pytest.approx(-a, abs=1e-10)

    def test_global_peak_of_v_max(self):
        a = np.linspace(1e-6, 1 - 1e-6, 1_000_001)
        v = adv.v_max_closed(a)
        k = int(np.argmax(v))
        assert a[k] == pytest.approx(SQ2 - 1, abs=2e-6)
        assert v[k] == pytest.approx(3 - 2 * SQ2, abs=1e-11)
        assert adv.max_alice_advantage(SQ2 - 1).v == pytest.approx(3 - 2 * SQ2, abs=1e-15)

    def test_orthogonal_limit(self):
        assert adv.max_alice_advantage(1e-9).v == pytest.approx(0, abs=1e-8)
        assert adv.min_alice_advantage(1e-9).v == pytest.approx(0, abs=1e-8)

    def test_eigenvalue_route(self, grid99):
        for a in grid99:
            (lo, _), (hi, _) = eigs2(build_povm(make_params(a)).e3)
            assert lo == pytest.approx(0.0, abs=1e-12)
            assert hi == pytest.approx(2 * a / (1 + a), abs=1e-10)
            # extremes of <psi|E3|psi> over pure states are the eigenvalues
            assert lo - a == pytest.approx(adv.min_alice_advantage(a).v, abs=1e-10)
            assert hi - a == pytest.approx(adv.max_alice_advantage(a).v, abs=1e-10)

    @pytest.mark.parametrize("a", [0.1, 0.5, 0.9])
    def test_interior_values_attainable(self, a):
        lo = adv.min_alice_advantage(a).state.d1
        hi = adv.max_alice_advantage(a).state.d1

        def v(d1):
            return adv.alice_advantage_analytic(a, adv.PureCheatState(d1, 0.0))

        for target in np.linspace(-a, adv.v_max_closed(a), 11):
            x0, x1 = lo, hi
            for _ in range(200):
                mid = (x0 + x1) / 2
                if v(mid) < target:
                    x0 = mid
                else:
                    x1 = mid
            assert v((x0 + x1) / 2) == pytest.approx(target, abs=1e-12)

    def test_reports_reject_impossible_v(self):
        with pytest.raises(ValueError):
            adv.AliceAttackReport("alice_max", 0.5, 0.4, 0.9, adv.PureCheatState(0, 0))


class TestEntanglement:
    def test_product_honest(self):
        psi0 = build_signal_states(make_params(0.5)).psi0
        joint = JointState.product(make_state(1, 0), psi0)
        rep = adv.entangled_alice_no_advantage(0.5, joint)
        assert rep.ok
        assert rep.p_bot == pytest.approx(0.5, abs=1e-15)

    def test_bell(self):
        r = 1 / SQ2
        for a in (0.2, 0.5, 0.8):
            rep = adv.entangled_alice_no_advantage(a, JointState((r, 0, 0, r)))
            assert rep.ok
            assert rep.p_bot == pytest.approx(a / (1 + a), abs=1e-12)

    def test_random_joint_states(self, rng):
        for _ in range(100):
            joint = adv.random_joint_state(rng)
            for a in (0.1, 0.5, 0.9):
                rep = adv.entangled_alice_no_advantage(a, joint)
                assert rep.max_diff <= 1e-10
                assert 0 <= rep.p_bot <= 2 * a / (1 + a) + 1e-10
                assert rep.ok


class TestBob:
    def test_basis_at_half(self):
        a = 0.5
        s = adv.bob_guess_basis(a, adv.bob_theta_closed(a))
        assert s.theta == pytest.approx(math.pi / 12, abs=1e-15)
        assert math.atan2(s.phi0.amp1.real, s.phi0.amp0.real) == pytest.approx(-math.pi / 12)
        assert math.atan2(s.phi1.amp1.real, s.phi1.amp0.real) == pytest.approx(5 * math.pi / 12)
        sig = build_signal_states(make_params(a))
        assert math.acos(abs(s.phi0.inner(sig.psi0))) == pytest.approx(math.pi / 12, abs=1e-9)
        assert math.acos(abs(s.phi1.inner(sig.psi1))) == pytest.approx(math.pi / 12, abs=1e-9)

    def test_theta_zero(self):
        s = adv.bob_guess_basis(0.5, 0.0)
        assert s.phi0 == make_state(1, 0)

    @given(st.floats(0.01, 0.99), st.floats(0, math.pi / 4))
    def test_orthogonal_basis(self, a, theta):
        s = adv.bob_guess_basis(a, theta)
        assert abs(s.phi0.inner(s.phi1)) < 1e-12
        assert math.acos(min(1.0, abs(s.phi0.amp0))) == pytest.approx(theta, abs=1e-7)

    def test_theta_out_of_range(self):
        with pytest.raises(OutOfRange):
            adv.bob_guess_basis(0.5, 1.0)

    def test_success_rate_optimal_half(self):
        q = adv.bob_success_rate(0.5, adv.bob_guess_basis(0.5, math.pi / 12))
        assert q == pytest.approx(math.cos(math.pi / 12) ** 2, abs=1e-15)
        assert q == pytest.approx((1 + math.sin(math.pi / 3)) / 2, abs=1e-15)
        assert q == pytest.approx(0.933013, abs=1e-6)

    def test_success_rate_theta_zero(self):
        # phi0 = |0>, phi1 = |1>: hit0 = 1, hit1 = |<1|psi1>|^2 = 1 - a^2
        a = 0.5
        expected = (1 + (1 - a * a)) / 2
        assert adv.bob_success_rate(a, adv.bob_guess_basis(a, 0.0)) == pytest.approx(expected, abs=1e-15)
        assert expected == 0.875

    def test_optimal_half(self):
        rep = adv.optimal_bob(0.5)
        assert rep.theta == pytest.approx(math.pi / 12)
        assert rep.q == pytest.approx(0.9330127018922193, abs=1e-15)
        assert rep.u == pytest.approx(0.1830127018922193, abs=1e-15)
        assert rep.baseline == 0.75

    def test_peak_of_u(self):
        a = np.linspace(1e-6, 1 - 1e-6, 1_000_001)
        u = adv.u_closed(a)
        k = int(np.argmax(u))
        assert a[k] == pytest.approx(1 / SQ2, abs=2e-6)
        assert u[k] == pytest.approx((SQ2 - 1) / 2, abs=1e-11)
        assert adv.optimal_bob(1 / SQ2).u == pytest.approx((SQ2 - 1) / 2, abs=1e-15)

    def test_orthogonal_limit(self):
        rep = adv.optimal_bob(1e-9)
        assert rep.theta == pytest.approx(0, abs=1e-8)
        assert rep.q == pytest.approx(1, abs=1e-12)
        assert rep.u == pytest.approx(0, abs=1e-8)

    def test_scans_and_helstrom(self, grid99):
        for a in grid99[::7]:
            theta, q_scan = adv.scan_bob_theta(a)
            beta, q_rot = adv.scan_bob_rotations(a)
            sig = build_signal_states(make_params(a))
            bound = adv.helstrom_bound(sig.psi0, sig.psi1)
            assert theta == pytest.approx(adv.bob_theta_closed(a), abs=2e-4)
            assert -beta == pytest.approx(adv.bob_theta_closed(a), abs=2e-4)
            assert q_scan <= bound + 1e-10 and q_rot <= bound + 1e-10
            assert adv.optimal_bob(a).q == pytest.approx(bound, abs=1e-12)

    def test_guess_table_rows_are_distributions(self):
        table = adv.bob_guess_table(0.3, adv.optimal_bob(0.3).strategy)
        for row in table:
            assert sum(row) == pytest.approx(1.0, abs=1e-12)
            assert row[2] == 0.0


class TestSuppression:
    def test_monotone_below_peaks(self):
        a = np.linspace(0, 1, 101)
        v = adv.v_max_closed(a[(a > 0) & (a <= SQ2 - 1)])
        u = adv.u_closed(a[(a > 0) & (a <= 1 / SQ2)])
        assert np.all(np.diff(v) > 0)
        assert np.all(np.diff(u) > 0)

    def test_not_monotone_over_full_range(self):
        a = np.linspace(0.01, 0.99, 99)
        assert not np.all(np.diff(adv.v_max_closed(a)) > 0)
        assert not np.all(np.diff(adv.u_closed(a)) > 0)
