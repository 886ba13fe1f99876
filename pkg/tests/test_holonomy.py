import numpy as np
import pytest

from surfacekz.connection import ConnectionContext
from surfacekz.holonomy import (BraidLab, Envelope, GroupElement,
                                PermutationAction, holonomy_suite,
                                verify_braid_relations)
from surfacekz.tgn import GradedQuotient


@pytest.fixture(scope="module")
def env():
    return Envelope(GradedQuotient(1, 2, 2, 2), 2)


def test_envelope_product_associative(env):
    rng = np.random.default_rng(0)
    keys = [w for w in [(k,) for k in range(len(env.lie_basis))] if True]

    def rand_elem():
        out = {(): 1.0 + 0j}
        for _ in range(3):
            k = int(rng.integers(0, len(env.lie_basis)))
            out[(k,)] = complex(rng.normal(), rng.normal())
        return out

    for _ in range(5):
        a, b, c = rand_elem(), rand_elem(), rand_elem()
        lhs = env.mult(env.mult(a, b), c)
        rhs = env.mult(a, env.mult(b, c))
        assert env.diff_norm(lhs, rhs) < 1e-12


def test_exp_log_roundtrip(env):
    rng = np.random.default_rng(1)
    lie = {(k,): complex(rng.normal(), rng.normal()) * 0.3
           for k in range(len(env.lie_basis))}
    e = env.exp(lie)
    assert env.grouplike_defect(e) < 1e-12
    back = env.log(e)
    assert env.diff_norm(back, lie) < 1e-12
    inv = env.invert(e)
    assert env.diff_norm(env.mult(e, inv), env.unit()) < 1e-12


def test_permutation_action_is_homomorphic(env):
    act = PermutationAction(env)
    rng = np.random.default_rng(2)
    elem = {(): 1.0, (0,): 0.3 + 0.1j, (1,): -0.2j}
    swapped = act.act((2, 1), act.act((2, 1), elem))
    assert env.diff_norm(swapped, elem) < 1e-14


@pytest.fixture(scope="module")
def lab12():
    return BraidLab(ConnectionContext(1, 2), N=2)


def test_constant_path_is_identity(lab12):
    from surfacekz.holonomy import Segment
    T, _ = lab12.transporter.transport_events(
        [Segment({1: ("line", lab12.base[0], lab12.base[0])})], base=lab12.base)
    assert lab12.env.diff_norm(T, lab12.env.unit()) < 1e-14


def test_group_element_semidirect(lab12):
    s = lab12.generator("sigma", 1)
    sinv = s.inverse(lab12.action)
    prod = s.mul(sinv, lab12.action)
    assert prod.perm == (1, 2)
    assert lab12.env.diff_norm(prod.series, lab12.env.unit()) < 1e-10


def test_holonomy_suite_n2():
    reports = holonomy_suite(1, 2)
    bad = [(r["check"], r.get("residual")) for r in reports if not r["ok"]]
    assert not bad, bad


def test_holonomy_suite_n3():
    reports = holonomy_suite(1, 3)
    bad = [(r["check"], r.get("residual")) for r in reports if not r["ok"]]
    assert not bad, bad
    perms = [r for r in reports if "perm_identity" in r]
    assert all(r["perm_identity"] for r in perms)
