import pytest

from surfacekz.forms import doubling_suite, forms_suite


@pytest.mark.parametrize("g", [1, 2])
def test_forms_suite(g):
    reports = forms_suite(g)
    failures = [(r["check"], r["residual"], r["budget"])
                for r in reports if not r["ok"]]
    assert not failures, failures


@pytest.mark.parametrize("g", [1, 2])
def test_doubling(g):
    reports = doubling_suite(g)
    failures = [r for r in reports if not r["ok"]]
    assert not failures, failures
