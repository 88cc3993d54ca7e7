import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slopecalc import IntegersMod, kernels
from slopecalc._ext import _core_py
from slopecalc.scalarext import _pair_schedule, build_extension_ring

compiled = pytest.importorskip("slopecalc._ext._core", reason="compiled kernels not built")

exps = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))


def _fraction_ops():
    return (lambda a, b: a + b), (lambda a, b: a * b), (lambda a: a == 0)


@given(st.dictionaries(exps, st.integers(-9, 9)), st.dictionaries(exps, st.integers(-9, 9)))
def test_mul_terms_backends_agree_over_q(ta, tb):
    ta = {e: Fraction(c, 3) for e, c in ta.items() if c}
    tb = {e: Fraction(c, 2) for e, c in tb.items() if c}
    ops = _fraction_ops()
    assert compiled.mul_terms(ta, tb, *ops) == _core_py.mul_terms(ta, tb, *ops)


@given(st.integers(2, 13), st.dictionaries(exps, st.integers(1, 12)), st.dictionaries(exps, st.integers(1, 12)))
def test_mul_terms_backends_agree_mod_n(n, ta, tb):
    ta = {e: c % n for e, c in ta.items() if c % n}
    tb = {e: c % n for e, c in tb.items() if c % n}
    args = (None, None, None, n)
    assert compiled.mul_terms(ta, tb, *args) == _core_py.mul_terms(ta, tb, *args)


@pytest.mark.parametrize("n,k,times", [(2, 1, "0"), (3, 1, "1"), (5, 1, "2"), (2, 2, "0,0,0"), (3, 2, "1,2,1")])
def test_aut_search_backends_agree(n, k, times):
    R = build_extension_ring(IntegersMod(n), k, times)
    r, T = R.rank, R.constants
    flat = [T[a][b][g] % n for a in range(r) for b in range(r) for g in range(r)]
    order = list(range(r - 1, 0, -1))
    schedule = _pair_schedule(r, T, order, 0)
    fast = compiled.aut_search(n, r, flat, order, schedule, 10**6)
    slow = _core_py.aut_search(n, r, flat, order, schedule, 10**6)
    canon = lambda found: sorted(tuple(map(tuple, m)) for m in found)  # noqa: E731
    assert canon(fast) == canon(slow)


def test_compiled_backend_selected_by_default():
    forced = os.environ.get("SLOPECALC_PURE_PYTHON", "") in ("1", "true", "yes")
    assert kernels.BACKEND == ("python" if forced else "cython")


def test_pure_python_override():
    env = dict(os.environ, SLOPECALC_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from slopecalc import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
