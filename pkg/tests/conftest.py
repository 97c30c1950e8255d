import numpy as np
import pytest


class ScriptedStream:
    """Replays fixed uniforms/signs and counts what was consumed."""

    def __init__(self, uniforms=(), signs=(), normals=()):
        self._u = list(uniforms)
        self._s = list(signs)
        self._z = list(normals)
        self.uniforms_used = 0
        self.signs_used = 0

    def _take(self, pool, size, name):
        if size > len(pool):
            raise AssertionError(f"script ran out of {name}: wanted {size}, have {len(pool)}")
        out, pool[:] = pool[:size], pool[size:]
        return np.asarray(out, dtype=float)

    def uniforms(self, size):
        self.uniforms_used += size
        return self._take(self._u, size, "uniforms")

    def signs(self, size):
        self.signs_used += size
        return self._take(self._s, size, "signs")

    def normals(self, size):
        return self._take(self._z, size, "normals")


@pytest.fixture
def scripted():
    return ScriptedStream


def random_symmetric(rng, n, scale=1.0):
    b = rng.standard_normal((n, n)) * scale
    return 0.5 * (b + b.T)


def charpoly_eigenvalues(m):
    """Roots of det(xI - M) via Faddeev-LeVerrier coefficients.

    Independent of the symmetric LAPACK path: coefficients come from matrix
    products and traces, roots from the companion matrix.
    """
    n = m.shape[0]
    coeffs = [1.0]
    mk = np.zeros_like(m)
    for k in range(1, n + 1):
        mk = m @ mk + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(m @ mk) / k)
    roots = np.roots(coeffs)
    return np.sort(roots.real)[::-1]


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
