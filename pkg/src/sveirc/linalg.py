"""Small dense spectral routines for matrices of dimension at most five.

Spectra of dimension two and three come from closed-form roots of the
characteristic polynomial (trigonometric / Cardano) with a Newton polish.
Dimensions four and five go to LAPACK.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NonFinite

__all__ = [
    "charpoly",
    "poly_roots",
    "quadratic_roots",
    "cubic_roots",
    "eigenvalues",
    "stability_modulus",
    "spectral_radius",
    "is_metzler",
    "is_irreducible",
]

_NEWTON_ITERS = 8


def _check(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFinite("matrix has non-finite entries")
    return M


def charpoly(M) -> np.ndarray:
    """Monic characteristic polynomial coefficients ``[1, c1, ..., cn]``.

    ``det(lambda*I - M) = lambda**n + c1*lambda**(n-1) + ... + cn``.
    Dimension three uses the trace / principal-minor / determinant form;
    other sizes use the Faddeev-LeVerrier recursion.
    """
    M = _check(M)
    n = M.shape[0]
    if n == 1:
        return np.array([1.0, -M[0, 0]])
    if n == 2:
        return np.array([1.0, -np.trace(M), M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]])
    if n == 3:
        minors = (
            M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
            + M[0, 0] * M[2, 2] - M[0, 2] * M[2, 0]
            + M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1]
        )
        det = (
            M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
        )
        return np.array([1.0, -np.trace(M), minors, -det])
    coeffs = [1.0]
    Mk = np.zeros_like(M)
    eye = np.eye(n)
    for k in range(1, n + 1):
        Mk = M @ (Mk + coeffs[-1] * eye)
        coeffs.append(-np.trace(Mk) / k)
    return np.array(coeffs)


def _polish(coeffs, root: complex) -> complex:
    """Newton-refine ``root`` of the monic polynomial; never makes it worse or moves it far."""
    c = [complex(v) for v in coeffs]
    best = root
    best_val = abs(np.polyval(c, root))
    # near a multiple root Newton can jump to a different root; stay local
    reach = 1e-6 * max(abs(v) ** (1.0 / k) for k, v in enumerate(c) if k > 0)
    z = root
    for _ in range(_NEWTON_ITERS):
        p = c[0]
        dp = 0j
        for a in c[1:]:
            dp = dp * z + p
            p = p * z + a
        if dp == 0:
            break
        z = z - p / dp
        if abs(z - root) > reach:
            break
        val = abs(np.polyval(c, z))
        if val < best_val:
            best, best_val = z, val
        if val == 0.0:
            break
    if isinstance(root, float) or root.imag == 0.0:
        return complex(best.real, 0.0)
    return best


def quadratic_roots(b: float, c: float) -> list[complex]:
    """Roots of ``x**2 + b*x + c`` without cancellation."""
    disc = b * b - 4.0 * c
    if disc >= 0.0:
        s = math.sqrt(disc)
        q = -0.5 * (b + math.copysign(s, b))
        if q == 0.0:
            return [0j, 0j]
        return [complex(q), complex(c / q)]
    s = math.sqrt(-disc)
    return [complex(-0.5 * b, 0.5 * s), complex(-0.5 * b, -0.5 * s)]


def cubic_roots(a: float, b: float, c: float) -> list[complex]:
    """Roots of ``x**3 + a*x**2 + b*x + c``.

    Three real roots come from the trigonometric form; otherwise Cardano
    gives the real root and the complex pair follows from its sum and
    product. Every root is Newton-polished.
    """
    coeffs = [1.0, a, b, c]
    if c == 0.0:
        return [0j] + [_polish(coeffs, z) for z in quadratic_roots(a, b)]
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    shift = -a / 3.0
    if p == 0.0 and q == 0.0:
        return [_polish(coeffs, complex(shift))] * 3
    m = 2.0 * math.sqrt(-p / 3.0) if p < 0.0 else 0.0
    if disc <= 0.0 and p * m != 0.0:
        arg = min(1.0, max(-1.0, 3.0 * q / (p * m)))
        theta = math.acos(arg) / 3.0
        return [
            _polish(coeffs, complex(m * math.cos(theta - 2.0 * math.pi * k / 3.0) + shift))
            for k in range(3)
        ]
    # one real root, or a tiny p whose cube underflowed
    s = math.sqrt(max(disc, 0.0))
    u = -q / 2.0 - math.copysign(s, q)
    u = math.copysign(abs(u) ** (1.0 / 3.0), u)
    t = u - p / (3.0 * u) if u != 0.0 else 0.0
    r = _polish(coeffs, complex(t + shift)).real
    if r == 0.0:
        return [0j] + [_polish(coeffs, z) for z in quadratic_roots(a, b)]
    # pair: sum = -a - r, product = -c / r
    pair = quadratic_roots(a + r, -c / r)
    return [complex(r)] + [_polish(coeffs, z) for z in pair]


def poly_roots(coeffs) -> list[complex]:
    """All roots of the monic polynomial with the given coefficients."""
    coeffs = [float(v) for v in coeffs]
    if coeffs[0] != 1.0:
        coeffs = [v / coeffs[0] for v in coeffs]
    deg = len(coeffs) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [complex(-coeffs[1])]
    if deg == 2:
        return [_polish(coeffs, z) for z in quadratic_roots(coeffs[1], coeffs[2])]
    if deg == 3:
        return cubic_roots(*coeffs[1:])
    # companion matrix eigenvalues
    return [_polish(coeffs, complex(z)) for z in np.roots(coeffs)]


def eigenvalues(M) -> list[complex]:
    """Spectrum of a square matrix of dimension at most five."""
    M = _check(M)
    if M.shape[0] > 5:
        raise ValueError("eigenvalues() supports dimension <= 5")
    scale = float(np.max(np.abs(M))) if M.size else 0.0
    if scale == 0.0:
        return [0j] * M.shape[0]
    if M.shape[0] > 3:
        # a degree 4-5 polynomial loses accuracy at clustered roots; LAPACK works on M itself
        return [complex(z) for z in np.linalg.eigvals(M)]
    roots = poly_roots(charpoly(M / scale))
    return [z * scale for z in roots]


def stability_modulus(M) -> float:
    """Largest real part over the spectrum of ``M``."""
    M = _check(M)
    if M.shape[0] == 1:
        return float(M[0, 0])
    return max(z.real for z in eigenvalues(M))


def spectral_radius(M, tol: float = 1e-12, max_iter: int = 500) -> float:
    """Largest eigenvalue modulus.

    For entrywise nonnegative matrices the root-finding estimate is refined
    by power iteration, stopped once the Collatz-Wielandt bounds
    ``min(Mx/x) <= rho <= max(Mx/x)`` are within ``tol`` of each other.
    The refinement is dropped if it never brackets tightly.
    """
    M = _check(M)
    rho = max(abs(z) for z in eigenvalues(M))
    if rho == 0.0 or np.any(M < 0):
        return rho
    x = np.ones(M.shape[0])
    for _ in range(max_iter):
        y = M @ x
        if np.any(y <= 0.0):
            return rho
        ratios = y / x
        lo, hi = float(np.min(ratios)), float(np.max(ratios))
        if hi - lo <= tol * hi:
            return 0.5 * (lo + hi)
        x = y / np.max(y)
    return rho


def is_metzler(M) -> bool:
    M = np.asarray(M, dtype=float)
    off = M[~np.eye(M.shape[0], dtype=bool)]
    return bool(np.all(off >= 0.0))


def _reaches_all(adj: np.ndarray) -> bool:
    n = adj.shape[0]
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in np.nonzero(adj[i])[0]:
            j = int(j)
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def is_irreducible(M) -> bool:
    """True when the directed graph with an edge i -> j for ``M[j, i] != 0`` is strongly connected."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if n == 1:
        return True
    adj = (M.T != 0.0) & ~np.eye(n, dtype=bool)
    return _reaches_all(adj) and _reaches_all(adj.T)
