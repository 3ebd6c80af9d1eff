"""
Special functions of SU(2) representation theory.

Clebsch-Gordan coefficients, Wigner small-d matrices, rotation operators,
Fano tensor operators, spherical harmonics and Legendre polynomials.

Conventions
-----------
* Basis vectors of the spin-j space are ordered ``mu = j, j-1, ..., -j``;
  row/column 0 is the highest-weight state ``|j,j>``.
* ``d^j_{m'm}(beta) = <j,m'| exp(-i beta J_y) |j,m>``.
* Clebsch-Gordan coefficients and spherical harmonics follow the
  Condon-Shortley phase convention.
* The displacement used for tomography is
  ``g(n) = exp(-i phi J_z) exp(-i theta J_y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .halfint import HalfInteger, HalfLike, check_projection

__all__ = [
    "SpherePoint",
    "canonical_angles",
    "clebsch_gordan",
    "wigner_d",
    "wigner_d_batch",
    "spin_matrices",
    "rotation_operator",
    "rotation_operators",
    "euler_rotation",
    "tensor_operator",
    "tensor_operators",
    "lm_index",
    "spherical_harmonic",
    "spherical_harmonics",
    "legendre_p",
    "legendre_all",
]

TWO_PI = 2.0 * math.pi

# 2j <= 100 needs arguments up to (j1 + j2 + j + 1)! with l <= 2j, i.e. ~201.
_MAX_FACT = 512
_LOG_FACT = np.array([math.lgamma(n + 1.0) for n in range(_MAX_FACT)])
_LOG_FACT.setflags(write=False)


def _lf(n: int) -> float:
    if n < 0:
        raise DomainError("negative factorial argument")
    if n >= _MAX_FACT:
        raise DomainError(f"factorial argument {n} exceeds supported range (2j <= 100)")
    return float(_LOG_FACT[n])


# ---------------------------------------------------------------------------
# points on the sphere


@dataclass(frozen=True)
class SpherePoint:
    """Point on the unit sphere given by polar angle ``theta`` and azimuth ``phi``."""

    theta: float
    phi: float

    def __post_init__(self):
        theta, phi = float(self.theta), float(self.phi)
        if not (0.0 <= theta <= math.pi):
            raise DomainError(f"theta={theta} outside [0, pi]")
        if not (0.0 <= phi < TWO_PI):
            raise DomainError(f"phi={phi} outside [0, 2pi)")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "SpherePoint":
        """Build a point from arbitrary real angles, canonicalising them."""
        return cls(*canonical_angles(theta, phi))

    @property
    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def antipode(self) -> "SpherePoint":
        """The point at ``-n``."""
        return SpherePoint.from_angles(math.pi - self.theta, self.phi + math.pi)


def _wrap_phi(phi: float) -> float:
    phi = math.fmod(phi, TWO_PI)
    if phi < 0.0:
        phi += TWO_PI
    if phi >= TWO_PI:
        phi = 0.0
    return phi


def canonical_angles(theta: float, phi: float) -> tuple[float, float]:
    """Map raw angles to ``[0, pi] x [0, 2pi)`` describing the same unit vector.

    Angles already in range are returned unchanged (up to ``phi`` wrapping),
    so the azimuth at the poles is preserved.
    """
    theta = float(theta)
    phi = float(phi)
    if not (math.isfinite(theta) and math.isfinite(phi)):
        raise DomainError("angles must be finite")
    if not (0.0 <= theta <= math.pi):
        theta = math.fmod(theta, TWO_PI)
        if theta < 0.0:
            theta += TWO_PI
        if theta > math.pi:
            theta = TWO_PI - theta
            phi += math.pi
    return theta, _wrap_phi(phi)


# ---------------------------------------------------------------------------
# Clebsch-Gordan


def _cg_twice(tj1: int, tm1: int, tj2: int, tm2: int, tj: int, tm: int) -> float:
    if tm1 + tm2 != tm:
        return 0.0
    if tj < abs(tj1 - tj2) or tj > tj1 + tj2 or (tj1 + tj2 + tj) % 2:
        return 0.0
    a = (tj1 + tj2 - tj) // 2
    b = (tj1 - tj2 + tj) // 2
    c = (-tj1 + tj2 + tj) // 2
    s = (tj1 + tj2 + tj) // 2 + 1
    j1p, j1m = (tj1 + tm1) // 2, (tj1 - tm1) // 2
    j2p, j2m = (tj2 + tm2) // 2, (tj2 - tm2) // 2
    jp, jm = (tj + tm) // 2, (tj - tm) // 2

    log_pre = 0.5 * (
        math.log(tj + 1) + _lf(a) + _lf(b) + _lf(c) - _lf(s)
        + _lf(j1p) + _lf(j1m) + _lf(j2p) + _lf(j2m) + _lf(jp) + _lf(jm)
    )
    # (j - j2 + m1 + k)! and (j - j1 - m2 + k)! set the lower bound on k
    e1 = (tj - tj2 + tm1) // 2
    e2 = (tj - tj1 - tm2) // 2
    kmin = max(0, -e1, -e2)
    kmax = min(a, j1m, j2p)
    terms = []
    for k in range(kmin, kmax + 1):
        log_den = _lf(k) + _lf(a - k) + _lf(j1m - k) + _lf(j2p - k) + _lf(e1 + k) + _lf(e2 + k)
        mag = math.exp(log_pre - log_den)
        terms.append(-mag if k % 2 else mag)
    return math.fsum(terms)


def clebsch_gordan(j1: HalfLike, m1: HalfLike, j2: HalfLike, m2: HalfLike,
                   j: HalfLike, m: HalfLike) -> float:
    """Clebsch-Gordan coefficient ``<j1,m1; j2,m2 | j,m>`` (Condon-Shortley).

    Evaluated with the Racah sum formula, using log-factorials with
    explicit sign tracking. Returns 0 when ``m != m1 + m2`` or the triangle
    condition fails.

    Raises
    ------
    DomainError
        If any projection violates ``|m| <= j`` or has the wrong parity.
    """
    j1, m1, j2, m2, j, m = (HalfInteger.of(x) for x in (j1, m1, j2, m2, j, m))
    check_projection(j1, m1, "m1")
    check_projection(j2, m2, "m2")
    check_projection(j, m, "m")
    return _cg_twice(j1.twice_value, m1.twice_value, j2.twice_value,
                     m2.twice_value, j.twice_value, m.twice_value)


# ---------------------------------------------------------------------------
# Wigner small-d


@lru_cache(maxsize=None)
def _wigner_d_terms(tj: int):
    """Flattened term table for the Wigner sum formula at fixed j.

    Returns (flat_index, coefficient, cos_power, sin_power), each read-only.
    """
    d = tj + 1
    flat, coef, pc, ps = [], [], [], []
    for r in range(d):
        tmp = tj - 2 * r  # 2m'
        for c in range(d):
            tm = tj - 2 * c  # 2m
            jpmp, jmmp = (tj + tmp) // 2, (tj - tmp) // 2
            jpm, jmm = (tj + tm) // 2, (tj - tm) // 2
            dm = (tmp - tm) // 2  # m' - m
            log_num = 0.5 * (_lf(jpmp) + _lf(jmmp) + _lf(jpm) + _lf(jmm))
            for s in range(max(0, -dm), min(jpm, jmmp) + 1):
                log_den = _lf(jpm - s) + _lf(s) + _lf(dm + s) + _lf(jmmp - s)
                val = math.exp(log_num - log_den)
                if (dm + s) % 2:
                    val = -val
                flat.append(r * d + c)
                coef.append(val)
                pc.append(tj - dm - 2 * s)
                ps.append(dm + 2 * s)
    out = (np.array(flat, dtype=np.intp), np.array(coef), np.array(pc), np.array(ps))
    for arr in out:
        arr.setflags(write=False)
    return out


def wigner_d_batch(j: HalfLike, betas) -> np.ndarray:
    """Wigner small-d matrices for an array of angles, shape ``(n, 2j+1, 2j+1)``."""
    j = HalfInteger.of(j)
    if j.twice_value < 0:
        raise DomainError("j must be non-negative")
    betas = np.atleast_1d(np.asarray(betas, dtype=float))
    d = j.dim
    flat, coef, pc, ps = _wigner_d_terms(j.twice_value)
    cb = np.cos(betas / 2.0)
    sb = np.sin(betas / 2.0)
    # numpy defines 0.0**0 == 1, which is what the sum formula needs at the poles
    vals = coef[:, None] * cb[None, :] ** pc[:, None] * sb[None, :] ** ps[:, None]
    out = np.zeros((d * d, betas.size))
    np.add.at(out, flat, vals)
    return out.T.reshape(betas.size, d, d)


def wigner_d(j: HalfLike, beta: float) -> np.ndarray:
    """Wigner small-d matrix ``d^j(beta)`` with entries ``<j,m'|exp(-i beta J_y)|j,m>``.

    Examples
    --------
    >>> np.allclose(wigner_d("1/2", 0.4), [[np.cos(0.2), -np.sin(0.2)],
    ...                                    [np.sin(0.2), np.cos(0.2)]])
    True
    """
    return wigner_d_batch(j, [beta])[0]


# ---------------------------------------------------------------------------
# operators


@lru_cache(maxsize=None)
def _spin_matrices(tj: int):
    d = tj + 1
    mu = (tj - 2 * np.arange(d)) / 2.0
    j = tj / 2.0
    jz = np.diag(mu).astype(complex)
    jp = np.zeros((d, d), dtype=complex)
    for c in range(1, d):
        m = mu[c]
        jp[c - 1, c] = math.sqrt(j * (j + 1) - m * (m + 1))
    jm = jp.conj().T
    jx = (jp + jm) / 2.0
    jy = (jp - jm) / 2.0j
    for arr in (jx, jy, jz):
        arr.setflags(write=False)
    return jx, jy, jz


def spin_matrices(j: HalfLike) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Angular momentum matrices ``(J_x, J_y, J_z)`` in the descending-mu basis."""
    j = HalfInteger.of(j)
    if j.twice_value < 0:
        raise DomainError("j must be non-negative")
    return _spin_matrices(j.twice_value)


def rotation_operators(j: HalfLike, theta, phi) -> np.ndarray:
    """Stack of displacement operators ``g(n_i)``, shape ``(n, 2j+1, 2j+1)``.

    ``g_{m'm} = exp(-i m' phi) d^j_{m'm}(theta)``.
    """
    j = HalfInteger.of(j)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    if theta.shape != phi.shape:
        raise DomainError("theta and phi must have the same shape")
    mu = (j.twice_value - 2 * np.arange(j.dim)) / 2.0
    phases = np.exp(-1j * np.outer(phi, mu))
    return phases[:, :, None] * wigner_d_batch(j, theta)


def rotation_operator(j: HalfLike, n: SpherePoint) -> np.ndarray:
    """Displacement operator ``g(n) = exp(-i phi J_z) exp(-i theta J_y)``."""
    return rotation_operators(j, [n.theta], [n.phi])[0]


def euler_rotation(j: HalfLike, alpha: float, beta: float, gamma: float,
                   sign: int = +1) -> np.ndarray:
    """Group element from Euler angles, ``exp(s i a J_z) exp(s i b J_y) exp(s i c J_z)``.

    ``sign=+1`` gives the positive-exponent parametrisation; ``sign=-1`` the
    passive one used by :func:`rotation_operator` (``g(n)`` equals
    ``euler_rotation(j, phi, theta, 0, sign=-1)``).
    """
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    j = HalfInteger.of(j)
    mu = (j.twice_value - 2 * np.arange(j.dim)) / 2.0
    left = np.exp(sign * 1j * alpha * mu)
    right = np.exp(sign * 1j * gamma * mu)
    return left[:, None] * wigner_d(j, -sign * beta) * right[None, :]


@lru_cache(maxsize=None)
def _tensor_operator(tj: int, l: int, m: int) -> np.ndarray:
    d = tj + 1
    out = np.zeros((d, d))
    scale = math.sqrt((2 * l + 1) / d)
    for c in range(d):
        tk = tj - 2 * c
        tq = tk + 2 * m
        if abs(tq) > tj:
            continue
        r = (tj - tq) // 2
        out[r, c] = scale * _cg_twice(tj, tk, 2 * l, 2 * m, tj, tq)
    out.setflags(write=False)
    return out


def tensor_operator(j: HalfLike, l: int, m: int) -> np.ndarray:
    """Fano multipole operator ``D_lm`` on the spin-j space.

    Entry ``(q, k)`` is ``sqrt((2l+1)/(2j+1)) <j,k; l,m | j,q>``. The
    operators are orthonormal under ``Tr(A B^dagger)``.
    """
    j = HalfInteger.of(j)
    if j.twice_value < 0:
        raise DomainError("j must be non-negative")
    l, m = int(l), int(m)
    if not (0 <= l <= j.twice_value):
        raise DomainError(f"l={l} outside [0, 2j={j.twice_value}]")
    if abs(m) > l:
        raise DomainError(f"|m|={abs(m)} exceeds l={l}")
    return _tensor_operator(j.twice_value, l, m)


def lm_index(l: int, m: int) -> int:
    """Flat position of ``(l, m)`` in arrays ordered ``(0,0), (1,-1), (1,0), (1,1), ...``."""
    return l * l + l + m


@lru_cache(maxsize=None)
def _tensor_stack(tj: int) -> np.ndarray:
    lmax = tj
    stack = np.array([_tensor_operator(tj, l, m)
                      for l in range(lmax + 1) for m in range(-l, l + 1)])
    stack.setflags(write=False)
    return stack


def tensor_operators(j: HalfLike) -> np.ndarray:
    """All ``D_lm`` for ``l <= 2j`` stacked in :func:`lm_index` order."""
    j = HalfInteger.of(j)
    return _tensor_stack(j.twice_value)


# ---------------------------------------------------------------------------
# spherical harmonics and Legendre polynomials


def _normalized_legendre(lmax: int, x: np.ndarray) -> np.ndarray:
    """Orthonormalised associated Legendre functions with Condon-Shortley phase.

    Returns ``P[l, m, i]`` for ``0 <= m <= l <= lmax`` such that
    ``Y_lm(theta, phi) = P[l, m] * exp(i m phi)`` with ``x = cos(theta)``.
    """
    x = np.asarray(x, dtype=float)
    sx = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    p = np.zeros((lmax + 1, lmax + 1) + x.shape)
    p[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, lmax + 1):
        p[m, m] = -math.sqrt((2 * m + 1) / (2.0 * m)) * sx * p[m - 1, m - 1]
    for m in range(0, lmax):
        p[m + 1, m] = math.sqrt(2 * m + 3) * x * p[m, m]
    for m in range(0, lmax + 1):
        for l in range(m + 2, lmax + 1):
            a = math.sqrt((4 * l * l - 1) / (l * l - m * m))
            b = math.sqrt(((l - 1) ** 2 - m * m) / (4 * (l - 1) ** 2 - 1))
            p[l, m] = a * (x * p[l - 1, m] - b * p[l - 2, m])
    return p


def spherical_harmonics(lmax: int, theta, phi) -> np.ndarray:
    """All ``Y_lm`` with ``l <= lmax`` at the given points.

    Returns a complex array of shape ``((lmax+1)**2, n)`` in :func:`lm_index` order.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    p = _normalized_legendre(lmax, np.cos(theta))
    out = np.empty(((lmax + 1) ** 2, theta.size), dtype=complex)
    for m in range(0, lmax + 1):
        e = np.exp(1j * m * phi)
        for l in range(m, lmax + 1):
            y = p[l, m] * e
            out[lm_index(l, m)] = y
            if m:
                out[lm_index(l, -m)] = (-1) ** m * np.conj(y)
    return out


def spherical_harmonic(l: int, m: int, n: SpherePoint) -> complex:
    """Orthonormal spherical harmonic ``Y_lm(n)`` with Condon-Shortley phase."""
    if l < 0 or abs(m) > l:
        raise DomainError(f"invalid (l, m) = ({l}, {m})")
    return complex(spherical_harmonics(l, [n.theta], [n.phi])[lm_index(l, m), 0])


def legendre_all(lmax: int, x) -> np.ndarray:
    """``P_0(x) ... P_lmax(x)`` by the three-term recurrence, shape ``(lmax+1,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("Legendre argument outside [-1, 1]")
    out = np.empty((lmax + 1,) + x.shape)
    out[0] = 1.0
    if lmax >= 1:
        out[1] = x
    for l in range(2, lmax + 1):
        out[l] = ((2 * l - 1) * x * out[l - 1] - (l - 1) * out[l - 2]) / l
    return out


def legendre_p(l: int, x):
    """Legendre polynomial ``P_l(x)`` for ``|x| <= 1``."""
    if l < 0:
        raise DomainError("l must be non-negative")
    val = legendre_all(l, x)[l]
    return float(val) if np.ndim(val) == 0 else val
