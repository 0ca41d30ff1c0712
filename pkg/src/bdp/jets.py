"""First and second directional derivatives of maps (jet propagation).

A map carries optional analytic derivative callbacks; when they are absent
the functions here fall back to central finite differences.  ``fd_oracle``
never touches the callbacks and serves as the independent cross-check.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, EvaluationError, OutOfRegionError

_EPS = np.finfo(float).eps

#: default step scale for first derivatives (truncation/round-off balance)
STEP1 = _EPS ** (1.0 / 3.0)
#: default step scale for second derivatives
STEP2 = _EPS ** (1.0 / 4.0)


@dataclass(frozen=True)
class FDConfig:
    """Finite-difference configuration: base step scale, central order 2."""

    step_scale: float = STEP1

    def __post_init__(self):
        if not self.step_scale > 0:
            raise ValueError("step_scale must be positive")


@dataclass(frozen=True)
class Jet1:
    value: np.ndarray
    deriv: np.ndarray


@dataclass(frozen=True)
class Jet2:
    value: np.ndarray
    first: np.ndarray
    second: np.ndarray


def _as_vec(x, d, name):
    x = np.asarray(x, dtype=float)
    if x.shape != (d,):
        raise DimensionMismatchError(f"{name} must have shape ({d},), got {x.shape}")
    return x


def eval_map(m, x):
    """Evaluate ``m`` at ``x``, enforcing the validity region and finiteness."""
    x = _as_vec(x, m.dim, "x")
    region = getattr(m, "region", None)
    if region is not None and not region.contains(x):
        raise OutOfRegionError(x)
    y = np.asarray(m.func(x), dtype=float)
    if y.shape != (m.dim,):
        raise DimensionMismatchError(f"map output has shape {y.shape}, expected ({m.dim},)")
    if not np.all(np.isfinite(y)):
        raise EvaluationError(f"non-finite map value at {x}")
    return y


def _step(x, scale):
    return scale * max(1.0, float(np.linalg.norm(x)))


def _fd_dir1(m, x, v, h):
    # central difference of t -> f(x + t v) at t = 0
    return (eval_map(m, x + h * v) - eval_map(m, x - h * v)) / (2.0 * h)


def push_jet1(m, x, v, cfg=None):
    """Value and first directional derivative: (f(x), D_x f · v)."""
    x = _as_vec(x, m.dim, "x")
    v = _as_vec(v, m.dim, "v")
    value = eval_map(m, x)
    if m.jacobian is not None:
        deriv = np.asarray(m.jacobian(x), dtype=float) @ v
    else:
        h = _step(x, cfg.step_scale if cfg is not None else STEP1)
        deriv = _fd_dir1(m, x, v, h)
    return Jet1(value, deriv)


def push_jet2(m, x, u, v, cfg=None):
    """Value, first derivative along v and bilinear second derivative D²_x f(u, v).

    The second derivative falls back to a central difference (along v) of the
    directional first derivative along u, nested when no Jacobian is available.
    """
    x = _as_vec(x, m.dim, "x")
    u = _as_vec(u, m.dim, "u")
    v = _as_vec(v, m.dim, "v")
    value = eval_map(m, x)
    if m.jacobian is not None:
        first = np.asarray(m.jacobian(x), dtype=float) @ v
    else:
        first = _fd_dir1(m, x, v, _step(x, STEP1))

    if m.second is not None:
        second = np.asarray(m.second(x, u, v), dtype=float)
    elif m.jacobian is not None:
        h = _step(x, STEP1 if cfg is None else cfg.step_scale)
        ju_p = np.asarray(m.jacobian(x + h * v), dtype=float) @ u
        ju_m = np.asarray(m.jacobian(x - h * v), dtype=float) @ u
        second = (ju_p - ju_m) / (2.0 * h)
    else:
        h = _step(x, STEP2 if cfg is None else cfg.step_scale)
        hi = _step(x, STEP2)
        ju_p = _fd_dir1(m, x + h * v, u, hi)
        ju_m = _fd_dir1(m, x - h * v, u, hi)
        second = (ju_p - ju_m) / (2.0 * h)
    return Jet2(value, first, second)


def fd_oracle(m, x, u, v, cfg=None):
    """Purely finite-difference jet, independent of any analytic callbacks.

    The second derivative uses the 4-point cross stencil, deliberately a
    different scheme from the nested differences in ``push_jet2``.
    """
    x = _as_vec(x, m.dim, "x")
    u = _as_vec(u, m.dim, "u")
    v = _as_vec(v, m.dim, "v")
    value = eval_map(m, x)
    first = _fd_dir1(m, x, v, _step(x, STEP1 if cfg is None else cfg.step_scale))
    h = _step(x, STEP2 if cfg is None else cfg.step_scale)
    second = (
        eval_map(m, x + h * u + h * v)
        - eval_map(m, x + h * u - h * v)
        - eval_map(m, x - h * u + h * v)
        + eval_map(m, x - h * u - h * v)
    ) / (4.0 * h * h)
    return Jet2(value, first, second)
