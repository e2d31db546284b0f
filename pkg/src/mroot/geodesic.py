"""Geodesic integration for m-th root metrics.

Geodesics solve x'' = -2 G(x, x') with the spray evaluated exactly at
every stage.  The integrator is the classic fixed-step fourth-order
Runge-Kutta scheme; along a true geodesic the metric speed F(x, x') is
a first integral, and its drift is the standard accuracy diagnostic
recorded with the path.

Domains are bounded boxes and admissible cones can be narrow, so a
path may legitimately leave the region where the metric exists.  In
that case the path is truncated at the last completed node and flagged
instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (AdmissibleConeError, ConfigurationError,
                     DegenerateMetricError, DomainError)
from .field import SymTensorField
from .metric import MetricEval
from .spray import spray_mroot

__all__ = ["GeodesicPath", "integrate"]


@dataclass(eq=False)
class GeodesicPath:
    """A time-sampled geodesic arc.

    ``t`` has shape (k+1,), ``x`` and ``y`` have shape (k+1, n) and
    ``metric_speed[j] = F(x_j, y_j)``.  If the arc left the domain box
    or the admissible cone before reaching t_end, ``exited`` is set and
    ``exit_reason`` names the cause; k is then less than the requested
    step count.
    """

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    metric_speed: np.ndarray
    step: float
    exited: bool
    exit_reason: str | None


def _rhs(fld: SymTensorField, x: np.ndarray, y: np.ndarray):
    ev = MetricEval.at(fld, x, y)
    return y, -2.0 * spray_mroot(ev)


def integrate(fld: SymTensorField, x0, y0, t_end: float,
              steps: int) -> GeodesicPath:
    """Integrate the geodesic from (x0, y0) for time t_end in ``steps`` steps.

    The initial probe must be admissible; errors there propagate.
    Later cone or box exits truncate the path instead.  A non-finite
    state aborts with a degeneracy error since it indicates blowup
    inside the admissible region, not a clean exit.
    """
    if steps < 1:
        raise ConfigurationError("step count must be >= 1")
    t_end = float(t_end)
    if not t_end > 0.0:
        raise ConfigurationError("integration time must be positive")
    x = np.asarray(x0, dtype=float).copy()
    y = np.asarray(y0, dtype=float).copy()
    h = t_end / steps

    ts = [0.0]
    xs = [x.copy()]
    ys = [y.copy()]
    speeds = [MetricEval.at(fld, x, y).F]

    exited = False
    reason = None
    for k in range(steps):
        try:
            k1x, k1y = _rhs(fld, x, y)
            k2x, k2y = _rhs(fld, x + 0.5 * h * k1x, y + 0.5 * h * k1y)
            k3x, k3y = _rhs(fld, x + 0.5 * h * k2x, y + 0.5 * h * k2y)
            k4x, k4y = _rhs(fld, x + h * k3x, y + h * k3y)
            xn = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            yn = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            if not (np.all(np.isfinite(xn)) and np.all(np.isfinite(yn))):
                raise DegenerateMetricError(
                    f"geodesic state became non-finite at t={ts[-1] + h:.6g}")
            speed = MetricEval.at(fld, xn, yn).F
        except (DomainError, AdmissibleConeError) as err:
            exited = True
            reason = err.__class__.__name__
            break
        except DegenerateMetricError as err:
            if "non-finite" in str(err):
                raise
            exited = True
            reason = err.__class__.__name__
            break
        x, y = xn, yn
        ts.append((k + 1) * h)
        xs.append(x.copy())
        ys.append(y.copy())
        speeds.append(speed)

    return GeodesicPath(
        t=np.array(ts), x=np.array(xs), y=np.array(ys),
        metric_speed=np.array(speeds), step=h,
        exited=exited, exit_reason=reason)
