# -*- coding: UTF-8 -*-
"""
tractorholonomy.integrate
~~~~~~~~~~~~~~~~~~~~~~~~~

Adaptive Runge-Kutta integration with the embedded Cash-Karp 5(4) pair.

The state can be an array of any shape (transport integrates whole matrices).
The fifth order solution is propagated (local extrapolation) and the
difference with the fourth order solution controls the step size.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging

import numpy as np

from .exceptions import IntegratorFailure


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


# Cash-Karp tableau
_c = np.array([0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8])
_a = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [3 / 10, -9 / 10, 6 / 5],
    [-11 / 54, 5 / 2, -70 / 27, 35 / 27],
    [1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096],
]
_b5 = np.array([37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771])
_b4 = np.array([2825 / 27648, 0.0, 18575 / 48384, 13525 / 55296, 277 / 14336, 1 / 4])


class IntegratorSettings:
    def __init__(self, rtol=1e-10, atol=1e-12, first_step=None, min_step=1e-12, max_steps=20000,
                 safety=0.9):
        """Settings for the adaptive integrator.

        :param rtol: Relative tolerance per step
        :param atol: Absolute tolerance per step
        :param first_step: Initial step, default 1/50 of the interval
        :param min_step: Failure when the step becomes smaller than this (relative to the interval)
        :param max_steps: Failure when more accepted plus rejected steps are needed
        :param safety: Safety factor of the step size controller
        """
        self.rtol = rtol
        self.atol = atol
        self.first_step = first_step
        self.min_step = min_step
        self.max_steps = max_steps
        self.safety = safety

    @staticmethod
    def wrap(settings):
        if settings is None:
            return IntegratorSettings()
        if isinstance(settings, IntegratorSettings):
            return settings
        return IntegratorSettings(**settings)

    def refined(self):
        """Same settings with halved tolerances."""
        kwargs = self.kwargs()
        kwargs["rtol"] = self.rtol / 2
        kwargs["atol"] = self.atol / 2
        return IntegratorSettings(**kwargs)

    def kwargs(self):
        return {"rtol": self.rtol, "atol": self.atol, "first_step": self.first_step,
                "min_step": self.min_step, "max_steps": self.max_steps, "safety": self.safety}

    def __str__(self):
        return "IntegratorSettings({})".format(", ".join(f"{k}={v}" for k, v in self.kwargs().items()))


class IntegrationResult:
    def __init__(self, y, t_eval, y_eval, steps, rejected, error_estimate):
        self.y = y
        self.t_eval = t_eval
        self.y_eval = y_eval
        self.steps = steps
        self.rejected = rejected
        self.error_estimate = error_estimate


def cash_karp_step(rhs, t, y, h, k0=None):
    """One Cash-Karp step.

    Tableau from J. R. Cash and A. H. Karp, ACM Trans. Math. Softw. 16 (1990) 201-222.

    :return: Tuple (fifth order solution, difference with the fourth order solution)
    """
    ks = [rhs(t, y) if k0 is None else k0]
    for stage in range(1, 6):
        incr = sum(coef * k for coef, k in zip(_a[stage], ks))
        ks.append(rhs(t + _c[stage] * h, y + h * incr))
    y5 = y + h * sum(coef * k for coef, k in zip(_b5, ks) if coef != 0.0)
    err = h * sum((c5 - c4) * k for c5, c4, k in zip(_b5, _b4, ks))
    return y5, err


def integrate(rhs, y0, t_span=(0.0, 1.0), t_eval=None, settings=None):
    """Integrate y' = rhs(t, y) over t_span.

    :param rhs: Callable (t, y) -> array with the shape of y
    :param y0: Initial value (array of any shape)
    :param t_eval: Sorted parameters inside t_span where the solution is recorded.
        The integrator steps onto every one of them exactly.
    :return: IntegrationResult
    """
    settings = IntegratorSettings.wrap(settings)
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise IntegratorFailure(f"Empty integration interval [{t0}, {t1}]")
    y = np.array(y0, dtype=float)
    length = t1 - t0
    targets = [] if t_eval is None else sorted(float(t) for t in t_eval)
    if any(t < t0 or t > t1 for t in targets):
        raise IntegratorFailure("Evaluation parameters lie outside the integration interval")
    y_eval = []
    target_idx = 0
    while target_idx < len(targets) and targets[target_idx] <= t0:
        y_eval.append(y.copy())
        target_idx += 1
    h = settings.first_step if settings.first_step is not None else length / 50
    t = t0
    steps, rejected, error_estimate = 0, 0, 0.0
    while t < t1:
        if steps + rejected >= settings.max_steps:
            raise IntegratorFailure(f"Step budget of {settings.max_steps} exhausted at t={t}")
        stop = targets[target_idx] if target_idx < len(targets) else t1
        h_try = min(h, stop - t)
        landing = h_try >= stop - t
        y_new, err = cash_karp_step(rhs, t, y, h_try)
        scale = settings.atol + settings.rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = float(np.max(np.abs(err) / scale)) if err.size else 0.0
        if not np.isfinite(err_norm):
            raise IntegratorFailure(f"Non-finite error estimate at t={t}")
        if err_norm <= 1.0:
            t = stop if landing else t + h_try
            y = y_new
            steps += 1
            error_estimate += float(np.max(np.abs(err))) if err.size else 0.0
            while target_idx < len(targets) and targets[target_idx] <= t:
                y_eval.append(y.copy())
                target_idx += 1
            factor = 5.0 if err_norm == 0 else min(5.0, max(0.2, settings.safety * err_norm ** -0.2))
            if not landing or factor < 1.0:
                h = h_try * factor
        else:
            rejected += 1
            h = h_try * max(0.2, settings.safety * err_norm ** -0.25)
            if h < settings.min_step * length:
                raise IntegratorFailure(f"Step size underflow at t={t} (h={h:.3e})")
    logger.debug(f"Integrated [{t0}, {t1}] in {steps} steps ({rejected} rejected), error {error_estimate:.2e}")
    return IntegrationResult(y, targets, y_eval, steps, rejected, error_estimate)
