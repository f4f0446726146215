# -*- coding: UTF-8 -*-
"""
tractorholonomy.util
~~~~~~~~~~~~~~~~~~~~

Utility functions for tractorholonomy.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import os
import logging
import tempfile
import importlib
from pathlib import Path
from enum import Enum

import numpy as np


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


tractorholonomy_dir = os.path.abspath(os.path.dirname(__file__))


def test_quick():
    """Tests that run loop ensembles use fewer loops when this returns True."""
    if "TRACTORHOLONOMY_QUICK" in os.environ and os.environ["TRACTORHOLONOMY_QUICK"] == "1":
        return True
    return False


def check_dependencies(verbose=False):
    """Check that the required and optional dependencies can be imported.

    :return: Tuple (is_complete, messages)
    """
    is_complete = True
    msgs = []
    for name, required in [("numpy", True), ("scipy", True), ("sympy", True), ("tqdm", False)]:
        try:
            module = importlib.import_module(name)
            msgs.append('{} version: {}'.format(name, getattr(module, "__version__", "unknown")))
        except ImportError as exc:
            if required:
                is_complete = False
                msgs.append('Cannot import {} (required)'.format(name))
            else:
                msgs.append('Cannot import {} (optional dependency)'.format(name))
            msgs.append(str(exc))
    if verbose:
        for msg in msgs:
            print('- {}'.format(msg))
    return is_complete, msgs


def prepare_directory(directory=None):
    """Prepare the given directory, create it if necessary.
    If no directory is given, a new directory will be created in the system's temp directory.
    """
    if directory is not None:
        directory = Path(directory)
        if not directory.exists():
            directory.mkdir(parents=True)
        logger.debug("Using directory: {}".format(directory))
        return Path(directory)
    directory = tempfile.mkdtemp(prefix="tractorholonomy_")
    logger.debug("Using directory: {}".format(directory))
    return Path(directory)


def tensor_scale(*tensors):
    """Scale used for relative tolerances: largest absolute component plus 1e-30."""
    scale = 0.0
    for tensor in tensors:
        tensor = np.asarray(tensor, dtype=float)
        if tensor.size > 0:
            scale = max(scale, float(np.max(np.abs(tensor))))
    return scale + 1e-30


def max_abs(tensor):
    tensor = np.asarray(tensor, dtype=float)
    if tensor.size == 0:
        return 0.0
    return float(np.max(np.abs(tensor)))


class DDType(str, Enum):

    def to_int(self):
        return list(self.__class__).index(self)

    @classmethod
    def from_int(cls, value):
        return list(cls)[value]

    @classmethod
    def wrap(cls, val, default_val=None):
        if val is None:
            val = default_val
        if isinstance(val, cls):
            return val
        elif type(val) is str:
            try:
                return cls(val)
            except ValueError as exc:
                pass
        elif type(val) is int:
            try:
                return cls.from_int(val)
            except IndexError as exc:
                pass
        raise ValueError(f'Value not supported for {cls.__name__}: {val}')


class Mode(DDType):
    TANGENT = "tangent"
    TRACTOR = "tractor"


class Tolerances:
    def __init__(self, symmetry=1e-8, degeneracy=1e-10, einstein=1e-7, c_space=1e-7,
                 identity=1e-7, cotton_divergence=1e-6, weyl_covariance=1e-8,
                 transport=1e-6, recognizer=1e-8, subbundle=1e-7, joint_kernel=1e-7,
                 invariance=1e-6, isotropy=1e-8, causal=1e-9, stabilizer=1e-8,
                 berger=1e-7, svd_threshold=1e-6, scale=1.0):
        """Thresholds used for verdicts.

        Every threshold is relative to the scale of the quantity it is compared
        against (see :func:`tensor_scale`).

        :param scale: Global multiplier applied to every threshold (the
            ``--tol-scale`` command line flag). The SVD threshold is not scaled
            because it decides a rank, not a residual.
        """
        self.symmetry = symmetry
        self.degeneracy = degeneracy
        self.einstein = einstein
        self.c_space = c_space
        self.identity = identity
        self.cotton_divergence = cotton_divergence
        self.weyl_covariance = weyl_covariance
        self.transport = transport
        self.recognizer = recognizer
        self.subbundle = subbundle
        self.joint_kernel = joint_kernel
        self.invariance = invariance
        self.isotropy = isotropy
        self.causal = causal
        self.stabilizer = stabilizer
        self.berger = berger
        self.svd_threshold = svd_threshold
        self.scale = scale

    def __getattribute__(self, item):
        value = object.__getattribute__(self, item)
        if item in ("scale", "svd_threshold", "degeneracy") or not isinstance(value, float):
            return value
        return value * object.__getattribute__(self, "scale")

    def kwargs(self):
        return {key: object.__getattribute__(self, key) for key in self.__dict__}

    def override(self, **kwargs):
        values = self.kwargs()
        for key, value in kwargs.items():
            if key not in values:
                raise ValueError(f'Unknown tolerance: {key}')
            if value is None or value <= 0:
                raise ValueError(f'Tolerance {key} should be positive, got {value}')
            values[key] = float(value)
        return Tolerances(**values)

    def __str__(self):
        return "Tolerances({})".format(", ".join(f"{k}={v}" for k, v in self.kwargs().items()))

    @staticmethod
    def wrap(tolerances):
        if tolerances is None:
            return Tolerances()
        if isinstance(tolerances, Tolerances):
            return tolerances
        return Tolerances(**tolerances)


default_tolerances = Tolerances()
