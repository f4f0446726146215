# -*- coding: UTF-8 -*-
"""
tractorholonomy
~~~~~~~~~~~~~~~

Conformal tractor calculus over coordinate metrics and numerical estimation
of metric, screen, ambient and conformal holonomy algebras.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


__version__ = "0.4.0"
__author__ = "Wannes Meert"
__copyright__ = "Copyright 2017-2025 KU Leuven, DTAI Research Group"
__license__ = "Apache License, Version 2.0"
