#!/usr/bin/env python3
# encoding: utf-8
"""
check_installation.py

Created by Wannes Meert
Copyright (c) 2022 KU Leuven. All rights reserved.
"""

import sys

try:
    import tractorholonomy
    from tractorholonomy import util
except ImportError as exc:
    print("Cannot import tractorholonomy")
    sys.exit(1)

print('Location of tractorholonomy:')
print(tractorholonomy)

is_complete, _ = util.check_dependencies(verbose=True)
if not is_complete:
    sys.exit(1)

sys.exit(0)
