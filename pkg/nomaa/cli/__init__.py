# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Experiment driver: sweeps to CSV, crossover maps, single-draw decisions and the verification suite.
"""
from .config import SweepSpec  # noqa: F401
from .run import main  # noqa: F401
from .sweep import rho_min_map, run_sweep, write_csv  # noqa: F401
from .verify import run_verify  # noqa: F401
