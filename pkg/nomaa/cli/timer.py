# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Wall-clock timing of sweeps and verification checks.
"""
import logging
import time

logger = logging.getLogger(__name__)


class Timer:
    def __init__(self, label=None):
        self.label = label
        self.start = None
        self.end = None
        self.interval = None

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *args):
        self.end = time.perf_counter()
        self.interval = self.end - self.start
        if self.label is not None:
            logger.debug("%s took %.3f s", self.label, self.interval)
