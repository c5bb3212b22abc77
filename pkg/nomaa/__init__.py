# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Entrypoint for nomaa modules.
"""

__version__ = "0.1.0"
__author__ = "nomaa developers"
__producer__ = "nomaa"
__producer_version__ = __version__
