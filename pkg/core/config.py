"""
fb/core/config.py
─────────────────
Central configuration & constants for fb (fusion / Burnside toolkit).
"""

import os

# ─── App Identity ─────────────────────────────────────────────────────────────
APP_NAME        = "fb"
APP_TAGLINE     = "Burnside rings of saturated fusion systems"
APP_VERSION     = "1.0.0"

# ─── Filesystem Layout ────────────────────────────────────────────────────────
APP_DIR         = os.path.join(os.path.expanduser("~"), ".fb")
LOG_FILE        = os.path.join(APP_DIR, "fb.log")

# ─── Size Caps ────────────────────────────────────────────────────────────────
ORDER_CAP               = 512       # largest |G| accepted by build_lattice
AUT_SEARCH_CAP          = 64        # largest |P| for generic Aut backtracking
AUT_ELEMENTARY_RANK_CAP = 6         # largest rank for the GL(k,2) fast path
AUT_ORDER_CAP           = 250_000   # largest |Aut(P)| ever enumerated
UNIT_CLASS_CAP          = 24        # generic unit search: conjugacy classes
UNIT_FILTER_RANK_CAP    = 16        # stable-unit cross-check: 2**rank sweep
ENUMERATION_CROSSCHECK_CLASSES = 12 # exhaustive ±1 sweep for cross-checks

# ─── Randomized Checks ────────────────────────────────────────────────────────
DEFAULT_SEED            = 7
RANDOM_STABLE_SAMPLES   = 200
RANDOM_MARK_VECTORS     = 1000

# ─── Reports ──────────────────────────────────────────────────────────────────
DEFAULT_FORMAT  = "tsv"
FORMATS         = ("tsv", "json")

# ─── Exit Codes ───────────────────────────────────────────────────────────────
EXIT_OK         = 0
EXIT_FAILURE    = 1
EXIT_USAGE      = 2
