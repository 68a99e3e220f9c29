"""Runtime bounds for exhaustive operations."""

import os

DEFAULT_MAX_ORDER = 10**6
# pair tables are |K|^2 entries; triple scans are |K|^3
PAIR_TABLE_LIMIT = 1024
# verify_decomposition checks all pairs up to this order, generator pairs above
VERIFY_PAIRS_LIMIT = 256
TRIPLE_SCAN_LIMIT = 256


def max_order() -> int:
    """Exhaustive-operation bound, overridable with ``HEISEN_MAX_ORDER``."""
    raw = os.environ.get("HEISEN_MAX_ORDER")
    if raw is None:
        return DEFAULT_MAX_ORDER
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"HEISEN_MAX_ORDER must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("HEISEN_MAX_ORDER must be positive")
    return value
