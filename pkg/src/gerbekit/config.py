"""Default resource caps, overridable through the GERBEKIT_CAP variable."""

from __future__ import annotations

import os

AUT_CAP = 24          # largest group whose automorphisms we enumerate
ISO_SEARCH_CAP = 64   # largest arrow set for isomorphism search
NAT2_BUDGET = 500_000  # candidate combinations tried by the 2-transformation search
MAX_NERVE_DIM = 4


def cap(default: int) -> int:
    """Resolve a cap, letting GERBEKIT_CAP override the built-in default."""
    value = os.environ.get("GERBEKIT_CAP")
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        return default
