"""Elimination kernel selection.

The compiled extension is preferred when present; GERBEKIT_KERNEL=py or
GERBEKIT_KERNEL=c forces a backend (the latter raises if unavailable).
"""

from __future__ import annotations

import os

_choice = os.environ.get("GERBEKIT_KERNEL", "auto").lower()

if _choice not in ("auto", "py", "c"):
    _choice = "auto"

if _choice == "py":
    from ._fpkern_py import BACKEND, echelon_f2, echelon_fp
elif _choice == "c":
    from ._fpkern_c import BACKEND, echelon_f2, echelon_fp  # type: ignore
else:
    try:
        from ._fpkern_c import BACKEND, echelon_f2, echelon_fp  # type: ignore
    except ImportError:
        from ._fpkern_py import BACKEND, echelon_f2, echelon_fp

__all__ = ["BACKEND", "echelon_f2", "echelon_fp"]
