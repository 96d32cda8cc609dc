"""Selects the clause-writing backend.

The compiled extension is used when built; otherwise the pure-Python
fallback.  Set ``UNITSAT_KERNEL=python`` to force the fallback (used by
the backend-comparison benchmark and tests).
"""

import os

if os.environ.get("UNITSAT_KERNEL", "").lower() in ("python", "py", "pure"):
    from . import _dimacs_py as _impl
else:
    try:
        from . import _dimacs_core as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _dimacs_py as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND
write_conflict_clauses = _impl.write_conflict_clauses
write_membership_clauses = _impl.write_membership_clauses
