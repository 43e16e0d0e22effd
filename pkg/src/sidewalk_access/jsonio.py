"""Canonical JSON serialization for every artifact the engine writes.

One dialect everywhere (sorted keys, two-space indent, trailing
newline, NaN rejected) so repeated runs produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import Any


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_canonical(path, obj: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_dumps(obj))
