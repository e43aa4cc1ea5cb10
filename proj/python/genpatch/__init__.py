"""Generic patch mining, inference and application for C."""

from ._core import (
    GenpatchError,
    apply,
    canon,
    cluster,
    edit_script,
    infer,
    match,
    match_oracle,
    mine,
    npc,
    pattern_signature,
    render_pattern,
    reprint,
    reserialize_script,
    stats,
    validate_pattern,
)

__all__ = [
    "GenpatchError",
    "apply",
    "canon",
    "cluster",
    "edit_script",
    "infer",
    "match",
    "match_oracle",
    "mine",
    "npc",
    "pattern_signature",
    "render_pattern",
    "reprint",
    "reserialize_script",
    "stats",
    "validate_pattern",
]
