"""Citation-marker normalization.

Inline numbered markers like ``[3]`` or ``[1, 4,7]`` are replaced by a
single opaque ``[REF]`` token each, with a sidecar table mapping the
marker back to the paper ids its numbers resolve to. Markers whose
numbers all fail to resolve are removed from the text entirely.
"""

from __future__ import annotations

import re

REF_TOKEN = "[REF]"

_MARKER_RE = re.compile(r"\[\s*(\d+(?:\s*[,;]\s*\d+)*)\s*\]")


def normalize_markers(
    sentence: str, bibliography: dict[str, dict]
) -> tuple[str, list[list[str]], int]:
    """Replace each resolvable marker with ``[REF]``.

    Returns the rewritten sentence, one cited-paper-id list per emitted
    ``[REF]`` (in left-to-right order), and the number of marker ids that
    failed to resolve.
    """
    resolutions: list[list[str]] = []
    unresolved = 0

    def substitute(match: re.Match) -> str:
        nonlocal unresolved
        ids = []
        for number in re.split(r"[,;]", match.group(1)):
            entry = bibliography.get(number.strip())
            if entry is None:
                unresolved += 1
                continue
            paper_id = str(entry.get("paper_id", "")).strip()
            if paper_id:
                ids.append(paper_id)
            else:
                unresolved += 1
        if not ids:
            return ""
        resolutions.append(sorted(set(ids)))
        return f" {REF_TOKEN} "

    rewritten = _MARKER_RE.sub(substitute, sentence)
    rewritten = re.sub(r"\s+", " ", rewritten).strip()
    return rewritten, resolutions, unresolved
