"""Word-level Levenshtein alignment, WER, and hypothesis divergence.

All functions operate on token sequences (lists of strings); tokenization
and normalization are the caller's responsibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class EditSummary:
    """Counts of edit operations for one alignment of hypothesis to reference."""

    substitutions: int
    deletions: int
    insertions: int
    matches: int
    distance: int

    def __post_init__(self) -> None:
        assert self.distance == self.substitutions + self.deletions + self.insertions


def edit_align(ref: Sequence[str], hyp: Sequence[str]) -> EditSummary:
    """Minimum unit-cost edit alignment of ``hyp`` against ``ref``.

    The operation decomposition is canonical: among all minimum-distance
    alignments the one with the most matches is chosen, which makes the
    substitution/deletion/insertion split deterministic (matches are
    preferred over substitutions, which are preferred over delete+insert
    pairs). Given the match count M and distance d, the rest follows from
    the sequence lengths: S = |ref| + |hyp| - 2M - d, D = |ref| - M - S,
    I = |hyp| - M - S.
    """
    n_ref, n_hyp = len(ref), len(hyp)
    # Two-row DP over (distance, -matches), compared lexicographically.
    # prev[j] / cur[j] = best (distance, -matches) for ref[:i] vs hyp[:j].
    prev = [(j, 0) for j in range(n_hyp + 1)]
    for i in range(1, n_ref + 1):
        cur = [(i, 0)] + [(0, 0)] * n_hyp
        ref_tok = ref[i - 1]
        for j in range(1, n_hyp + 1):
            dd, dm = prev[j - 1]
            if ref_tok == hyp[j - 1]:
                best = (dd, dm - 1)
            else:
                best = (dd + 1, dm)
            ud, um = prev[j]
            if (ud + 1, um) < best:
                best = (ud + 1, um)
            ld, lm = cur[j - 1]
            if (ld + 1, lm) < best:
                best = (ld + 1, lm)
            cur[j] = best
        prev = cur
    distance, neg_matches = prev[n_hyp]
    matches = -neg_matches
    substitutions = n_ref + n_hyp - 2 * matches - distance
    deletions = n_ref - matches - substitutions
    insertions = n_hyp - matches - substitutions
    return EditSummary(
        substitutions=substitutions,
        deletions=deletions,
        insertions=insertions,
        matches=matches,
        distance=distance,
    )


def wer(ref: Sequence[str], hyp: Sequence[str]) -> float:
    """Word error rate of ``hyp`` against ``ref``: edit distance / |ref|.

    May exceed 1.0 when the hypothesis contains many insertions. Undefined
    (raises ValueError) for an empty reference; callers must exclude such
    utterances or handle the error.
    """
    if len(ref) == 0:
        raise ValueError("undefined WER: empty reference")
    return edit_align(ref, hyp).distance / len(ref)


def divergence(weak: Sequence[str], strong: Sequence[str]) -> float:
    """Disagreement rate between two recognizers' outputs for one utterance.

    The stronger engine's hypothesis is treated as the reference (it is the
    one whose error rate the downstream classifier predicts), so the value
    is edit distance / max(|strong|, 1). Two empty hypotheses diverge by 0.
    """
    if not weak and not strong:
        return 0.0
    dist = edit_align(strong, weak).distance
    return dist / max(len(strong), 1)
