"""Canonicalization and WER/CER/BLEU scoring with token alignments."""

from __future__ import annotations

import math
import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .core import Locale

# Punctuation stripped before scoring when not word-internal.
PUNCT = set(".,!?;:。、！？")


class LocaleMismatchError(ValueError):
    pass


class UndefinedRateError(ValueError):
    """Reference is empty after canonicalization."""


@dataclass(frozen=True)
class CanonicalText:
    locale: Locale
    tokens: tuple[str, ...]
    original: str


def canonicalize(text: str, locale: Locale) -> CanonicalText:
    """Apply scoring equivalences: NFKC, lowercase, de-DE ss, punctuation, tokenization.

    Whitespace locales split on whitespace with edge punctuation stripped
    (word-internal punctuation like decimals and apostrophes is preserved);
    non-whitespace locales yield one token per codepoint with whitespace
    removed entirely.
    """
    norm = unicodedata.normalize("NFKC", text).lower()
    if locale.tag == "de-DE":
        norm = norm.replace("ß", "ss")
    if locale.whitespace_delimited:
        tokens = []
        for tok in norm.split():
            start, end = 0, len(tok)
            while start < end and tok[start] in PUNCT:
                start += 1
            while end > start and tok[end - 1] in PUNCT:
                end -= 1
            if end > start:
                tokens.append(tok[start:end])
    else:
        tokens = [ch for ch in norm if not ch.isspace() and ch not in PUNCT]
    return CanonicalText(locale=locale, tokens=tuple(tokens), original=text)


@dataclass(frozen=True)
class AlignOp:
    op: str  # match | substitute | delete | insert
    ref_index: Optional[int]
    hyp_index: Optional[int]


@dataclass(frozen=True)
class Alignment:
    ops: tuple[AlignOp, ...]
    substitutions: int
    deletions: int
    insertions: int
    matches: int

    @property
    def distance(self) -> int:
        return self.substitutions + self.deletions + self.insertions


def _align_tokens(ref: tuple[str, ...], hyp: tuple[str, ...]) -> Alignment:
    n, m = len(ref), len(hyp)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dp[i][0] = i
    for j in range(1, m + 1):
        dp[0][j] = j
    for i in range(1, n + 1):
        row, prev = dp[i], dp[i - 1]
        ri = ref[i - 1]
        for j in range(1, m + 1):
            sub = prev[j - 1] + (0 if ri == hyp[j - 1] else 1)
            row[j] = min(sub, prev[j] + 1, row[j - 1] + 1)
    # traceback; tie-break match > substitute > delete > insert
    ops: list[AlignOp] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and dp[i][j] == dp[i - 1][j - 1]:
            ops.append(AlignOp("match", i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and dp[i][j] == dp[i - 1][j - 1] + 1:
            ops.append(AlignOp("substitute", i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and dp[i][j] == dp[i - 1][j] + 1:
            ops.append(AlignOp("delete", i - 1, None))
            i -= 1
        else:
            ops.append(AlignOp("insert", None, j - 1))
            j -= 1
    ops.reverse()
    counts = Counter(op.op for op in ops)
    return Alignment(
        ops=tuple(ops),
        substitutions=counts["substitute"],
        deletions=counts["delete"],
        insertions=counts["insert"],
        matches=counts["match"],
    )


def _merge_compound_blocks(
    ref: tuple[str, ...], hyp: tuple[str, ...]
) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Merge multi-token spellings of the same compound on both sides.

    Contiguous non-match alignment blocks whose space-insensitive joins are
    equal (e.g. "fünfundvierzig" vs "fünf und vierzig") are collapsed to a
    single token each so they re-align as matches.
    """
    alignment = _align_tokens(ref, hyp)
    new_ref: list[str] = []
    new_hyp: list[str] = []
    block_ref: list[str] = []
    block_hyp: list[str] = []

    def flush():
        if block_ref or block_hyp:
            joined_r, joined_h = "".join(block_ref), "".join(block_hyp)
            if block_ref and block_hyp and joined_r == joined_h:
                new_ref.append(joined_r)
                new_hyp.append(joined_h)
            else:
                new_ref.extend(block_ref)
                new_hyp.extend(block_hyp)
            block_ref.clear()
            block_hyp.clear()

    for op in alignment.ops:
        if op.op == "match":
            flush()
            new_ref.append(ref[op.ref_index])
            new_hyp.append(hyp[op.hyp_index])
        else:
            if op.ref_index is not None:
                block_ref.append(ref[op.ref_index])
            if op.hyp_index is not None:
                block_hyp.append(hyp[op.hyp_index])
    flush()
    return tuple(new_ref), tuple(new_hyp)


def align(
    ref: CanonicalText, hyp: CanonicalText, compound_merge: Optional[bool] = None
) -> Alignment:
    """Minimal unit-cost Levenshtein alignment with deterministic traceback.

    The compound-merge pass is on by default for de-DE only (optional
    spacing in compounds is not an error there).
    """
    if ref.locale.tag != hyp.locale.tag:
        raise LocaleMismatchError(f"{ref.locale.tag} vs {hyp.locale.tag}")
    if compound_merge is None:
        compound_merge = ref.locale.tag == "de-DE"
    ref_tokens, hyp_tokens = ref.tokens, hyp.tokens
    if compound_merge:
        ref_tokens, hyp_tokens = _merge_compound_blocks(ref_tokens, hyp_tokens)
    return _align_tokens(ref_tokens, hyp_tokens)


@dataclass(frozen=True)
class MetricValue:
    wer_or_cer: float
    bleu: float
    substitutions: int
    deletions: int
    insertions: int
    ref_len: int


def error_rate(
    ref: CanonicalText, hyp: CanonicalText, compound_merge: Optional[bool] = None
) -> MetricValue:
    """WER (or CER for non-whitespace locales) plus sentence-level BLEU."""
    if not ref.tokens:
        raise UndefinedRateError("reference is empty after canonicalization")
    alignment = align(ref, hyp, compound_merge=compound_merge)
    ref_len = alignment.matches + alignment.substitutions + alignment.deletions
    return MetricValue(
        wer_or_cer=alignment.distance / ref_len,
        bleu=bleu([(ref, hyp)]),
        substitutions=alignment.substitutions,
        deletions=alignment.deletions,
        insertions=alignment.insertions,
        ref_len=ref_len,
    )


def score_strings(ref: str, hyp: str, locale: Locale) -> MetricValue:
    return error_rate(canonicalize(ref, locale), canonicalize(hyp, locale))


def _ngrams(tokens: tuple[str, ...], n: int) -> Counter:
    return Counter(tokens[i : i + n] for i in range(len(tokens) - n + 1))


BLEU_EPSILON = 1e-9
BLEU_MAX_ORDER = 4


def bleu(pairs: list[tuple[CanonicalText, CanonicalText]]) -> float:
    """Corpus-level BLEU over canonical tokens, orders 1-4, uniform weights.

    Zero clipped-match counts are smoothed with epsilon 1e-9; orders with no
    candidate n-grams anywhere in the corpus are excluded from the geometric
    mean.
    """
    if not pairs:
        raise ValueError("empty corpus")
    first = pairs[0][0].locale.tag
    for r, h in pairs:
        if r.locale.tag != first or h.locale.tag != first:
            raise LocaleMismatchError("all pairs must share one locale")
    matched = [0] * BLEU_MAX_ORDER
    total = [0] * BLEU_MAX_ORDER
    ref_len = hyp_len = 0
    for ref, hyp in pairs:
        ref_len += len(ref.tokens)
        hyp_len += len(hyp.tokens)
        for n in range(1, BLEU_MAX_ORDER + 1):
            hyp_counts = _ngrams(hyp.tokens, n)
            if not hyp_counts:
                continue
            ref_counts = _ngrams(ref.tokens, n)
            total[n - 1] += sum(hyp_counts.values())
            matched[n - 1] += sum(
                min(c, ref_counts.get(g, 0)) for g, c in hyp_counts.items()
            )
    log_sum = 0.0
    used = 0
    for n in range(BLEU_MAX_ORDER):
        if total[n] == 0:
            continue
        p = (matched[n] if matched[n] > 0 else BLEU_EPSILON) / total[n]
        log_sum += math.log(p)
        used += 1
    if used == 0 or hyp_len == 0:
        return 0.0
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return bp * math.exp(log_sum / used)
