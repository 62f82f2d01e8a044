"""Deterministic rule-based English normalizer used as a comparison baseline.

Tokenizes a sentence into semiotic-class spans and verbalizes each span in
place. English only; other locales raise UnsupportedLocaleError.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .core import Category, Locale

MONTH_NAMES = [
    "january", "february", "march", "april", "may", "june",
    "july", "august", "september", "october", "november", "december",
]

ONES = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen",
]
TENS = [
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
    "eighty", "ninety",
]
SCALES = [(10 ** 9, "billion"), (10 ** 6, "million"), (10 ** 3, "thousand")]

ORDINAL_IRREGULAR = {
    "one": "first", "two": "second", "three": "third", "five": "fifth",
    "eight": "eighth", "nine": "ninth", "twelve": "twelfth",
}


class UnsupportedValueError(ValueError):
    pass


class UnsupportedLocaleError(NotImplementedError):
    pass


def verbalize_cardinal(n: int) -> str:
    """English number name for 0 <= n < 10^12, without 'and'."""
    if n < 0 or n >= 10 ** 12:
        raise UnsupportedValueError(f"cardinal out of range: {n}")
    if n < 20:
        return ONES[n]
    words = []
    for scale, name in SCALES:
        if n >= scale:
            words.append(verbalize_cardinal(n // scale))
            words.append(name)
            n %= scale
    if n >= 100:
        words.append(ONES[n // 100])
        words.append("hundred")
        n %= 100
    if n >= 20:
        words.append(TENS[n // 10])
        if n % 10:
            words.append(ONES[n % 10])
    elif n > 0:
        words.append(ONES[n])
    return " ".join(words)


def verbalize_ordinal(n: int) -> str:
    """English ordinal words for 1 <= n < 10^6."""
    if n < 1 or n >= 10 ** 6:
        raise UnsupportedValueError(f"ordinal out of range: {n}")
    cardinal = verbalize_cardinal(n)
    words = cardinal.split(" ")
    last = words[-1]
    if last in ORDINAL_IRREGULAR:
        words[-1] = ORDINAL_IRREGULAR[last]
    elif last.endswith("y"):
        words[-1] = last[:-1] + "ieth"
    else:
        words[-1] = last + "th"
    return " ".join(words)


def verbalize_digits(digits: str) -> str:
    """Each digit read individually; zero is 'zero', never 'oh'."""
    return " ".join(ONES[int(d)] for d in digits if d.isdigit())


def verbalize_year(year: int) -> str:
    """2000-2009 read 'two thousand N'; other years as paired two-digit groups."""
    if 2000 <= year <= 2009:
        rest = year - 2000
        return "two thousand" + (" " + verbalize_cardinal(rest) if rest else "")
    high, low = divmod(year, 100)
    if low == 0:
        return verbalize_cardinal(high) + " hundred"
    if low < 10:
        return verbalize_cardinal(high) + " oh " + verbalize_cardinal(low)
    return verbalize_cardinal(high) + " " + verbalize_cardinal(low)


_DATE_MDY = re.compile(r"^(0?[1-9]|1[0-2])/(0?[1-9]|[12]\d|3[01])(?:/(\d{4}))?$")
_BARE_YEAR = re.compile(r"^(1\d{3}|20\d{2})$")


def verbalize_date(surface: str) -> str:
    """Month-day(-year) dates and bare years, month-day-year convention."""
    m = _DATE_MDY.match(surface)
    if m:
        month, day = int(m.group(1)), int(m.group(2))
        words = MONTH_NAMES[month - 1] + " " + verbalize_ordinal(day)
        if m.group(3):
            words += " " + verbalize_year(int(m.group(3)))
        return words
    y = _BARE_YEAR.match(surface)
    if y:
        return verbalize_year(int(y.group(1)))
    raise UnsupportedValueError(f"unparseable date: {surface!r}")


def verbalize_time(surface: str) -> str:
    """H:MM as hour words + minute words; never invents a meridiem."""
    hour_s, minute_s = surface.split(":")
    hour, minute = int(hour_s), int(minute_s)
    if minute == 0:
        return verbalize_cardinal(hour) + " o'clock"
    if minute < 10:
        return verbalize_cardinal(hour) + " oh " + verbalize_cardinal(minute)
    return verbalize_cardinal(hour) + " " + verbalize_cardinal(minute)


def verbalize_currency(surface: str) -> str:
    amount = surface.lstrip("$")
    if "." in amount:
        whole_s, frac_s = amount.split(".")
        whole, cents = int(whole_s), int(frac_s.ljust(2, "0")[:2])
        words = verbalize_cardinal(whole) + (" dollar" if whole == 1 else " dollars")
        if cents:
            words += " and " + verbalize_cardinal(cents) + (" cent" if cents == 1 else " cents")
        return words
    whole = int(amount)
    return verbalize_cardinal(whole) + (" dollar" if whole == 1 else " dollars")


def verbalize_decimal(surface: str) -> str:
    whole, frac = surface.split(".")
    return verbalize_cardinal(int(whole)) + " point " + verbalize_digits(frac)


def verbalize_sports_score(surface: str) -> str:
    a, b = surface.split("-")
    return verbalize_cardinal(int(a)) + " to " + verbalize_cardinal(int(b))


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    category: Optional[Category]  # None for plain text
    surface: str


# First-match priority order; earlier patterns win overlaps. Frozen for
# reproducibility.
_PATTERNS: list[tuple[Category, re.Pattern]] = [
    (Category.DATE, re.compile(r"\b(0?[1-9]|1[0-2])/(0?[1-9]|[12]\d|3[01])(?:/\d{4})?\b")),
    # bare year; lookarounds keep it out of phone numbers and slashed dates
    (Category.DATE, re.compile(r"(?<![-/\d.:])\b(1\d{3}|20\d{2})\b(?![-/\d.:])")),
    (Category.TIME, re.compile(r"\b([01]?\d|2[0-3]):[0-5]\d\b")),
    (Category.CURRENCY, re.compile(r"\$\d+(?:\.\d{1,2})?\b")),
    (Category.TELEPHONE, re.compile(r"\b\d{3}-\d{3}-\d{4}\b")),
    (Category.SPORTS_SCORE, re.compile(r"\b\d{1,2}-\d{1,2}\b")),
    (Category.ORDINAL, re.compile(r"\b(\d+)(st|nd|rd|th)\b")),
    (Category.DECIMAL, re.compile(r"\b\d+\.\d+\b")),
    (Category.CARDINAL, re.compile(r"\b\d+\b")),
]


def classify_spans(text: str) -> list[Span]:
    """Split text into non-overlapping spans covering the whole input."""
    taken: list[tuple[int, int, Category]] = []

    def overlaps(start: int, end: int) -> bool:
        return any(start < e and s < end for s, e, _ in taken)

    for category, pattern in _PATTERNS:
        for m in pattern.finditer(text):
            if not overlaps(m.start(), m.end()):
                taken.append((m.start(), m.end(), category))
    taken.sort()
    spans: list[Span] = []
    pos = 0
    for start, end, category in taken:
        if start > pos:
            spans.append(Span(pos, start, None, text[pos:start]))
        spans.append(Span(start, end, category, text[start:end]))
        pos = end
    if pos < len(text):
        spans.append(Span(pos, len(text), None, text[pos:]))
    return spans


_VERBALIZERS = {
    Category.DATE: verbalize_date,
    Category.TIME: verbalize_time,
    Category.CURRENCY: verbalize_currency,
    Category.TELEPHONE: lambda s: verbalize_digits(s),
    Category.SPORTS_SCORE: verbalize_sports_score,
    Category.ORDINAL: lambda s: verbalize_ordinal(int(re.sub(r"(st|nd|rd|th)$", "", s))),
    Category.DECIMAL: verbalize_decimal,
    Category.CARDINAL: lambda s: verbalize_cardinal(int(s)),
}


def normalize_sentence_with_flags(text: str) -> tuple[str, list[Span]]:
    """Normalize; returns the result plus spans that could not be verbalized."""
    out = []
    unverbalized: list[Span] = []
    for span in classify_spans(text):
        if span.category is None:
            out.append(span.surface)
            continue
        try:
            out.append(_VERBALIZERS[span.category](span.surface))
        except (UnsupportedValueError, ValueError):
            unverbalized.append(span)
            out.append(span.surface)
    return "".join(out), unverbalized


def normalize_sentence(text: str) -> str:
    return normalize_sentence_with_flags(text)[0]


def baseline_normalize(text: str, locale: Locale) -> str:
    if locale.tag != "en-US":
        raise UnsupportedLocaleError(
            f"rule-based baseline only supports en-US, got {locale.tag}"
        )
    return normalize_sentence(text)
