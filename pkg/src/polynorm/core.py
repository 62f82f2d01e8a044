"""Shared domain vocabulary: locales, categories, samples, run configuration."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional


class ValidationError(ValueError):
    """Raised when an input value violates a domain constraint."""


_LOCALE_RE = re.compile(r"^[a-z]{2}-[A-Z]{2}$")

# Only Chinese and Japanese are scored at character level.
_NON_WHITESPACE_TAGS = {"zh-CN", "ja-JP"}

KNOWN_LOCALE_NAMES = {
    "en-US": "American English",
    "de-DE": "German",
    "fr-FR": "French",
    "es-MX": "Mexican Spanish",
    "it-IT": "Italian",
    "lt-LT": "Lithuanian",
    "ja-JP": "Japanese",
    "zh-CN": "Mandarin Chinese",
}


@dataclass(frozen=True)
class Locale:
    tag: str
    whitespace_delimited: bool = True

    def display_name(self) -> str:
        return KNOWN_LOCALE_NAMES.get(self.tag, self.tag)


def parse_locale(tag: str) -> Locale:
    """Parse a ll-RR locale tag. Unknown well-formed tags default to whitespace-delimited."""
    if not _LOCALE_RE.match(tag or ""):
        raise ValidationError(
            f"malformed locale tag {tag!r}: expected pattern ll-RR (e.g. 'en-US')"
        )
    return Locale(tag=tag, whitespace_delimited=tag not in _NON_WHITESPACE_TAGS)


class Category(Enum):
    """The 27 normalization categories, in benchmark table order."""

    CARDINAL = "cardinal"
    DATE = "date"
    DECIMAL = "decimal"
    ORDINAL = "ordinal"
    FRACTION = "fraction"
    TIME = "time"
    CURRENCY = "currency"
    UNIT = "unit"
    ADDRESS = "address"
    ACRONYM_INITIALISM = "acronym_initialism"
    ISBN = "isbn"
    BIOLOGICAL_CLASSIFICATION = "biological_classification"
    ROMAN_NUMERAL = "roman_numeral"
    TELEPHONE = "telephone"
    SPORTS_SCORE = "sports_score"
    MATH_EXPRESSION = "math_expression"
    SYMBOL = "symbol"
    ABBREVIATION = "abbreviation"
    CHEMICAL_FORMULA = "chemical_formula"
    LEGAL_REFERENCE = "legal_reference"
    VEHICLE_PRODUCT_CODE = "vehicle_product_code"
    GEO_COORDINATES = "geo_coordinates"
    VERSION_NUMBER = "version_number"
    LICENSE_SERIAL = "license_serial"
    MUSICAL_NOTATION = "musical_notation"
    STOCK_TICKER = "stock_ticker"
    ELECTRONIC = "electronic"

    @property
    def display_name(self) -> str:
        return _DISPLAY_NAMES[self]


_DISPLAY_NAMES = {
    Category.CARDINAL: "Cardinal",
    Category.DATE: "Date",
    Category.DECIMAL: "Decimal",
    Category.ORDINAL: "Ordinal",
    Category.FRACTION: "Fraction",
    Category.TIME: "Time",
    Category.CURRENCY: "Currency",
    Category.UNIT: "Unit (Measure)",
    Category.ADDRESS: "Address",
    Category.ACRONYM_INITIALISM: "Acronym/Initialism",
    Category.ISBN: "ISBN",
    Category.BIOLOGICAL_CLASSIFICATION: "Biological Classification",
    Category.ROMAN_NUMERAL: "Roman Numeral",
    Category.TELEPHONE: "Telephone",
    Category.SPORTS_SCORE: "Sports Score",
    Category.MATH_EXPRESSION: "Mathematical Expression",
    Category.SYMBOL: "Symbol",
    Category.ABBREVIATION: "Abbreviation",
    Category.CHEMICAL_FORMULA: "Chemical Formula",
    Category.LEGAL_REFERENCE: "Legal Reference",
    Category.VEHICLE_PRODUCT_CODE: "Vehicle/Product Code",
    Category.GEO_COORDINATES: "Geographic Coordinates",
    Category.VERSION_NUMBER: "Version Number",
    Category.LICENSE_SERIAL: "License/Serial Number",
    Category.MUSICAL_NOTATION: "Musical Notation",
    Category.STOCK_TICKER: "Stock Ticker",
    Category.ELECTRONIC: "Electronic (URL/Email)",
}

# Documented aliases on top of canonical values and display names.
_CATEGORY_ALIASES = {
    "measure": Category.UNIT,
    "unit_measure": Category.UNIT,
    "url_email": Category.ELECTRONIC,
    "electronic_url_email": Category.ELECTRONIC,
    "electronic_address_url_or_email": Category.ELECTRONIC,
    "initialism_or_acronym": Category.ACRONYM_INITIALISM,
    "acronym": Category.ACRONYM_INITIALISM,
    "initialism": Category.ACRONYM_INITIALISM,
    "mathematical_expression": Category.MATH_EXPRESSION,
    "abbreviations": Category.ABBREVIATION,
    "geographic_coordinates": Category.GEO_COORDINATES,
    "license_serial_number": Category.LICENSE_SERIAL,
    "license_plate_or_serial_number": Category.LICENSE_SERIAL,
    "vehicle_or_product_code": Category.VEHICLE_PRODUCT_CODE,
    "phone_number": Category.TELEPHONE,
    "phone_numbers": Category.TELEPHONE,
}


def _category_key(name: str) -> str:
    # "Unit (Measure)" -> "unit_measure", "Acronym/Initialism" -> "acronym_initialism"
    key = re.sub(r"[^0-9a-z]+", "_", name.strip().lower())
    return key.strip("_")


_CATEGORY_LOOKUP: dict[str, Category] = {}
for _c in Category:
    _CATEGORY_LOOKUP[_c.value] = _c
    _CATEGORY_LOOKUP[_category_key(_c.display_name)] = _c
for _alias, _c in _CATEGORY_ALIASES.items():
    _CATEGORY_LOOKUP[_alias] = _c


def parse_category(name: str) -> Category:
    """Resolve a category name or alias, case-insensitively."""
    key = _category_key(name or "")
    cat = _CATEGORY_LOOKUP.get(key)
    if cat is None:
        valid = ", ".join(c.value for c in Category)
        raise ValidationError(f"unknown category {name!r}; valid names: {valid}")
    return cat


@dataclass(frozen=True)
class Sample:
    id: str
    locale: Locale
    category: Category
    original: str
    reference: str

    def __post_init__(self):
        if not self.original.strip():
            raise ValidationError(f"sample {self.id!r}: original text is empty")
        if not self.reference.strip():
            raise ValidationError(f"sample {self.id!r}: reference text is empty")


class Provenance(Enum):
    KESTREL_TRANSLATED = "kestrel_translated"
    SYNTHETIC = "synthetic"
    EXPERT_AUTHORED = "expert_authored"


@dataclass(frozen=True)
class IclExample:
    locale: Locale
    category: Category
    original: str
    normalized: str
    provenance: Provenance = Provenance.EXPERT_AUTHORED

    def __post_init__(self):
        if not self.normalized.strip():
            raise ValidationError("ICL example: normalized text is empty")


def icl_set_hash(examples: Iterable[IclExample]) -> str:
    """Order-independent content digest of an ICL example set."""
    parts = sorted(
        hashlib.sha256(
            json.dumps(
                [e.locale.tag, e.category.value, e.original, e.normalized, e.provenance.value],
                ensure_ascii=False,
            ).encode("utf-8")
        ).hexdigest()
        for e in examples
    )
    return hashlib.sha256("\n".join(parts).encode("ascii")).hexdigest()


@dataclass(frozen=True)
class Decoding:
    temperature: float = 0.0
    max_tokens: int = 1024


@dataclass(frozen=True)
class RunConfig:
    locale: Locale
    system_id: str
    iteration: int = 0
    icl_set_hash: str = ""
    decoding: Decoding = field(default_factory=Decoding)

    def __post_init__(self):
        if self.iteration < 0:
            raise ValidationError("iteration must be >= 0")

    def to_dict(self) -> dict:
        return {
            "locale": self.locale.tag,
            "system_id": self.system_id,
            "iteration": self.iteration,
            "icl_set_hash": self.icl_set_hash,
            "decoding": {
                "temperature": self.decoding.temperature,
                "max_tokens": self.decoding.max_tokens,
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        dec = d.get("decoding") or {}
        return cls(
            locale=parse_locale(d["locale"]),
            system_id=d["system_id"],
            iteration=int(d.get("iteration", 0)),
            icl_set_hash=d.get("icl_set_hash", ""),
            decoding=Decoding(
                temperature=float(dec.get("temperature", 0.0)),
                max_tokens=int(dec.get("max_tokens", 1024)),
            ),
        )


def render_category(c: Category) -> str:
    return c.value


ALL_CATEGORIES: tuple[Category, ...] = tuple(Category)
