"""polynorm: multilingual text-normalization workbench."""

from .core import (
    Category,
    IclExample,
    Locale,
    RunConfig,
    Sample,
    parse_category,
    parse_locale,
)

__version__ = "0.1.0"

__all__ = [
    "Category",
    "IclExample",
    "Locale",
    "RunConfig",
    "Sample",
    "parse_category",
    "parse_locale",
    "__version__",
]
