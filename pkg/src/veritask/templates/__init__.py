"""English task templates: registry, lexicon, rendering."""

from veritask.templates.model import (
    Clause,
    DEFAULT_LEXICON,
    Lexicon,
    Literal,
    SLOT_KINDS,
    Segment,
    Slot,
    parse_body,
    quote,
)
from veritask.templates.registry import (
    MT_POOLS,
    Registry,
    Template,
    load_default_registry,
    load_registry,
    parse_template_text,
    placeholder_text,
    validate_registry,
)
from veritask.templates.render import (
    enable_marker,
    expr_shape,
    features_of,
    meta_class,
    render_english,
    render_multi,
    select_template,
    suitable,
)

__all__ = [
    "Clause",
    "DEFAULT_LEXICON",
    "Lexicon",
    "Literal",
    "MT_POOLS",
    "Registry",
    "SLOT_KINDS",
    "Segment",
    "Slot",
    "Template",
    "enable_marker",
    "expr_shape",
    "features_of",
    "load_default_registry",
    "load_registry",
    "meta_class",
    "parse_body",
    "parse_template_text",
    "placeholder_text",
    "quote",
    "render_english",
    "render_multi",
    "select_template",
    "suitable",
    "validate_registry",
]
