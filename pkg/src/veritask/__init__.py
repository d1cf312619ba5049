"""Template-based English/Verilog task corpus tooling.

The package generates paired natural-language hardware tasks and their
reference Verilog snippets from a template registry, lints the snippet
subset, scores candidate translations, and ships a pattern-matching
baseline translator plus a command line front end for the whole pipeline.

The most common entry points are re-exported here; the full API lives in
the submodules (corpus, evaluate, templates, translate, lint, ...).
"""

from veritask.emit import emit
from veritask.similarity import ro_similarity
from veritask.translate import Translator, parse_task, translate

__version__ = "0.1.0"

__all__ = [
    "Translator",
    "__version__",
    "emit",
    "parse_task",
    "ro_similarity",
    "translate",
]
