"""Exception types shared across the toolkit.

Every error raised on a bad input path derives from VeritaskError so the
command line wrapper can map them onto a single "data error" exit code.
Anything else escaping a command is treated as an internal fault.
"""

from __future__ import annotations


class VeritaskError(Exception):
    """Base class for all expected failure modes."""


class ConfigError(VeritaskError):
    """A configuration file or plan entry could not be parsed."""


class IdentifierExhaustionError(VeritaskError):
    """sample_identifier gave up finding an unused, non-reserved name."""


class NoSuitableTemplateError(VeritaskError):
    """No template in the active pool can express the sampled task.

    Carries the features that could not be matched so callers can report
    which clause support is missing.
    """

    def __init__(self, class_name: str, unmet: set[str]):
        self.class_name = class_name
        self.unmet = set(unmet)
        wanted = ", ".join(sorted(self.unmet)) or "(none)"
        super().__init__(
            f"no suitable template for class {class_name!r}; unmet features: {wanted}"
        )


class UnfilledSlotError(VeritaskError):
    """A template slot had no value available during rendering."""


class GenerationError(VeritaskError):
    """Corpus generation failed for one (template_id, index) pair."""

    def __init__(self, template_id: str, index: int, reason: str):
        self.template_id = template_id
        self.index = index
        super().__init__(f"{template_id}[{index}]: {reason}")


class RegistryError(VeritaskError):
    """A template registry file is malformed or fails validation."""


class CorpusFormatError(VeritaskError):
    """A corpus, manifest or prediction file violates its format."""


class DuplicateKeyError(CorpusFormatError):
    """Two records share a (template_id, index) key."""


class MissingPredictionError(VeritaskError):
    """evaluate_run found corpus keys with no prediction.

    The offending keys are kept on the exception for reporting.
    """

    def __init__(self, keys: list[tuple[str, int]]):
        self.keys = list(keys)
        head = ", ".join(f"{t}:{i}" for t, i in self.keys[:5])
        more = "" if len(self.keys) <= 5 else f" (+{len(self.keys) - 5} more)"
        super().__init__(f"missing predictions for {len(self.keys)} keys: {head}{more}")


class NoMatchError(VeritaskError):
    """The baseline translator matched no template.

    best_span holds the furthest (start, end) character interval any
    template matched, which is the most useful debugging breadcrumb.
    """

    def __init__(self, text: str, best_span: tuple[int, int]):
        self.text = text
        self.best_span = best_span
        super().__init__(
            f"no template matches; best partial match covers {best_span[0]}..{best_span[1]} "
            f"of {len(text)} characters"
        )


class AmbiguousMatchError(VeritaskError):
    """More than one template fully matched a prompt."""

    def __init__(self, template_ids: list[str]):
        self.template_ids = list(template_ids)
        super().__init__("ambiguous match: " + ", ".join(self.template_ids))
