"""Exception and warning types shared across the toolkit."""


class CopticForgeError(Exception):
    """Base class for all toolkit errors."""


class MalformedXmlError(CopticForgeError):
    """Input XML is unparseable or falls outside the supported standoff subset."""


class DanglingReferenceError(CopticForgeError):
    """A standoff annotation points at an id that does not exist."""


class UnknownBookError(CopticForgeError):
    """A book label is absent from the book-name table."""


class DuplicateVerseIdError(CopticForgeError):
    """The same (book, chapter, verse) key was produced twice."""


class UnparseableReferenceError(CopticForgeError):
    """A verse reference does not match any supported format."""


class InvalidTableEntryError(CopticForgeError):
    """A mapping-table or TSV row violates the table's invariants."""


class InvalidRecordError(CopticForgeError):
    """A JSONL corpus line does not conform to the record schema."""


class MissingReferenceError(CopticForgeError):
    """A hypothesis has no matching reference pair."""


class IncompleteTableError(CopticForgeError):
    """A score table lacks the rows needed for drop analysis."""


class ConfigError(CopticForgeError):
    """Pipeline configuration failed validation.

    Validation is not fail-fast: ``violations`` carries every problem found.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class EmptyTestSplitWarning(UserWarning):
    """No pair matched any configured test book."""
