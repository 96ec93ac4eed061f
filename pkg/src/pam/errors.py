"""Exception hierarchy shared across the toolkit.

Every domain error derives from :class:`PamError` so the CLI can map any
of them to exit code 1 while genuine bugs still surface as tracebacks.
"""


class PamError(Exception):
    """Base class for all domain errors raised by this package."""


# --- event log ingestion ---

class MissingColumn(PamError):
    """A configured CSV column is absent from the header row."""


class EmptyLog(PamError):
    """The input file contains a header but zero event rows."""


class MalformedRow(PamError):
    """A data row has the wrong field count or an unparseable field."""


# --- windowing ---

class TraceTooShort(PamError):
    """Trace has fewer events than the requested number of windows."""


class OverlappingBins(PamError):
    """Window-count bins overlap or are otherwise invalid."""


# --- constraint templates ---

class UnsupportedParameter(PamError):
    """Count parameter outside the supported range for a counted template."""


class ArityMismatch(PamError):
    """Template invoked with the wrong number or shape of activity arguments."""


# --- miner ---

class ProfileMismatch(PamError):
    """Tensor slices from different profiles/alphabets were combined."""


# --- tensor store ---

class FormatError(PamError):
    """A tensor or prediction file violates the on-disk grammar."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


# --- metrics ---

class NoPositives(PamError):
    """Metric requires at least one positive label."""


class DegenerateLabels(PamError):
    """Metric requires both positive and negative labels."""


class HeaderMismatch(PamError):
    """Truth and prediction files disagree on alphabet, profile, or scheme."""


class MissingTrace(PamError):
    """Prediction set does not cover a trace present in the truth set."""


class TooFewTraces(PamError):
    """Dataset too small to split into train/validation/test."""


# --- baselines ---

class SingleWindowTrace(PamError):
    """Persistence prediction needs at least two windows per trace."""


class EmptyTraining(PamError):
    """Marginal-frequency baseline got an empty training set."""
