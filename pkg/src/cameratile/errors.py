"""Exception types shared across the pipeline."""


class CameraTileError(Exception):
    """Base class for all pipeline errors."""


class AllBlackFrame(CameraTileError):
    """Border detection found no non-black content."""


class SizeMismatch(CameraTileError):
    """Two rasters that must share dimensions do not."""


class BackendFailure(CameraTileError):
    """A classifier backend could not be loaded or run; fatal for the run."""


class LengthMismatch(CameraTileError):
    """Prediction and truth sequences differ in length."""


class EmptyInput(CameraTileError):
    """A metric was requested on an empty sequence."""


class AlignmentError(CameraTileError):
    """Frame indices present on one side of an evaluation are missing on the other."""

    def __init__(self, missing_in_pred=(), missing_in_truth=()):
        self.missing_in_pred = sorted(missing_in_pred)
        self.missing_in_truth = sorted(missing_in_truth)
        super().__init__(
            f"frame alignment failed: missing in predictions {self.missing_in_pred[:10]}, "
            f"missing in truth {self.missing_in_truth[:10]}"
        )


class UnknownLabel(CameraTileError):
    """A confusion-matrix item carries a label outside the declared label set."""


class AnnotationParseError(CameraTileError):
    """An annotation CSV row could not be parsed; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class InvalidSpec(CameraTileError):
    """A synthetic-frame spec violates its invariants."""
