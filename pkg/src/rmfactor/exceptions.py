class InvalidInputError(ValueError):
    """An argument is outside the domain of the operation."""


class GenerationError(RuntimeError):
    """The dataset generator ran out of retries."""


class DatasetFormatError(ValueError):
    """A dataset or report file could not be parsed."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
