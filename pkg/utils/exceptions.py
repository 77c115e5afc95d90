class TranslitPipelineError(Exception):
    """Base class for errors raised by the transliteration pipeline."""
    pass


class ConfigError(TranslitPipelineError):
    """Exception raised when a setting or argument is outside its valid range."""
    pass


class DataFormatError(TranslitPipelineError):
    """Exception raised when input data cannot be read or is inconsistent."""
    pass


class TextDecodeError(DataFormatError):
    """Exception raised when a line is not valid UTF-8."""

    def __init__(self, byte_offset, reason=""):
        self.byte_offset = byte_offset
        message = f"Invalid UTF-8 at byte offset {byte_offset}"
        if reason:
            message += f": {reason}"
        super().__init__(message)


class PharaohParseError(DataFormatError):
    """Exception raised when an alignment token is not of the form i-j."""

    def __init__(self, token):
        self.token = token
        super().__init__(f"Malformed alignment token '{token}'")


class AlignmentRangeError(DataFormatError):
    """Exception raised when an alignment link points outside the sentence pair."""
    pass


class ModelFormatError(DataFormatError):
    """Exception raised when a model, LM or phrase-table file is malformed."""
    pass


class EmptyInputError(DataFormatError):
    """Exception raised when an operation receives no data to work on."""
    pass


class NumericError(TranslitPipelineError):
    """Exception raised when a numerical procedure fails."""
    pass


class EMDivergenceError(NumericError):
    """Exception raised when the EM log-likelihood becomes NaN or decreases."""
    pass
