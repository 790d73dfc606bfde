class SdmlError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SdmlError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class ModelError(SdmlError):
    """Malformed model, model file, or world reference."""


class UnknownWorldError(ModelError):
    pass


class UnknownAtomError(SdmlError):
    pass


class UnboundVariableError(SdmlError):
    pass


class ResourceCapError(SdmlError):
    """A bounded search or enumeration would exceed its configured cap."""
