"""Exception hierarchy shared by every layer of the codec.

Contract violations (bad arguments from the caller) raise plain ``ValueError``.
Everything below describes a problem with the *data* being decoded or a
configuration the codec cannot represent.
"""


class NPFError(Exception):
    """Base class for all structured codec errors."""


class ConfigurationTooLargeError(NPFError):
    """A (k, d) configuration whose counts do not fit in 64 bits."""


class EmptyInputError(NPFError, ValueError):
    """An operation that needs at least one symbol received none."""


class UndefinedEntropyError(EmptyInputError):
    pass


class CorruptStreamError(NPFError):
    """Payload bytes decode to something no encoder could have produced."""


class InvalidRankError(CorruptStreamError):
    """A rank outside [0, psi(k, d, v)) for its inner sum."""


class TruncatedStreamError(NPFError):
    """Input ended before the decoder had everything it needed."""


class ChecksumMismatchError(CorruptStreamError):
    """Decoded bytes do not match the checksum stored in the header."""


class ContainerError(NPFError):
    """Base class for problems in the container framing."""


class BadMagicError(ContainerError):
    pass


class VersionMismatchError(ContainerError):
    pass


class LengthMismatchError(ContainerError):
    """Declared payload lengths disagree with the bytes present."""


class HeaderMalformedError(ContainerError):
    """Header fields are individually readable but mutually inconsistent."""


class MissingBoundaryStreamError(ContainerError):
    """Only the codeword half of a split container was supplied."""


class MissingCodewordStreamError(ContainerError):
    """Only the boundary half of a split container was supplied."""
