"""Exception hierarchy.

Every error carries a short kebab-case ``code`` so the CLI can report it by
name. ``CryptoError`` subclasses map to exit status 3, ``FormatError``
subclasses to exit status 4.
"""


class ElGamalImageError(Exception):
    code = "error"


class CryptoError(ElGamalImageError):
    code = "crypto-error"


class FormatError(ElGamalImageError):
    code = "format-error"


# -- number theory ---------------------------------------------------------

class InvalidModulusError(CryptoError, ValueError):
    code = "invalid-modulus"


class NotInvertibleError(CryptoError, ValueError):
    code = "not-invertible"


class FactorizationIncompleteError(CryptoError):
    code = "factorization-incomplete"

    def __init__(self, message, cofactor=None):
        super().__init__(message)
        self.cofactor = cofactor


class InvalidArgumentError(CryptoError, ValueError):
    code = "invalid-argument"


# -- keys -------------------------------------------------------------------

class KeyTooSmallError(CryptoError, ValueError):
    code = "key-too-small"


class InvalidKeyError(CryptoError, ValueError):
    code = "invalid-key"


class KeyParseError(FormatError, ValueError):
    code = "key-parse"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


# -- images -----------------------------------------------------------------

class UnsupportedImageError(FormatError):
    code = "unsupported-image"


class ImageDecodeError(FormatError):
    code = "decode-error"


class LossyOutputRefusedError(FormatError):
    code = "lossy-output-refused"


# -- cipher -----------------------------------------------------------------

class PlaintextOutOfRangeError(CryptoError, ValueError):
    code = "plaintext-out-of-range"


class InvalidEphemeralError(CryptoError, ValueError):
    code = "invalid-ephemeral"


class ModulusTooSmallError(CryptoError, ValueError):
    code = "modulus-too-small"


class WrongKeyOrCorruptError(CryptoError):
    code = "wrong-key-or-corrupt"


class KeyMismatchError(CryptoError):
    code = "key-mismatch"


class ContainerFormatError(FormatError):
    code = "container-format"

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


# -- analysis ---------------------------------------------------------------

class InsufficientDataError(FormatError, ValueError):
    code = "insufficient-data"


class InvalidComparisonError(FormatError, ValueError):
    code = "invalid-comparison"


class RefuseLargeModulusError(CryptoError, ValueError):
    code = "refuse-large-modulus"


class DiscreteLogNotFoundError(CryptoError):
    code = "internal-error"
