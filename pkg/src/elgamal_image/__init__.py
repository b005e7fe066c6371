"""ElGamal encryption over a primitive root of a prime, applied to images."""

from .cipher import (
    CipherImage,
    ElementCipher,
    Mode,
    cipher_preview,
    decrypt_image,
    decrypt_value,
    encrypt_image,
    encrypt_value,
    read_cipher,
    write_cipher,
)
from .imagecodec import ImageMatrix, load_image, save_image
from .keys import KeyPair, PrivateKey, PublicKey, derive_public, generate_keypair, load_key, save_key

__version__ = "0.1.0"
