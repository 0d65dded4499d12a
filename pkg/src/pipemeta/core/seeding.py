"""
Deterministic seed derivation.

Every randomized step takes a seed derived from the run seed plus the names of
the things it acts on, so results never depend on execution order or worker count.
"""
import hashlib

_SEED_MODULUS = 2**31 - 1


def derive_seed(*parts: object) -> int:
    """Hash the given parts into a non-negative 31-bit seed."""
    text = "\x1f".join(str(part) for part in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % _SEED_MODULUS
