"""Distinguished decryption-failure value.

Decryption routines in this package return FAIL instead of raising when
handed a ciphertext they cannot authenticate. Callers branch on
``result is FAIL``; the value is falsy so boolean guards also work.
"""

from __future__ import annotations


class _Fail:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "FAIL"

    def __bool__(self) -> bool:
        return False


FAIL = _Fail()
