"""Deterministic tree signatures with one-time keys at every prefix.

A message is an n-bit integer addressing a leaf of a depth-n binary tree.
Every tree prefix owns a one-time keypair; all of them except the root are
re-derived on demand from a puncturable PRF, so the secret key is constant
size and signing is a pure function of (sk, m). Each signature carries, per
level, both child verification keys and the parent's one-time signature over
their concatenation, then a PRF tag for the message signed by the leaf key.

A toy plus-one forgery game is included: an adversary with superposition
access to the signing oracle (as label-register XOR on a HybridState) must
produce one more distinct valid message/signature pair than its query budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hilbert import HybridState
from .primitives import (
    OtsKeypair,
    PprfKey,
    ots_gen,
    ots_setup_from_seed,
    ots_sig_len,
    ots_sign,
    ots_verify,
    ots_vk_len,
    pprf_eval,
    pprf_gen,
)

MAX_MESSAGE_BITS = 56  # prefix encoding prepends a length byte


@dataclass(frozen=True)
class TreeSigSecretKey:
    sk_root: OtsKeypair
    key_prf: PprfKey         # derives per-prefix keypair seeds
    tag_prf: PprfKey         # n-bit message -> tag_bits tag
    n: int
    digest_bits: int
    tag_bits: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)


@dataclass(frozen=True)
class TreeSigVerifyKey:
    vk_root: bytes
    n: int
    digest_bits: int
    tag_bits: int


@dataclass(frozen=True)
class TreeSignature:
    links: tuple[tuple[bytes, bytes, bytes], ...]  # (vk child 0, vk child 1, parent sig)
    y: bytes
    isig: bytes

    def to_bytes(self) -> bytes:
        return b"".join(b"".join(link) for link in self.links) + self.y + self.isig


def signature_len(n: int, digest_bits: int, tag_bits: int) -> int:
    vk_len = ots_vk_len(digest_bits)
    sig_len = ots_sig_len(digest_bits)
    return n * (2 * vk_len + sig_len) + tag_bits // 8 + sig_len


def signature_from_bytes(blob: bytes, n: int, digest_bits: int, tag_bits: int) -> TreeSignature:
    if len(blob) != signature_len(n, digest_bits, tag_bits):
        raise ValueError("signature blob has wrong length")
    vk_len = ots_vk_len(digest_bits)
    sig_len = ots_sig_len(digest_bits)
    links = []
    off = 0
    for _ in range(n):
        pl0 = blob[off : off + vk_len]
        pl1 = blob[off + vk_len : off + 2 * vk_len]
        sigpl = blob[off + 2 * vk_len : off + 2 * vk_len + sig_len]
        links.append((pl0, pl1, sigpl))
        off += 2 * vk_len + sig_len
    y = blob[off : off + tag_bits // 8]
    isig = blob[off + tag_bits // 8 :]
    return TreeSignature(tuple(links), y, isig)


def _prefix_input(depth: int, value: int, n: int) -> int:
    # length byte then the prefix bits left-aligned in an n-bit field, so
    # prefixes of different depths never collide
    return (depth << n) | (value << (n - depth))


def _prefix_keypair(sk: TreeSigSecretKey, depth: int, value: int) -> OtsKeypair:
    if depth == 0:
        return sk.sk_root
    cached = sk._cache.get((depth, value))
    if cached is not None:
        return cached
    seed = pprf_eval(sk.key_prf, _prefix_input(depth, value, sk.n))
    kp = ots_setup_from_seed(sk.digest_bits, seed)
    if len(sk._cache) < 1 << 16:
        sk._cache[(depth, value)] = kp
    return kp


def setup(n: int, tag_bits: int, rng: np.random.Generator,
          digest_bits: int = 24) -> tuple[TreeSigVerifyKey, TreeSigSecretKey]:
    if not 1 <= n <= MAX_MESSAGE_BITS:
        raise ValueError(f"message bits must be in [1, {MAX_MESSAGE_BITS}]")
    if tag_bits < 8 or tag_bits % 8:
        raise ValueError("tag_bits must be a positive multiple of 8")
    sk_root = ots_gen(digest_bits, rng)
    key_prf = pprf_gen(8 + n, 256, rng)
    tag_prf = pprf_gen(n, tag_bits, rng)
    sk = TreeSigSecretKey(sk_root, key_prf, tag_prf, n, digest_bits, tag_bits)
    vk = TreeSigVerifyKey(sk_root.vk_bytes(), n, digest_bits, tag_bits)
    return vk, sk


def sign(sk: TreeSigSecretKey, m: int) -> TreeSignature:
    if not 0 <= m < (1 << sk.n):
        raise ValueError("message out of range for this key")
    links = []
    for t in range(1, sk.n + 1):
        parent_value = m >> (sk.n - (t - 1))
        parent = _prefix_keypair(sk, t - 1, parent_value)
        child0 = _prefix_keypair(sk, t, parent_value << 1)
        child1 = _prefix_keypair(sk, t, (parent_value << 1) | 1)
        pl0, pl1 = child0.vk_bytes(), child1.vk_bytes()
        links.append((pl0, pl1, ots_sign(parent, pl0 + pl1)))
    y = pprf_eval(sk.tag_prf, m)
    isig = ots_sign(_prefix_keypair(sk, sk.n, m), y)
    return TreeSignature(tuple(links), y, isig)


# Verification is pure, so results of the one-time checks can be memoized.
# Verifying many signatures under one key repeats the shallow-link checks
# verbatim; the memo turns those into lookups.
_OTS_MEMO: dict = {}
_OTS_MEMO_CAP = 1 << 17


def _ots_verify_memo(vk_bytes: bytes, message: bytes, sig: bytes, bits: int) -> bool:
    key = (vk_bytes, message, sig)
    hit = _OTS_MEMO.get(key)
    if hit is not None:
        return hit
    ok = ots_verify(vk_bytes, message, sig, bits)
    if len(_OTS_MEMO) >= _OTS_MEMO_CAP:
        _OTS_MEMO.clear()
    _OTS_MEMO[key] = ok
    return ok


def verify(vk: TreeSigVerifyKey, m: int, sig: TreeSignature | bytes) -> bool:
    if not 0 <= m < (1 << vk.n):
        return False
    if isinstance(sig, (bytes, bytearray)):
        try:
            sig = signature_from_bytes(bytes(sig), vk.n, vk.digest_bits, vk.tag_bits)
        except ValueError:
            return False
    if len(sig.links) != vk.n:
        return False
    vk_len = ots_vk_len(vk.digest_bits)
    if any(len(a) != vk_len or len(b) != vk_len for a, b, _ in sig.links):
        return False
    if len(sig.y) != vk.tag_bits // 8:
        return False
    current = vk.vk_root
    for t, (pl0, pl1, sigpl) in enumerate(sig.links, start=1):
        if not _ots_verify_memo(current, pl0 + pl1, sigpl, vk.digest_bits):
            return False
        current = pl1 if (m >> (vk.n - t)) & 1 else pl0
    return _ots_verify_memo(current, sig.y, sig.isig, vk.digest_bits)


class QueryBudgetExceeded(RuntimeError):
    pass


class SigningOracle:
    """Superposition signing access for the toy plus-one game.

    Branch labels are (message int, signature register bytes); a query XORs
    the signature of each branch's message into its signature register.
    """

    def __init__(self, sk: TreeSigSecretKey, budget: int):
        self._sk = sk
        self._budget = budget
        self.queries = 0
        self.sig_bytes = signature_len(sk.n, sk.digest_bits, sk.tag_bits)

    def _charge(self):
        if self.queries >= self._budget:
            raise QueryBudgetExceeded(f"query budget {self._budget} exhausted")
        self.queries += 1

    def query(self, state: HybridState) -> HybridState:
        self._charge()

        def xor_sig(label):
            m, w = label
            sig = sign(self._sk, m).to_bytes()
            return (m, bytes(a ^ b for a, b in zip(w, sig, strict=True)))

        return state.map_labels(xor_sig)

    def query_classical(self, m: int) -> bytes:
        self._charge()
        return sign(self._sk, m).to_bytes()

    def fresh_register(self, m: int) -> HybridState:
        # |m> with an all-zero signature register, ready for one query
        return HybridState.from_terms(0, [((m, bytes(self.sig_bytes)), 1.0, None)])


def bz_game_harness(adversary, k: int, rng: np.random.Generator, *,
                    n: int = 3, digest_bits: int = 4, tag_bits: int = 8,
                    query_budget: int | None = None) -> bool:
    """Run the plus-one forgery game: k oracle queries, k+1 pairs to win.

    The adversary callback receives (vk, oracle, rng) and returns a list of
    (message, signature bytes) pairs. It wins iff it returns exactly k+1
    pairs with pairwise-distinct messages that all verify. query_budget
    overrides the allowed query count (the game's k is unchanged), which
    lets tests hand an honest signer enough queries to demonstrate the
    verification path.
    """
    if n > 4:
        raise ValueError("toy game only supports n <= 4")
    if digest_bits > 8:
        raise ValueError("toy game only supports digest_bits <= 8")
    vk, sk = setup(n, tag_bits, rng, digest_bits=digest_bits)
    oracle = SigningOracle(sk, k if query_budget is None else query_budget)
    pairs = adversary(vk, oracle, rng)
    if len(pairs) != k + 1:
        return False
    messages = [m for m, _ in pairs]
    if len(set(messages)) != len(messages):
        return False
    return all(verify(vk, m, sig) for m, sig in pairs)
