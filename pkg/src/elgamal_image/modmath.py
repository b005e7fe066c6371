"""Modular arithmetic and the number theory behind primitive roots.

Integers are plain Python ints (arbitrary precision). A *random source* is any
object with a ``getrandbits(k)`` method: ``random.Random(seed)`` for
reproducible runs, ``secrets.SystemRandom()`` otherwise.
"""

import math
import secrets

from .errors import (
    FactorizationIncompleteError,
    InvalidArgumentError,
    InvalidModulusError,
    NotInvertibleError,
)

DEFAULT_ROUNDS = 40
DEFAULT_EFFORT = 1_000_000

_TRIAL_LIMIT = 1 << 16
_SMALL_PRIME_BOUND = 1000

_system_rng = secrets.SystemRandom()


def _sieve(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return [i for i, f in enumerate(flags) if f]


SMALL_PRIMES = tuple(_sieve(_SMALL_PRIME_BOUND))

# Miller-Rabin base sets with no strong pseudoprimes below the bound
# (Jaeschke 1993; Sorenson and Webster 2015).
_DETERMINISTIC_BASES = (
    (3_215_031_751, (2, 3, 5, 7)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (3_317_044_064_679_887_385_961_981, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)),
)


def default_rng():
    """Return the non-deterministic random source used when none is given."""
    return _system_rng


def uniform_int(rng, low, high):
    """Draw uniformly from ``[low, high]`` by rejection on ``getrandbits``.

    Only ``getrandbits`` is used so seeded draws stay stable across Python
    versions.
    """
    if high < low:
        raise InvalidArgumentError(f"empty range [{low}, {high}]")
    span = high - low + 1
    bits = span.bit_length()
    while True:
        v = rng.getrandbits(bits)
        if v < span:
            return low + v


def mod_exp(base, exponent, modulus):
    """Left-to-right square-and-multiply: ``base ** exponent % modulus``."""
    if modulus < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {modulus}")
    if exponent < 0:
        raise InvalidArgumentError("negative exponent; use mod_inv first")
    base %= modulus
    result = 1
    for bit in bin(exponent)[2:]:
        result = result * result % modulus
        if bit == "1":
            result = result * base % modulus
    return result


def egcd(a, b):
    """Extended Euclid. Returns ``(g, u, v)`` with ``a*u + b*v == g``."""
    u0, u1, v0, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    return a, u0, v0


def mod_inv(x, p):
    if p < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {p}")
    x %= p
    if x == 0:
        raise NotInvertibleError(f"0 has no inverse modulo {p}")
    g, u, _ = egcd(x, p)
    if g != 1:
        raise NotInvertibleError(f"{x} is not invertible modulo {p} (gcd {g})")
    return u % p


def _trial_division_is_prime(n):
    if n < 2:
        return False
    for q in SMALL_PRIMES:
        if q * q > n:
            return True
        if n % q == 0:
            return n == q
    # only reached for n >= 1009**2; callers keep n < 2**16 here
    for q in range(SMALL_PRIMES[-1] + 2, math.isqrt(n) + 1, 2):
        if n % q == 0:
            return False
    return True


def _witnesses(n, rounds, rng):
    for bound, bases in _DETERMINISTIC_BASES:
        if n < bound:
            yield from bases
            return
    rng = rng or _system_rng
    for _ in range(rounds):
        yield uniform_int(rng, 2, n - 2)


def is_probable_prime(n, rounds=DEFAULT_ROUNDS, rng=None):
    """Miller-Rabin primality test.

    Values below 2**16 are decided by trial division and values below
    3.3e24 by a fixed witness set that is known to be exact there. Larger
    values use ``rounds`` random witnesses. A ``False`` answer is always
    correct.
    """
    if n < _TRIAL_LIMIT:
        return _trial_division_is_prime(n)
    for q in SMALL_PRIMES:
        if n % q == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _witnesses(n, rounds, rng):
        x = mod_exp(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n, budget, rng):
    """Find a nontrivial factor of composite odd ``n``.

    Returns ``(factor_or_None, iterations_used)``.
    """
    used = 0
    m = 128
    while used < budget:
        y = uniform_int(rng, 1, n - 1)
        c = uniform_int(rng, 1, n - 1)
        g = r = q = 1
        x = ys = y
        while g == 1 and used < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            used += r
            r *= 2
        if g == n:
            # batch overshot; backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g, used
    return None, used


def factorize(n, effort_bound=DEFAULT_EFFORT, rng=None):
    """Prime factorization of ``n`` as a ``{prime: exponent}`` dict.

    Trial division by small primes, then Pollard rho (Brent variant) on the
    cofactor for at most ``effort_bound`` iterations in total.
    """
    if n < 1:
        raise InvalidArgumentError(f"cannot factor {n}")
    factors = {}
    for q in SMALL_PRIMES:
        if q * q > n:
            break
        while n % q == 0:
            factors[q] = factors.get(q, 0) + 1
            n //= q
    if n == 1:
        return factors

    rng = rng or _system_rng
    budget = effort_bound
    stack = [n]
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack += [root, root]
            continue
        d, used = _pollard_brent(m, budget, rng)
        budget -= used
        if d is None:
            raise FactorizationIncompleteError(
                f"composite cofactor {m} left after {effort_bound} iterations",
                cofactor=m,
            )
        stack += [d, m // d]
    return dict(sorted(factors.items()))


def factor_product(factors):
    out = 1
    for q, e in factors.items():
        out *= q**e
    return out


def euler_phi(n, factors=None):
    if n == 1:
        return 1
    if factors is None:
        factors = factorize(n)
    phi = n
    for q in factors:
        phi = phi // q * (q - 1)
    return phi


def is_primitive_root(r, p, phi_factors=None):
    """True iff ``r`` has multiplicative order ``p - 1`` modulo prime ``p``.

    ``phi_factors`` is the factorization of ``p - 1``; it is computed when
    omitted.
    """
    if r % p == 0:
        raise InvalidArgumentError(f"{r} is 0 modulo {p}")
    if phi_factors is None:
        phi_factors = factorize(p - 1)
    for q in phi_factors:
        if mod_exp(r, (p - 1) // q, p) == 1:
            return False
    return True


def find_primitive_root(p, phi_factors=None, rng=None):
    """Smallest primitive root of ``p``, or a uniformly random one if ``rng``
    is given."""
    if p < 3:
        raise InvalidArgumentError(f"need an odd prime, got {p}")
    if phi_factors is None:
        phi_factors = factorize(p - 1)
    if rng is None:
        r = 2
        while not is_primitive_root(r, p, phi_factors):
            r += 1
        return r
    while True:
        r = uniform_int(rng, 2, p - 1)
        if is_primitive_root(r, p, phi_factors):
            return r


def _passes_small_primes(n):
    for q in SMALL_PRIMES:
        if n % q == 0:
            return n == q
    return True


def gen_safe_prime(bits, rng=None, rounds=DEFAULT_ROUNDS):
    """Random safe prime ``p = 2q + 1`` with exactly ``bits`` bits.

    The output depends only on the candidate draws from ``rng``; primality
    witnesses come from the system source.
    """
    if bits < 3:
        raise InvalidArgumentError(f"no safe prime has {bits} bits")
    rng = rng or _system_rng
    q_low, q_high = 1 << (bits - 2), (1 << (bits - 1)) - 1
    while True:
        q = uniform_int(rng, q_low, q_high)
        p = 2 * q + 1
        if not (_passes_small_primes(q) and _passes_small_primes(p)):
            continue
        if is_probable_prime(q, rounds) and is_probable_prime(p, rounds):
            return p
