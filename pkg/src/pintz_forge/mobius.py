"""Segmented Moebius sieve and streaming Mertens aggregates.

Segments are sieved independently (optionally in a process pool) and folded
strictly in order by a single reducer, so every aggregate is identical for
any segment size and worker count.
"""

from __future__ import annotations

import json
import logging
import math
import os
import zlib
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from decimal import ROUND_CEILING, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from .errors import CheckpointCorrupt, IncompletePrimes, InvalidParams
from .extreal import ExtReal, ctx

log = logging.getLogger(__name__)

DEFAULT_SEGMENT = 1 << 20
D_DIGITS = 6


def primes_up_to(n: int) -> np.ndarray:
    """Sieve of Eratosthenes, inclusive of ``n``."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p::p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class SieveSegment:
    lo: int
    hi: int
    mu: np.ndarray  # int8, mu[n - lo] = mu(n)


def mobius_segment(lo: int, hi: int, base_primes) -> SieveSegment:
    """Exact mu(n) for n in [lo, hi).

    Every prime is multiplied into a running product for the positions it
    divides, with the sign flipped each time; multiples of p^2 are zeroed.
    Any n whose product falls short of n has exactly one prime factor above
    the sieving bound, which flips the sign once more.
    """
    if not 1 <= lo < hi:
        raise InvalidParams(f"need 1 <= lo < hi, got lo={lo}, hi={hi}")
    primes = np.asarray(base_primes, dtype=np.int64)
    root = math.isqrt(hi - 1)
    top = int(primes[-1]) if len(primes) else 1
    if top < root and any(_is_prime(q) for q in range(top + 1, root + 1)):
        raise IncompletePrimes(f"base primes stop at {top}, need all primes <= {root}")

    size = hi - lo
    mu = np.ones(size, dtype=np.int8)
    prod = np.ones(size, dtype=np.int64)
    for p in primes:
        p = int(p)
        if p > root:
            break
        start = (-lo) % p
        mu[start::p] *= -1
        prod[start::p] *= p
        pp = p * p
        if pp < hi:
            mu[(-lo) % pp::pp] = 0
    n = np.arange(lo, hi, dtype=np.int64)
    big = prod != n
    mu[big] = -mu[big]
    return SieveSegment(lo, hi, mu)


def mobius_trial(n: int) -> int:
    """mu(n) by trial division; the reference oracle for the sieve."""
    if n < 1:
        raise InvalidParams("mu is defined for n >= 1")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


# ---------------------------------------------------------------------------
# scan state

@dataclass(frozen=True)
class MertensScan:
    """Aggregate of M over [1, cursor].

    ``S_abs`` is sum_{n < cursor} |M(n)|, i.e. the integral of |M(x)| over
    [1, cursor]. ``last_violation`` complements ``first_violation`` so that
    the range on which the configured bound holds can be read off directly.
    """

    limit: int
    cursor: int = 0
    mertens: int = 0
    S_abs: int = 0
    max_ratio: float = 0.0
    argmax: int = 0
    first_violation: Optional[int] = None
    last_violation: Optional[int] = None
    sqrt_coeff: Optional[str] = None

    @property
    def complete(self) -> bool:
        return self.cursor == self.limit

    def check(self) -> None:
        """Raise CheckpointCorrupt if the internal invariants fail."""
        c = self.cursor
        problems = []
        if c < 0 or c > self.limit:
            problems.append("cursor out of range")
        if abs(self.mertens) > c:
            problems.append("|M| > cursor")
        if self.S_abs < 0 or self.S_abs > c * c:
            problems.append("S_abs out of range")
        if c >= 2:
            if not 2 <= self.argmax <= c:
                problems.append("argmax out of range")
            if self.max_ratio < abs(self.mertens) / math.sqrt(c):
                problems.append("max_ratio below |M(cursor)|/sqrt(cursor)")
        for v in (self.first_violation, self.last_violation):
            if v is not None and not 2 <= v <= c:
                problems.append("violation index out of range")
        if problems:
            raise CheckpointCorrupt("; ".join(problems))


def mean_abs(scan: MertensScan) -> float:
    """(1/limit) * integral_1^limit |M(x)| dx."""
    if not scan.complete:
        raise InvalidParams("scan is incomplete")
    return float(Fraction(scan.S_abs, scan.limit))


def integral_abs_M(scan: MertensScan, upto) -> Fraction:
    """integral_1^y |M(x)| dx for floor(y) == scan.cursor; M is constant on [n, n+1)."""
    upto = Fraction(upto)
    n = math.floor(upto)
    if n != scan.cursor:
        raise InvalidParams(f"need floor(y) == cursor ({scan.cursor}), got {upto}")
    return Fraction(scan.S_abs) + (upto - n) * abs(scan.mertens)


def pointwise_upper_mean(sqrt_coeff: float, horizon: ExtReal) -> ExtReal:
    """(2d/3) sqrt(Y): the mean of |M| over [1, Y] when |M(x)| <= d sqrt(x)."""
    if sqrt_coeff <= 0:
        raise InvalidParams("d must be positive")
    if horizon.sign != 1 or horizon.lnmag < 0:
        raise InvalidParams("Y must be >= 1")
    return ExtReal.from_number(2 * ctx.mpf(repr(float(sqrt_coeff))) / 3) * horizon ** ctx.mpf("0.5")


# ---------------------------------------------------------------------------
# exact d*sqrt(n) comparison

def bound_fraction(sqrt_coeff) -> Fraction:
    """d rounded up to six decimals, as an exact fraction."""
    q = Decimal(str(sqrt_coeff)).quantize(Decimal(1).scaleb(-D_DIGITS), rounding=ROUND_CEILING)
    if q <= 0:
        raise InvalidParams("d must be positive")
    return Fraction(q)


def _violations(mertens: np.ndarray, n: np.ndarray, bound: Fraction) -> tuple[int, int] | None:
    """First and last index i with M[i]^2 q^2 > p^2 n[i], where bound = p/q.

    A float prefilter with a 1e-9 cushion selects candidates; the decision
    itself is made in exact integers.
    """
    approx = float(bound) ** 2 * (1 - 1e-9)
    m = mertens.astype(np.float64)
    cand = np.flatnonzero(m * m > approx * n)
    p2, q2 = bound.numerator ** 2, bound.denominator ** 2

    def hit(i) -> bool:
        return int(mertens[i]) ** 2 * q2 > p2 * int(n[i])

    first = next((int(i) for i in cand if hit(i)), None)
    if first is None:
        return None
    last = next(int(i) for i in cand[::-1] if hit(i))
    return first, last


# ---------------------------------------------------------------------------
# checkpoints

_RECORD_FIELDS = ("cursor", "M", "S_abs", "max_ratio", "argmax",
                  "first_violation", "last_violation", "d", "limit")


def _canonical(rec: dict) -> str:
    return json.dumps({k: rec[k] for k in _RECORD_FIELDS}, sort_keys=True,
                      separators=(",", ":"))


def scan_record(scan: MertensScan) -> dict:
    rec = {
        "cursor": scan.cursor,
        "M": scan.mertens,
        "S_abs": str(scan.S_abs),
        "max_ratio": scan.max_ratio,
        "argmax": scan.argmax,
        "first_violation": scan.first_violation,
        "last_violation": scan.last_violation,
        "d": scan.sqrt_coeff,
        "limit": scan.limit,
    }
    rec["crc"] = format(zlib.crc32(_canonical(rec).encode()), "08x")
    return rec


def scan_from_record(rec: dict) -> MertensScan:
    try:
        crc = format(zlib.crc32(_canonical(rec).encode()), "08x")
        if crc != rec["crc"]:
            raise CheckpointCorrupt(f"crc mismatch at cursor {rec.get('cursor')}")
        scan = MertensScan(
            limit=int(rec["limit"]),
            cursor=int(rec["cursor"]),
            mertens=int(rec["M"]),
            S_abs=int(rec["S_abs"]),
            max_ratio=float(rec["max_ratio"]),
            argmax=int(rec["argmax"]),
            first_violation=rec["first_violation"],
            last_violation=rec["last_violation"],
            sqrt_coeff=rec["d"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointCorrupt(f"malformed checkpoint record: {exc}") from exc
    scan.check()
    return scan


def load_checkpoint(path) -> Optional[MertensScan]:
    """Last record of a JSON-lines checkpoint file, or None if there is none.

    A truncated final line (interrupted write) is ignored; any other damage
    raises CheckpointCorrupt.
    """
    path = Path(path)
    if not path.exists():
        return None
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines:
        return None
    try:
        rec = json.loads(lines[-1])
    except json.JSONDecodeError:
        if len(lines) == 1:
            raise CheckpointCorrupt(f"unreadable checkpoint {path}")
        log.warning("dropping truncated last line of %s", path)
        try:
            rec = json.loads(lines[-2])
        except json.JSONDecodeError as exc:
            raise CheckpointCorrupt(f"unreadable checkpoint {path}") from exc
    if not isinstance(rec, dict):
        raise CheckpointCorrupt(f"unreadable checkpoint {path}")
    return scan_from_record(rec)


# ---------------------------------------------------------------------------
# the scan

_WORKER_PRIMES: np.ndarray | None = None


def _init_worker(primes: np.ndarray) -> None:
    global _WORKER_PRIMES
    _WORKER_PRIMES = primes


def _sieve_task(bounds: tuple[int, int]) -> np.ndarray:
    lo, hi = bounds
    return mobius_segment(lo, hi, _WORKER_PRIMES).mu


def _segments(start: int, limit: int, size: int) -> Iterator[tuple[int, int]]:
    lo = start
    while lo <= limit:
        hi = min(lo + size, limit + 1)
        yield lo, hi
        lo = hi


def _fold(state: MertensScan, lo: int, mu: np.ndarray, bound: Optional[Fraction]) -> MertensScan:
    n = np.arange(lo, lo + len(mu), dtype=np.int64)
    mertens = np.cumsum(mu, dtype=np.int64) + state.mertens
    absM = np.abs(mertens)
    # S_abs runs to cursor - 1: add |M(old cursor)| and all but the last new value
    S_abs = state.S_abs + abs(state.mertens) + int(absM[:-1].sum())

    max_ratio, argmax = state.max_ratio, state.argmax
    first, last = state.first_violation, state.last_violation
    keep = n >= 2
    if keep.any():
        k0 = int(np.argmax(keep))
        ratio = absM[k0:] / np.sqrt(n[k0:].astype(np.float64))
        i = int(np.argmax(ratio))
        if ratio[i] > max_ratio or argmax == 0:
            max_ratio, argmax = float(ratio[i]), int(n[k0 + i])
        if bound is not None:
            hits = _violations(mertens[k0:], n[k0:], bound)
            if hits is not None:
                if first is None:
                    first = int(n[k0 + hits[0]])
                last = int(n[k0 + hits[1]])
    return replace(state, cursor=lo + len(mu) - 1, mertens=int(mertens[-1]), S_abs=S_abs,
                   max_ratio=max_ratio, argmax=argmax,
                   first_violation=first, last_violation=last)


def mertens_scan(limit: int, segment_size: int = DEFAULT_SEGMENT, sqrt_coeff=None,
                 checkpoint: Optional[MertensScan] = None,
                 checkpoint_path=None, workers: int = 1) -> MertensScan:
    """Scan n = 1..limit, returning M(limit), the integral of |M| and max |M(n)|/sqrt(n).

    If ``d`` is given, the smallest and largest n >= 2 with |M(n)| > d sqrt(n)
    are recorded (compared exactly in integers, d rounded up to six decimals).
    ``checkpoint`` resumes from a previous state; ``checkpoint_path`` appends
    one JSON line per finished segment.
    """
    if limit < 2:
        raise InvalidParams("limit must be >= 2")
    if segment_size < 1:
        raise InvalidParams("segment_size must be >= 1")
    bound = bound_fraction(sqrt_coeff) if sqrt_coeff is not None else None
    d_key = str(bound) if bound is not None else None

    if checkpoint is None:
        state = MertensScan(limit=limit, sqrt_coeff=d_key)
    else:
        checkpoint.check()
        if checkpoint.cursor > limit:
            raise InvalidParams(f"checkpoint cursor {checkpoint.cursor} is past limit {limit}")
        if checkpoint.sqrt_coeff != d_key:
            raise InvalidParams(f"checkpoint was taken with d={checkpoint.sqrt_coeff}, not {d_key}")
        state = replace(checkpoint, limit=limit)
    if state.cursor == limit:
        return state

    primes = primes_up_to(math.isqrt(limit))
    sink = open(checkpoint_path, "a") if checkpoint_path else None
    tasks = _segments(state.cursor + 1, limit, segment_size)
    try:
        if workers <= 1:
            for lo, hi in tasks:
                state = _fold(state, lo, mobius_segment(lo, hi, primes).mu, bound)
                _write(sink, state)
        else:
            with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                                     initargs=(primes,)) as pool:
                window: deque = deque()
                for lo, hi in tasks:
                    window.append((lo, pool.submit(_sieve_task, (lo, hi))))
                    if len(window) >= 2 * workers:
                        state = _drain(window, state, bound, sink)
                while window:
                    state = _drain(window, state, bound, sink)
    finally:
        if sink:
            sink.close()
    return state


def _drain(window: deque, state: MertensScan, bound, sink) -> MertensScan:
    lo, fut = window.popleft()
    state = _fold(state, lo, fut.result(), bound)
    _write(sink, state)
    return state


def _write(sink, state: MertensScan) -> None:
    if sink is None:
        return
    sink.write(json.dumps(scan_record(state), separators=(",", ":")) + "\n")
    sink.flush()
    os.fsync(sink.fileno())
