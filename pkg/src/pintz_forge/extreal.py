"""Signed log-magnitude reals.

An :class:`ExtReal` stores a value ``v`` as ``sign(v)`` together with
``ln|v|`` held as a 50-digit mpmath float, so that quantities such as
``exp(1e19) ** 0.51`` can be formed, added and compared without overflow and
with absolute log error far below 1e-20.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from mpmath import MPContext

from .errors import CancellationUnderflow, DomainError

# Private context so that nothing else in the process can change our precision.
ctx = MPContext()
ctx.dps = 50
mpf = ctx.mpf

CANCELLATION_GAP = mpf("1e-25")
SAFETY_MARGIN = mpf("1e-9")
SERIAL_DIGITS = 32

Number = Union[int, float, str]


def _to_mpf(x) -> "mpf":
    if isinstance(x, ctx.mpf):
        return x
    if isinstance(x, float):
        # shortest repr: 0.51 means the decimal 0.51, which matters once
        # it multiplies a log of size 1e19
        return mpf(repr(float(x)))
    return mpf(x)


@dataclass(frozen=True, eq=False)
class ExtReal:
    sign: int
    lnmag: object = mpf(0)

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        lnmag = mpf(0) if self.sign == 0 else _to_mpf(self.lnmag)
        if not ctx.isfinite(lnmag):
            raise DomainError("lnmag must be finite")
        object.__setattr__(self, "lnmag", lnmag)

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls) -> ExtReal:
        return cls(0)

    @classmethod
    def one(cls) -> ExtReal:
        return cls(1, 0)

    @classmethod
    def from_log(cls, lnmag, sign: int = 1) -> ExtReal:
        """Value ``sign * exp(lnmag)``."""
        return cls(sign, lnmag)

    @classmethod
    def from_number(cls, v: Number) -> ExtReal:
        """From an int, float or decimal string, converted exactly.

        A float is taken as its exact binary value here; only exponents and
        log-magnitudes read floats as their shortest decimal.
        """
        x = mpf(v) if isinstance(v, float) else _to_mpf(v)
        if not ctx.isfinite(x):
            raise DomainError(f"cannot represent non-finite value {v!r}")
        if x == 0:
            return cls(0)
        return cls(1 if x > 0 else -1, ctx.log(abs(x)))

    from_double = from_number

    @classmethod
    def parse(cls, text: str) -> ExtReal:
        """Parse a decimal, scientific literal, ``exp:<LOG>`` or serialized form."""
        text = text.strip()
        if text.startswith("s:"):
            return cls.deserialize(text)
        if text.startswith("exp:"):
            return cls(1, mpf(text[4:]))
        if text.startswith("-exp:"):
            return cls(-1, mpf(text[5:]))
        try:
            return cls.from_number(text)
        except ValueError as exc:
            raise DomainError(f"cannot parse {text!r} as a real number") from exc

    # conversion ---------------------------------------------------------

    def to_double(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.lnmag > 710:
            return self.sign * math.inf
        if self.lnmag < -746:
            return self.sign * 0.0
        return self.sign * float(ctx.exp(self.lnmag))

    __float__ = to_double

    def log(self):
        """Natural log of a positive value, as an mpf."""
        if self.sign != 1:
            raise DomainError("log of a non-positive ExtReal")
        return self.lnmag

    def log10(self) -> float:
        return float(self.log() / ctx.ln10)

    def serialize(self) -> str:
        if self.sign == 0:
            return "s:0"
        digits = ctx.nstr(self.lnmag, SERIAL_DIGITS, strip_zeros=False,
                          min_fixed=-ctx.inf, max_fixed=ctx.inf)
        return f"s:{'+' if self.sign > 0 else '-'}|ln:{digits}"

    @classmethod
    def deserialize(cls, text: str) -> ExtReal:
        if text == "s:0":
            return cls(0)
        try:
            head, ln = text.split("|")
            sign = {"s:+": 1, "s:-": -1}[head]
            if not ln.startswith("ln:"):
                raise KeyError(ln)
            return cls(sign, mpf(ln[3:]))
        except (ValueError, KeyError) as exc:
            raise DomainError(f"malformed ExtReal {text!r}") from exc

    def __repr__(self) -> str:
        if self.sign == 0:
            return "ExtReal(0)"
        return f"ExtReal({'+' if self.sign > 0 else '-'}, ln={ctx.nstr(self.lnmag, 20)})"

    # arithmetic ---------------------------------------------------------

    def __neg__(self) -> ExtReal:
        return ExtReal(-self.sign, self.lnmag)

    def __abs__(self) -> ExtReal:
        return ExtReal(abs(self.sign), self.lnmag)

    def __mul__(self, other) -> ExtReal:
        return ext_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other) -> ExtReal:
        return ext_div(self, _coerce(other))

    def __rtruediv__(self, other) -> ExtReal:
        return ext_div(_coerce(other), self)

    def __add__(self, other) -> ExtReal:
        return ext_add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other) -> ExtReal:
        return ext_add(self, -_coerce(other))

    def __rsub__(self, other) -> ExtReal:
        return ext_add(_coerce(other), -self)

    def __pow__(self, r) -> ExtReal:
        return ext_pow(self, r)

    # ordering -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        try:
            return ext_cmp(self, _coerce(other)) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other) -> bool:
        return ext_cmp(self, _coerce(other)) < 0

    def __le__(self, other) -> bool:
        return ext_cmp(self, _coerce(other)) <= 0

    def __gt__(self, other) -> bool:
        return ext_cmp(self, _coerce(other)) > 0

    def __ge__(self, other) -> bool:
        return ext_cmp(self, _coerce(other)) >= 0

    def __hash__(self) -> int:
        return hash((self.sign, self.lnmag))

    def __bool__(self) -> bool:
        return self.sign != 0


def _coerce(x) -> ExtReal:
    if isinstance(x, ExtReal):
        return x
    if isinstance(x, (int, float)) or isinstance(x, ctx.mpf):
        return ExtReal.from_number(x)
    raise TypeError(f"cannot combine ExtReal with {type(x).__name__}")


def ext_mul(a: ExtReal, b: ExtReal) -> ExtReal:
    if a.sign == 0 or b.sign == 0:
        return ExtReal(0)
    return ExtReal(a.sign * b.sign, a.lnmag + b.lnmag)


def ext_div(a: ExtReal, b: ExtReal) -> ExtReal:
    if b.sign == 0:
        raise DomainError("division by zero")
    if a.sign == 0:
        return ExtReal(0)
    return ExtReal(a.sign * b.sign, a.lnmag - b.lnmag)


def ext_add(a: ExtReal, b: ExtReal) -> ExtReal:
    """Log-sum-exp addition anchored at the larger magnitude.

    Raises :class:`CancellationUnderflow` when operands of opposite sign agree
    in magnitude to within 1e-25 in log but are not bit-identical.
    """
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    if a.lnmag >= b.lnmag:
        big, small = a, b
    else:
        big, small = b, a
    gap = small.lnmag - big.lnmag  # <= 0
    if big.sign == small.sign:
        return ExtReal(big.sign, big.lnmag + ctx.log1p(ctx.exp(gap)))
    if gap == 0:
        return ExtReal(0)
    if -gap < CANCELLATION_GAP:
        raise CancellationUnderflow(
            f"near-total cancellation (log gap {ctx.nstr(-gap, 5)}); "
            "relative error of the difference is uncertified")
    return ExtReal(big.sign, big.lnmag + ctx.log1p(-ctx.exp(gap)))


def ext_pow(a: ExtReal, r) -> ExtReal:
    r = _to_mpf(r)
    if a.sign < 0:
        raise DomainError("ext_pow of a negative base")
    if a.sign == 0:
        if r > 0:
            return ExtReal(0)
        raise DomainError("0 ** r is undefined for r <= 0")
    return ExtReal(1, a.lnmag * r)


def ext_cmp(a: ExtReal, b: ExtReal) -> int:
    """Three-way comparison: -1, 0 or +1."""
    if a.sign != b.sign:
        return -1 if a.sign < b.sign else 1
    if a.sign == 0 or a.lnmag == b.lnmag:
        return 0
    larger_mag = a.lnmag > b.lnmag
    if a.sign > 0:
        return 1 if larger_mag else -1
    return -1 if larger_mag else 1


def exp(x) -> ExtReal:
    """``e**x`` for a real (possibly enormous) exponent."""
    return ExtReal(1, _to_mpf(x))


def round_down(x: ExtReal) -> ExtReal:
    """Shrink toward -inf by the directed safety margin."""
    factor = 1 - SAFETY_MARGIN if x.sign > 0 else 1 + SAFETY_MARGIN
    return x * ExtReal(1, ctx.log(factor)) if x.sign else x


def round_up(x: ExtReal) -> ExtReal:
    """Grow toward +inf by the directed safety margin."""
    factor = 1 + SAFETY_MARGIN if x.sign > 0 else 1 - SAFETY_MARGIN
    return x * ExtReal(1, ctx.log(factor)) if x.sign else x
