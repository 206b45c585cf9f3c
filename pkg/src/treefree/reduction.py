"""Nielsen reduction deciding whether two tree isometries generate a discrete free group.

The loop only needs translation lengths, products and inverses, so it runs
over any :class:`LengthOracle`: exact SL2 matrices, truncated digit
expansions, or amalgamated free products (see :mod:`treefree.amalgam`).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Protocol

from . import words
from .sl2 import Mat2, translation_length
from .valued_field import Field, PrecisionLoss, truncate

log = logging.getLogger(__name__)

DEFAULT_MAX_ITERATIONS = 10**6


class LengthOracle(Protocol):
    """Group elements acting on a tree without inversions."""

    def length(self, x) -> int: ...

    def mul(self, x, y): ...

    def inv(self, x): ...


class SL2Oracle:
    """Exact matrices; lengths from trace valuations."""

    def length(self, x: Mat2) -> int:
        return translation_length(x)

    def mul(self, x: Mat2, y: Mat2) -> Mat2:
        return x @ y

    def inv(self, x: Mat2) -> Mat2:
        return x.inv()


SL2 = SL2Oracle()


class OracleError(RuntimeError):
    """The oracle returned lengths no tree action can produce."""


@dataclass(frozen=True)
class Step:
    """One pass through the loop: lengths seen and what was done."""

    lx: int
    ly: int
    lxy: int
    lxinvy: int
    swapped: bool
    action: str  # "replace:XY" | "replace:X^-1Y" | "certify" | "reject"

    def to_json(self) -> dict:
        return {"lX": self.lx, "lY": self.ly, "lXY": self.lxy, "lXinvY": self.lxinvy,
                "swapped": self.swapped, "action": self.action}


@dataclass(frozen=True)
class DiscreteFree:
    X: Any
    Y: Any
    word_x: words.Word
    word_y: words.Word
    iterations: int
    trace: tuple[Step, ...] = ()

    discrete_free = True


@dataclass(frozen=True)
class NotDiscreteFree:
    witness_word: words.Word
    witness_kind: str  # "elliptic_generator" | "elliptic_product"
    iterations: int
    trace: tuple[Step, ...] = ()

    discrete_free = False


Verdict = DiscreteFree | NotDiscreteFree


def decide(A, B, oracle: LengthOracle = SL2,
           max_iterations: int = DEFAULT_MAX_ITERATIONS) -> Verdict:
    """Run the translation-length-minimising Nielsen loop on ``(A, B)``.

    Returns :class:`DiscreteFree` with a pair ``(X, Y)`` satisfying
    ``|l(X) - l(Y)| < min(l(XY), l(X^-1 Y))`` and the words expressing them
    in ``a = A``, ``b = B``; or :class:`NotDiscreteFree` with a word of
    translation length zero.  ``iterations`` counts evaluations of
    ``m = min(l(XY), l(X^-1 Y))``.
    """
    X, Y = A, B
    wx, wy = words.A, words.B
    lx, ly = oracle.length(X), oracle.length(Y)
    if lx == 0:
        return NotDiscreteFree(wx, "elliptic_generator", 0)
    if ly == 0:
        return NotDiscreteFree(wy, "elliptic_generator", 0)

    trace: list[Step] = []
    iterations = 0
    while True:
        if iterations >= max_iterations:
            raise RuntimeError(f"no verdict after {max_iterations} iterations")
        iterations += 1
        swapped = lx > ly
        if swapped:
            X, Y, wx, wy, lx, ly = Y, X, wy, wx, ly, lx
        Xinv = oracle.inv(X)
        XY, XinvY = oracle.mul(X, Y), oracle.mul(Xinv, Y)
        lxy, lxinvy = oracle.length(XY), oracle.length(XinvY)
        m = min(lxy, lxinvy)
        if m == 0:
            wit = words.concat(wx, wy) if lxy == 0 else words.concat(words.inverse(wx), wy)
            trace.append(Step(lx, ly, lxy, lxinvy, swapped, "reject"))
            return NotDiscreteFree(wit, "elliptic_product", iterations, tuple(trace))
        if m <= ly - lx:
            # ties go to X^-1 Y
            if lxinvy == m:
                Y, wy, action = XinvY, words.concat(words.inverse(wx), wy), "replace:X^-1Y"
            else:
                Y, wy, action = XY, words.concat(wx, wy), "replace:XY"
            trace.append(Step(lx, ly, lxy, lxinvy, swapped, action))
            if not m < ly:
                raise OracleError("loop variant l(X) + l(Y) failed to decrease")
            ly = m
            continue
        trace.append(Step(lx, ly, lxy, lxinvy, swapped, "certify"))
        log.debug("certified after %d iterations", iterations)
        return DiscreteFree(X, Y, wx, wy, iterations, tuple(trace))


# ---------------------------------------------------------------------------
# reading the axis configuration off four lengths


@dataclass(frozen=True)
class LengthCase:
    """Axis configuration implied by ``(l(A), l(B), l(AB), l(A^-1 B))``.

    ``case`` is ``"1"`` (disjoint, ``k`` = distance), ``"2i"`` (short overlap,
    ``delta`` = its length) or ``"2ii|2iii"`` (long overlap; the two are not
    distinguished by lengths alone).
    """

    case: str
    k: int | None = None
    delta: int | None = None


def overlap_from_lengths(la: int, lb: int, lab: int, lainvb: int) -> LengthCase:
    if la <= 0 or lb <= 0:
        raise ValueError("both elements must be hyperbolic")
    lo, hi = sorted((lab, lainvb))
    if lab == lainvb and lab > la + lb:
        if (lab - la - lb) % 2:
            raise OracleError(f"odd axis distance from lengths {(la, lb, lab, lainvb)}")
        return LengthCase("1", k=(lab - la - lb) // 2)
    if hi != la + lb:
        raise OracleError(f"inconsistent lengths {(la, lb, lab, lainvb)}: "
                          f"max(l(AB), l(A^-1B)) must equal l(A) + l(B) when axes meet")
    if lo > abs(la - lb):
        if (la + lb - lo) % 2:
            raise OracleError(f"odd overlap from lengths {(la, lb, lab, lainvb)}")
        return LengthCase("2i", delta=(la + lb - lo) // 2)
    return LengthCase("2ii|2iii")


def certifies(lx: int, ly: int, lxy: int, lxinvy: int) -> bool:
    """Both hyperbolic and ``|l(X) - l(Y)| < min(l(XY), l(X^-1 Y))``."""
    return lx > 0 and ly > 0 and abs(lx - ly) < min(lxy, lxinvy)


# ---------------------------------------------------------------------------
# truncated digit expansions


@dataclass(frozen=True)
class TruncatedMat2:
    a: Any
    b: Any
    c: Any
    d: Any


@dataclass
class TruncatedSL2Oracle:
    """SL2 over truncated expansions; raises :class:`PrecisionLoss` when a trace is undetermined.

    ``lowest_precision`` records the smallest last-known exponent of any
    trace computed, i.e. how much of the input precision was consumed.
    """

    input_precision: int
    lowest_precision: int | None = field(default=None)

    def length(self, x: TruncatedMat2) -> int:
        t = x.a + x.d
        if self.lowest_precision is None or t.M < self.lowest_precision:
            self.lowest_precision = t.M
        if t.digits:
            return -2 * t.N if t.N < 0 else 0
        if t.M >= -1:
            return 0
        # trace is zero up to t.M < -1: its sign relative to 0 is unknown
        raise PrecisionLoss(f"trace known only to exponent {t.M}",
                            required=self.input_precision + (-1 - t.M))

    def mul(self, x: TruncatedMat2, y: TruncatedMat2) -> TruncatedMat2:
        return TruncatedMat2(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                             x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d)

    def inv(self, x: TruncatedMat2) -> TruncatedMat2:
        return TruncatedMat2(x.d, -x.b, -x.c, x.a)


def truncate_matrix(A: Mat2, M: int) -> TruncatedMat2:
    f: Field = A.field
    return TruncatedMat2(*(truncate(f, x, M) for x in A.entries()))


@dataclass(frozen=True)
class RestartReport:
    verdict: Verdict
    precision: int
    restarts: int
    consumed: int
    attempts: tuple[int, ...]


def decide_truncated(A: Mat2, B: Mat2, M: int,
                     max_iterations: int = DEFAULT_MAX_ITERATIONS) -> tuple[Verdict, int]:
    """One truncated run at precision ``M``; returns the verdict and precision consumed."""
    oracle = TruncatedSL2Oracle(M)
    verdict = decide(truncate_matrix(A, M), truncate_matrix(B, M), oracle, max_iterations)
    low = oracle.lowest_precision if oracle.lowest_precision is not None else M
    return verdict, M - low


def decide_with_restarts(A: Mat2, B: Mat2, M0: int, max_precision: int = 1 << 16,
                         max_iterations: int = DEFAULT_MAX_ITERATIONS) -> RestartReport:
    """Truncated decision at precision ``M0``, doubling ``M`` after each precision loss."""
    M = M0
    attempts = []
    while True:
        if M > max_precision:
            raise PrecisionLoss(f"precision {M} exceeds the maximum {max_precision}")
        attempts.append(M)
        try:
            verdict, consumed = decide_truncated(A, B, M, max_iterations)
        except PrecisionLoss as exc:
            nxt = max(2 * M, M + 1, exc.required or 0)
            log.info("precision loss at M=%d (%s); restarting at M=%d", M, exc, nxt)
            M = nxt
            continue
        return RestartReport(verdict, M, len(attempts) - 1, consumed, tuple(attempts))


def storage_bound(A: Mat2, B: Mat2, iterations: int) -> int:
    """Digits needed for ``iterations`` passes: ``-r min(0, v(entries))``."""
    low = min(0, A.min_valuation(), B.min_valuation())
    return -max(iterations, 1) * low
