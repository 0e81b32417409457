"""Clay's conjectural slope formulas in weight 0.

Every formula has the shape ``v_p(p^e A! B! / (C! D!))`` where e, A, B, C, D
are affine in (j, k).  A positive index i is split as ``i = P j + k`` with
``0 <= k < P`` and ``P = (p^2 - 1)/24``; the formula for residue k is then
evaluated at j.  Values needing the factorial of a negative integer are
returned as ``None`` ("undefined").
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import factorial_valuation

# an affine form c_j * j + c_0 + c_k * k
Affine = tuple[int, int, int]


@dataclass(frozen=True)
class ClayCase:
    k_range: tuple[int, int]  # inclusive
    exponent: Affine
    numer: tuple[Affine, Affine]
    denom: tuple[Affine, Affine]


def _ev(f: Affine, j: int, k: int) -> int:
    return f[0] * j + f[1] + f[2] * k


_JJ = ((1, -1, 0), (1, -1, 0))  # (j-1)! (j-1)!


def _leading(p_exp: int, m: int) -> ClayCase:
    # k = 0: v(p^(e j) (m j)! (m j - 1)! / (j! (j-1)!))
    return ClayCase((0, 0), (p_exp, 0, 0), ((m, 0, 0), (m, -1, 0)), ((1, 0, 0), (1, -1, 0)))


_TABLES: dict[int, tuple[ClayCase, ...]] = {
    5: (ClayCase((0, 0), (1, 0, 0), ((3, -1, 0), (3, 0, 0)), ((1, 0, 0), (1, -1, 0))),),
    11: (
        _leading(4, 6),  # printed with v_5, read as v_11
        ClayCase((1, 1), (4, -4, 0), ((6, -6, 0), (6, -6, 0)), _JJ),
        ClayCase((2, 4), (4, -5, 1), ((6, -6, 1), (6, -7, 1)), _JJ),
    ),
    17: (
        _leading(7, 9),
        ClayCase((1, 1), (7, -7, 0), ((9, -9, 0), (9, -9, 0)), _JJ),
        ClayCase((2, 4), (7, -9, 1), ((9, -11, 1), (9, -10, 1)), _JJ),
        ClayCase((5, 8), (7, -10, 1), ((9, -12, 1), (9, -11, 1)), _JJ),
        ClayCase((9, 11), (7, -11, 1), ((9, -13, 1), (9, -12, 1)), _JJ),
    ),
    19: (
        _leading(8, 10),  # printed with a stray i in place of j
        ClayCase((1, 1), (8, -8, 0), ((10, -10, 0), (10, -10, 0)), _JJ),
        ClayCase((2, 4), (8, -10, 1), ((10, -11, 1), (10, -12, 1)), _JJ),
        ClayCase((5, 7), (8, -11, 1), ((10, -12, 1), (10, -13, 1)), _JJ),
        ClayCase((8, 10), (8, -12, 1), ((10, -13, 1), (10, -14, 1)), _JJ),
        ClayCase((11, 12), (8, -13, 1), ((10, -14, 1), (10, -15, 1)), _JJ),
        ClayCase((13, 14), (8, -14, 1), ((10, -15, 1), (10, -16, 1)), _JJ),
    ),
}

CORRECTIONS = {
    5: (),
    11: ("k=0 case uses v_11 (printed as v_5)",),
    17: (),
    19: (
        "k=0 case evaluated uniformly in j (printed with (10i-1)!/(i!(i-1)!))",
        "index split as 15j+k with j the quotient and k the remainder",
    ),
}


def period(p: int) -> int:
    if p not in _TABLES:
        raise ValueError(f"no slope formulas for p = {p}")
    return (p * p - 1) // 24


def convention(p: int) -> str:
    P = period(p)
    if P == 1:
        return "i = j (one formula), slope s(i) for i >= 1"
    return f"i = {P}*j + k with 0 <= k < {P}; slope s_k(j)"


def valuation_of_ratio(p: int, e: int, numer: Sequence[int], denom: Sequence[int]) -> int | None:
    """v_p(p^e prod(a!) / prod(c!)), or None when a factorial argument is negative."""
    if any(n < 0 for n in (*numer, *denom)):
        return None
    return (
        e
        + sum(factorial_valuation(n, p) for n in numer)
        - sum(factorial_valuation(n, p) for n in denom)
    )


def _case(p: int, k: int) -> ClayCase:
    for c in _TABLES[p]:
        if c.k_range[0] <= k <= c.k_range[1]:
            return c
    raise AssertionError(f"no case for k={k}")


def clay_value(p: int, j: int, k: int) -> int | None:
    """s_k(j) for the given prime, or None when undefined."""
    P = period(p)
    if not 0 <= k < P or j < 0:
        raise ValueError("need j >= 0 and 0 <= k < (p^2-1)/24")
    c = _case(p, k)
    return valuation_of_ratio(
        p,
        _ev(c.exponent, j, k),
        [_ev(f, j, k) for f in c.numer],
        [_ev(f, j, k) for f in c.denom],
    )


def clay_slope_p5(i: int) -> int:
    """v_5(5^i (3i-1)! (3i)! / (i! (i-1)!)) for i >= 1."""
    if i < 1:
        raise ValueError("index must be positive")
    return clay_value(5, i, 0)


def split_index(p: int, i: int) -> tuple[int, int]:
    return divmod(i, period(p))


@dataclass
class ClayPrediction:
    p: int
    start: int
    values: list[int | None]  # formula order, index start, start+1, ...
    convention: str
    corrections: tuple[str, ...] = field(default_factory=tuple)

    @property
    def indices(self) -> list[int]:
        return list(range(self.start, self.start + len(self.values)))

    def defined(self) -> list[int]:
        return [v for v in self.values if v is not None]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "start": self.start,
            "values": [None if v is None else str(v) for v in self.values],
            "undefined_indices": [i for i, v in zip(self.indices, self.values) if v is None],
            "convention": self.convention,
            "corrections": list(self.corrections),
        }


def clay_slopes(p: int, count: int, start: int = 1) -> ClayPrediction:
    if count < 1 or start < 1:
        raise ValueError("count and start must be positive")
    values = []
    for i in range(start, start + count):
        j, k = split_index(p, i)
        values.append(clay_value(p, j, k))
    return ClayPrediction(p, start, values, convention(p), CORRECTIONS[p])


@dataclass
class ComparisonReport:
    window: int
    predicted: list[int]
    computed: list[Fraction]
    missing: list[Fraction]  # computed slopes without a predicted partner
    extra: list[int]  # predicted slopes with no computed partner
    convention: str

    @property
    def match(self) -> bool:
        return not self.missing and not self.extra

    def to_json(self) -> dict:
        return {
            "window": self.window,
            "predicted": [str(x) for x in self.predicted],
            "computed": [str(x) for x in self.computed],
            "missing_from_prediction": [str(x) for x in self.missing],
            "unmatched_predictions": [str(x) for x in self.extra],
            "match": self.match,
            "alignment": self.convention,
        }


def compare_predictions(pred: ClayPrediction, computed, window: int) -> ComparisonReport:
    """Compare the ``window`` smallest predicted and computed slopes as multisets.

    Undefined formula values are skipped.  ``computed`` is a SlopeMultiset
    (certain and provisional non-bound slopes) or a plain list of slopes.
    """
    if hasattr(computed, "as_list"):
        computed = computed.as_list(include_provisional=True)
    comp = sorted(Fraction(x) for x in computed)
    predicted = sorted(pred.defined())
    if window < 1 or window > min(len(comp), len(predicted)):
        raise ValueError("window must be positive and at most both lengths")
    pw, cw = predicted[:window], comp[:window]
    pc, cc = Counter(Fraction(x) for x in pw), Counter(cw)
    missing = sorted((cc - pc).elements())
    extra = sorted(int(x) for x in (pc - cc).elements())
    note = (
        f"{pred.convention}; the {window} smallest defined values from indices "
        f"{pred.start}..{pred.start + len(pred.values) - 1} against the {window} smallest computed slopes"
    )
    return ComparisonReport(window, pw, cw, missing, extra, note)
