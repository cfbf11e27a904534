"""Closed-form security-bound calculators in base-2 log-domain arithmetic.

Probabilities like 2^(-10^4) underflow any native float, so every bound
here is carried as a base-2 exponent (``LogProb``) and only converted to
a plain value when it is representable.  Covers the guessing-probability
bounds on an imperfect key, leakage-rate accounting, the finite-key
extractable length, and the security-rate trade-off solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .probdist import binary_entropy

LOG10_2 = math.log10(2.0)

# Bisection controls for the security-rate solver.
RATE_EPS_FLOOR_LOG2 = -200
RATE_REL_TOL = 1e-3
RATE_MAX_ITER = 200
RATE_ACCEPT_REL_DEV = 0.05

# Documented defaults for the rate trade-off demonstration.  The QBER sits
# just above the positive-key-rate threshold (asymptotic secret fraction
# about 1%), the regime where the block-length penalty dominates.
DEFAULT_QBER = 0.1007
DEFAULT_MU = 0.0
DEFAULT_P_FAIL = 1e-10
DEFAULT_EPS_COR = 1e-15
DEFAULT_LEAK_FACTOR = 1.1  # reconciliation inefficiency: leak = 1.1 n h(Q)


class NoSolutionError(Exception):
    """The requested security rate is unattainable for the given block."""


def log2_add(a: float, b: float) -> float:
    """log2(2^a + 2^b) without underflow."""
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(2.0 ** (lo - hi)) / math.log(2.0)


@dataclass(frozen=True)
class LogProb:
    """A probability held as its base-2 exponent.

    ``log2_value`` is log2(p) and is never positive.  For probabilities
    within rounding of 1 the exact handle is the complement exponent:
    ``log2_complement`` = log2(1 - p) when known exactly, else None.
    """

    log2_value: float
    log2_complement: float | None = None

    def __post_init__(self):
        if self.log2_value > 0.0:
            raise ValueError(f"log2_value must be <= 0, got {self.log2_value}")

    @classmethod
    def from_log2(cls, log2_value: float) -> LogProb:
        return cls(min(0.0, log2_value))

    @classmethod
    def from_value(cls, p: float) -> LogProb:
        if not 0.0 < p <= 1.0:
            raise ValueError(f"probability must be in (0, 1], got {p}")
        return cls(math.log2(p))

    @classmethod
    def one_minus_pow2(cls, l: int) -> LogProb:
        """1 - 2^(-l), complement exponent exact for any l."""
        x = 2.0 ** (-l)  # underflows to 0.0 for very large l; complement stays exact
        return cls(math.log1p(-x) / math.log(2.0), log2_complement=float(-l))

    @property
    def value(self) -> float:
        """Plain float value; underflows to 0.0 below about 2^-1074."""
        return 2.0 ** self.log2_value

    @property
    def log10(self) -> float:
        return self.log2_value * LOG10_2

    @property
    def complement_log10(self) -> float | None:
        if self.log2_complement is None:
            return None
        return self.log2_complement * LOG10_2


def yuen_upper_bound(eps_bar: float, l: int) -> LogProb:
    """Upper bound eps_bar + 2^(-l) on the average key-guess probability.

    The distance of the key law from uniform caps how far the best guess
    can beat the 2^(-l) uniform baseline.  Computed by log-sum-exp in
    base 2 so the 2^(-l) term survives any key length; capped at 1.
    """
    if not 0.0 <= eps_bar <= 1.0:
        raise ValueError(f"eps_bar must be in [0, 1], got {eps_bar}")
    if l < 1:
        raise ValueError("key length must be >= 1")
    if eps_bar == 0.0:
        return LogProb.from_log2(float(-l))
    return LogProb.from_log2(log2_add(math.log2(eps_bar), float(-l)))


def markov_individual_bound(eps_bar: float, l: int) -> LogProb:
    """Per-run bound eps_bar^(1/3) + 2^(-l) from the averaged one.

    Converting an averaged guarantee into an individual-run guarantee
    costs a cube root (two Markov-inequality steps).
    """
    if not 0.0 <= eps_bar <= 1.0:
        raise ValueError(f"eps_bar must be in [0, 1], got {eps_bar}")
    if l < 1:
        raise ValueError("key length must be >= 1")
    if eps_bar == 0.0:
        return LogProb.from_log2(float(-l))
    return LogProb.from_log2(log2_add(math.log2(eps_bar) / 3.0, float(-l)))


@dataclass(frozen=True)
class LeakageProfile:
    f: float            # one bit leaked per f key bits
    leaked_bits: float  # l / f


def leakage_profile(l: int, eps: float) -> LeakageProfile:
    """Leakage reading of a guess probability eps on an l-bit key.

    f = log2(1/eps) is the interval at which one bit's worth of guessing
    advantage accrues, so l / f bits may leak per protocol run.  The
    denominator log2(1/eps) is the only convention consistent with the
    worked figure of roughly 1,500 leaked bits per 10^4 at eps = 1e-2;
    the alternative reading l / log(1/l) is rejected (see README).
    """
    if l < 1:
        raise ValueError("key length must be >= 1")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be strictly inside (0, 1), got {eps}")
    f = -math.log2(eps)
    return LeakageProfile(f=f, leaked_bits=l / f)


def required_epsilon(l: int) -> LogProb:
    """Guess probability of a perfectly uniform l-bit key: 2^(-l)."""
    if l < 1:
        raise ValueError("key length must be >= 1")
    return LogProb.from_log2(float(-l))


@dataclass(frozen=True)
class EfficiencyReport:
    ratio: float
    inverted: bool  # key rate exceeded raw rate; ratio > 1 is suspicious


def pipeline_efficiency(raw_rate_bps: float, key_rate_bps: float) -> EfficiencyReport:
    """Fraction of transmitted raw bits that survive as final key bits."""
    if raw_rate_bps <= 0.0 or key_rate_bps <= 0.0:
        raise ValueError("rates must be positive")
    ratio = key_rate_bps / raw_rate_bps
    return EfficiencyReport(ratio=ratio, inverted=ratio > 1.0)


@dataclass(frozen=True)
class FiniteKeyParams:
    """Inputs to the extractable-key-length formula.

    ``leak_ec`` defaults to the reconciliation convention 1.1 n h(Q) when
    omitted.  ``eps_bar`` may be left None when the parameter set feeds
    the rate solver, which supplies its own.
    """

    n: int
    q: float
    mu: float = DEFAULT_MU
    leak_ec: float | None = None
    p_fail: float = DEFAULT_P_FAIL
    eps_cor: float = DEFAULT_EPS_COR
    eps_bar: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("block length n must be >= 1")
        if self.q < 0.0 or self.mu < 0.0 or self.q + self.mu > 1.0:
            raise ValueError("need 0 <= Q, 0 <= mu, Q + mu <= 1")
        for name in ("p_fail", "eps_cor"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must be in (0, 1], got {v}")
        if self.eps_bar is not None and not 0.0 < self.eps_bar <= 1.0:
            raise ValueError(f"eps_bar must be in (0, 1], got {self.eps_bar}")
        if self.leak_ec is not None and self.leak_ec < 0.0:
            raise ValueError("leak_ec must be >= 0")

    @property
    def effective_leak_ec(self) -> float:
        if self.leak_ec is not None:
            return self.leak_ec
        return DEFAULT_LEAK_FACTOR * self.n * binary_entropy(self.q)


def extractable_key_length(p: FiniteKeyParams) -> int:
    """Length of key extractable from an n-bit reconciled block.

    floor of n (1 - h(Q + mu)) - Leak_EC - log2(2 p_fail / (eps_bar^2
    eps_cor)), clamped at zero.  Logs are base 2: lengths are in bits.
    """
    if p.eps_bar is None:
        raise ValueError("eps_bar is required for a key-length evaluation")
    penalty = (1.0 + math.log2(p.p_fail) - 2.0 * math.log2(p.eps_bar)
               - math.log2(p.eps_cor))
    bits = (p.n * (1.0 - binary_entropy(p.q + p.mu))
            - p.effective_leak_ec - penalty)
    return max(0, math.floor(bits))


@dataclass(frozen=True)
class RateSolution:
    eps_bar: float
    l: int
    rate: float  # l / n


def epsilon_for_security_rate(s_target: float,
                              params: FiniteKeyParams) -> RateSolution:
    """Solve eps_bar / l(eps_bar) = s_target for eps_bar.

    l(eps_bar) is nondecreasing in eps_bar and the ratio eps_bar / l is
    increasing wherever l > 0, so bisection on the predicate
    "l >= 1 and eps_bar / l >= s_target" brackets the crossing.  Raises
    NoSolutionError when no positive key length exists anywhere in the
    bracket or when the closest achievable ratio misses the target by
    more than 5% relative: that is the vanishing-rate regime, where the
    demanded per-bit security cannot be met at this block length.
    """
    if s_target <= 0.0:
        raise ValueError("s_target must be positive")

    def key_len(eps: float) -> int:
        return extractable_key_length(replace(params, eps_bar=eps))

    def satisfied(eps: float) -> bool:
        l = key_len(eps)
        return l >= 1 and eps / l >= s_target

    lo = 2.0 ** RATE_EPS_FLOOR_LOG2
    hi = 1.0
    if not satisfied(hi):
        raise NoSolutionError(
            f"no positive key length reaches security rate {s_target:g} "
            f"at n={params.n}")
    if satisfied(lo):
        raise NoSolutionError(
            f"security rate {s_target:g} lies below the solvable range "
            f"at n={params.n}")
    for _ in range(RATE_MAX_ITER):
        mid = math.sqrt(lo * hi)
        if satisfied(mid):
            hi = mid
        else:
            lo = mid
        if hi / lo <= 1.0 + RATE_REL_TOL:
            break
    l = key_len(hi)
    achieved = hi / l
    if abs(achieved - s_target) > RATE_ACCEPT_REL_DEV * s_target:
        raise NoSolutionError(
            f"rate vanishes at n={params.n}: closest achievable "
            f"eps_bar/l is {achieved:.3e} (l={l}), target {s_target:g}")
    return RateSolution(eps_bar=hi, l=l, rate=l / params.n)


def default_rate_params(n: int) -> FiniteKeyParams:
    """The documented parameter set for the rate trade-off, at block n."""
    return FiniteKeyParams(n=n, q=DEFAULT_QBER, mu=DEFAULT_MU,
                           p_fail=DEFAULT_P_FAIL, eps_cor=DEFAULT_EPS_COR)
