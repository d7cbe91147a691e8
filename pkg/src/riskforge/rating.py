"""Rank bands and the RPN formula.

Three 1..10 ranking scales share the same five bands (9-10, 7-8, 5-6, 2-4,
1). Occurrence bands are keyed by exact failure frequency, severity bands
by a per-domain consequence class, and detection bands by the class of
control method. Analysts may pick any rank inside a band; when only the
band is known, the band maximum is the conservative representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    CONTROL_METHOD_CLASSES,
    Domain,
    Frequency,
    is_valid_rank,
)


@dataclass(frozen=True, slots=True)
class RankBand:
    """An inclusive range of ranks on the 1..10 scale."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not (is_valid_rank(self.lo) and is_valid_rank(self.hi) and self.lo <= self.hi):
            raise ValueError(f"invalid rank band {self.lo}..{self.hi}")

    def __contains__(self, rank: object) -> bool:
        return is_valid_rank(rank) and self.lo <= rank <= self.hi

    def __str__(self) -> str:
        return str(self.lo) if self.lo == self.hi else f"{self.lo}-{self.hi}"


BAND_9_10 = RankBand(9, 10)
BAND_7_8 = RankBand(7, 8)
BAND_5_6 = RankBand(5, 6)
BAND_2_4 = RankBand(2, 4)
BAND_1 = RankBand(1, 1)

#: The five bands, worst row first, shared by all three scales.
BANDS = (BAND_9_10, BAND_7_8, BAND_5_6, BAND_2_4, BAND_1)

#: Severity class tokens per domain, in band order (worst first). The
#: condensed tokens stand for: a safety hazard; the strongest non-safety
#: consequence of that domain (buyers defect / the function is hard to
#: operate / the primary function is hit); a substantial but secondary
#: consequence (return to repair / below-standard performance / secondary
#: function hit); a tolerable or isolated defect (and for components a
#: non-functional one); and a consequence invisible to users.
SEVERITY_CLASSES: dict[Domain, tuple[str, ...]] = {
    Domain.REQUIREMENT: (
        "SafetyIssue",
        "ChooseCompetitor",
        "ReturnToFix",
        "Tolerate",
        "Invisible",
    ),
    Domain.FUNCTION: (
        "SafetyIssue",
        "DifficultToOperate",
        "UnderStandardPerformance",
        "IsolatedDefect",
        "Invisible",
    ),
    Domain.COMPONENT: (
        "SafetyIssue",
        "PrimaryFunctionEffect",
        "SecondaryFunctionEffect",
        "NonFunctionalEffect",
        "Invisible",
    ),
}

ALL_SEVERITY_CLASS_NAMES = frozenset(
    name for names in SEVERITY_CLASSES.values() for name in names
)

# Occurrence boundaries. The scale's rows as usually written leave two
# gaps, (1/10000, 1/1250) and (1/1000000, 1/100000); a frequency in a gap
# maps to the higher adjacent band, because under-ranking occurrence is
# the costlier mistake. That widens the effective 5-6 band down to just
# above 1/10000 and the 2-4 band down to just above 1/1000000.
_FREQ_9_10 = Fraction(1, 20)
_FREQ_7_8 = Fraction(1, 125)
_FREQ_5_6_EXCLUSIVE = Fraction(1, 10000)
_FREQ_2_4_EXCLUSIVE = Fraction(1, 1000000)


def occurrence_band(frequency: Frequency | Fraction) -> RankBand:
    """Map a positive failure frequency to its occurrence band, exactly.

    Comparisons are exact rational comparisons; the function is total over
    positive rationals and monotone (a higher frequency never lands in a
    lower band).
    """
    value = frequency.as_fraction() if isinstance(frequency, Frequency) else Fraction(frequency)
    if value <= 0:
        raise ValueError(f"frequency must be positive, got {value}")
    if value >= _FREQ_9_10:
        return BAND_9_10
    if value >= _FREQ_7_8:
        return BAND_7_8
    if value > _FREQ_5_6_EXCLUSIVE:
        return BAND_5_6
    if value > _FREQ_2_4_EXCLUSIVE:
        return BAND_2_4
    return BAND_1


def severity_band(domain: Domain, class_name: str) -> RankBand:
    """Map a (domain, severity class) pair to its band."""
    names = SEVERITY_CLASSES[Domain(domain)]
    try:
        row = names.index(class_name)
    except ValueError:
        raise ValueError(
            f"unknown severity class {class_name!r} for {Domain(domain).value}"
            f" elements; expected one of {names}"
        ) from None
    return BANDS[row]


def detection_band(method_class: str) -> RankBand:
    """Map a control method class to its detection band."""
    try:
        row = CONTROL_METHOD_CLASSES.index(method_class)
    except ValueError:
        raise ValueError(
            f"unknown control method class {method_class!r};"
            f" expected one of {CONTROL_METHOD_CLASSES}"
        ) from None
    return BANDS[row]


def rank_consistent(rank: int, band: RankBand) -> bool:
    """True when a rank lies inside the band."""
    return rank in band


def representative_rank(band: RankBand) -> int:
    """The rank used when only a band is known: the band maximum."""
    return band.hi


def rpn(severity: int, occurrence: int, detection: int) -> int:
    """Risk priority number: the product of the three ranks, in 1..1000."""
    for name, value in (("severity", severity), ("occurrence", occurrence), ("detection", detection)):
        if not is_valid_rank(value):
            raise ValueError(f"{name} rank must be an integer in 1..10, got {value!r}")
    return severity * occurrence * detection
