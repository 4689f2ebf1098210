"""Synthetic competitions with known performance quality.

A generator spec describes the competition, the distribution of true
performance quality, the error curve judges follow and, optionally, the
judges themselves. Marks are drawn around the true quality, rounded to the
0.1 grid execution judges mark on, and clamped to [0, 10]. The true qualities
are returned alongside so tests can compare estimates against them.

Every random draw comes from numpy's PCG64 generator, one child stream per
concern spawned from the seed, so the output depends on the seed alone.
"""

from __future__ import annotations

import json
import logging
import math
from os import PathLike
from typing import IO, TYPE_CHECKING, Any, NamedTuple

import numpy as np
import pandas as pd

from model import Discipline, Gender, JudgeRole, MarkRecord, SynthSpecError

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

    import numpy.typing as npt

_logger = logging.getLogger(__name__)

SYNTH_GRID = 0.1
DEFAULT_SYNTH_SEED = 2016
DEFAULT_COUNTRIES = ("AUS", "BRA", "CHN", "FRA", "GBR", "JPN", "RUS", "USA")


class QualityDistribution(NamedTuple):
    """Normal distribution of true quality, clipped to [low, high]."""

    mean: float = 8.0
    sd: float = 0.6
    low: float = 6.5
    high: float = 9.5

    def draw(
        self, rng: np.random.Generator, size: int
    ) -> npt.NDArray[np.float64]:
        """Draw true qualities.

        Args:
            rng (np.random.Generator): Source of randomness.
            size (int): Number of draws.

        Returns:
            np.ndarray: The qualities.
        """
        return np.clip(rng.normal(self.mean, self.sd, size), self.low, self.high)


class GeneratingCurve(NamedTuple):
    """Judging error standard deviation as a function of true quality.

    The defaults give about 0.45 at quality 7 and 0.1 at quality 9.5.
    """

    alpha: float = 0.59054
    beta: float = -0.0042441
    gamma: float = 0.5
    floor: float = 0.05

    def sigma(self, quality: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Floored error standard deviation at the given qualities."""
        q = np.asarray(quality, dtype=float)
        return np.maximum(self.alpha + self.beta * np.exp(self.gamma * q), self.floor)


class JudgeProfile(NamedTuple):
    """A synthetic judge and the way it departs from an average judge.

    Attributes:
        judge_id (str): Judge identifier.
        country (str): The judge's federation.
        gender (Gender): The judge's gender.
        role (JudgeRole): EXECUTION or REFERENCE.
        scale (float): Multiplier of the error standard deviation.
        bias (float): Constant added to every mark.
        compatriot_bias (float): Further constant added for compatriots.
    """

    judge_id: str
    country: str
    gender: Gender = Gender.UNKNOWN
    role: JudgeRole = JudgeRole.EXECUTION
    scale: float = 1.0
    bias: float = 0.0
    compatriot_bias: float = 0.0


class TruthRow(NamedTuple):
    """True quality of one performance."""

    performance_id: str
    true_quality: float


class SynthSpec(NamedTuple):
    """Everything a synthetic competition is generated from."""

    competition_id: str = "SYN"
    discipline: Discipline = Discipline.ART
    apparatus: tuple[str, ...] = ("FX_M",)
    phase: str = "QF"
    n_performances: int = 500
    panel_size: int = 7
    n_reference: int = 2
    quality: QualityDistribution = QualityDistribution()
    curve: GeneratingCurve = GeneratingCurve()
    judges: tuple[JudgeProfile, ...] = ()
    countries: tuple[str, ...] = DEFAULT_COUNTRIES
    aborted_rate: float = 0.0
    seed: int = DEFAULT_SYNTH_SEED

    def violations(self) -> list[str]:
        """List the problems that prevent generation.

        Returns:
            list[str]: Violation messages, empty when the spec is usable.
        """
        problems = []
        if self.n_performances < 1:
            problems.append("n_performances must be positive")
        if self.panel_size < 3:
            problems.append(f"panel_size must be at least 3, got {self.panel_size}")
        if self.n_reference < 0:
            problems.append("n_reference must be nonnegative")
        if not self.apparatus:
            problems.append("at least one apparatus is needed")
        if not self.countries:
            problems.append("at least one country is needed")
        if self.quality.sd < 0 or self.quality.low > self.quality.high:
            problems.append("quality distribution is empty")
        if not (0 <= self.quality.low and self.quality.high <= 10):
            problems.append("quality bounds must lie in [0, 10]")
        if self.curve.floor <= 0:
            problems.append("curve floor must be positive")
        if not 0 <= self.aborted_rate <= 1:
            problems.append("aborted_rate must lie in [0, 1]")
        ids = [profile.judge_id for profile in self.judges]
        if len(set(ids)) != len(ids):
            problems.append("judge ids must be unique")
        for profile in self.judges:
            if profile.scale < 0:
                problems.append(f"judge {profile.judge_id} has a negative scale")
            if profile.role not in (JudgeRole.EXECUTION, JudgeRole.REFERENCE):
                problems.append(
                    f"judge {profile.judge_id} must be EXECUTION or REFERENCE"
                )
        if self.judges:
            execution = self.pool(JudgeRole.EXECUTION)
            reference = self.pool(JudgeRole.REFERENCE)
            if len(execution) < self.panel_size:
                problems.append(
                    f"{len(execution)} execution judge(s) for a panel of"
                    f" {self.panel_size}"
                )
            if len(reference) < self.n_reference:
                problems.append(
                    f"{len(reference)} reference judge(s) for {self.n_reference}"
                    " reference seats"
                )
        return problems

    def judge_pool(self) -> tuple[JudgeProfile, ...]:
        """The configured judges, or a default pool of average judges.

        Returns:
            tuple[JudgeProfile, ...]: The judges.
        """
        if self.judges:
            return self.judges
        genders = (Gender.F, Gender.M)
        execution = tuple(
            JudgeProfile(
                f"E{index:02d}",
                self.countries[(index - 1) % len(self.countries)],
                genders[(index - 1) % 2],
            )
            for index in range(1, self.panel_size + 1)
        )
        reference = tuple(
            JudgeProfile(
                f"R{index:02d}",
                self.countries[(index + self.panel_size - 1) % len(self.countries)],
                genders[(index - 1) % 2],
                JudgeRole.REFERENCE,
            )
            for index in range(1, self.n_reference + 1)
        )
        return execution + reference

    def pool(self, role: JudgeRole) -> list[JudgeProfile]:
        """Judges of the pool holding the given role."""
        return [profile for profile in self.judge_pool() if profile.role is role]

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> SynthSpec:
        """Build a spec from its JSON form.

        Args:
            raw (Mapping[str, Any]): Decoded JSON object.

        Raises:
            SynthSpecError: If a field is malformed or the spec is invalid.

        Returns:
            SynthSpec: The spec.
        """
        if unknown := sorted(set(raw) - set(cls._fields)):
            raise SynthSpecError(f"unknown spec field(s): {', '.join(unknown)}")
        try:
            spec = cls(
                competition_id=str(raw.get("competition_id", "SYN")),
                discipline=Discipline.parse(str(raw.get("discipline", "ART"))),
                apparatus=tuple(str(a) for a in raw.get("apparatus", ("FX_M",))),
                phase=str(raw.get("phase", "QF")),
                n_performances=int(raw.get("n_performances", 500)),
                panel_size=int(raw.get("panel_size", 7)),
                n_reference=int(raw.get("n_reference", 2)),
                quality=QualityDistribution(**raw.get("quality", {})),
                curve=GeneratingCurve(**raw.get("curve", {})),
                judges=tuple(
                    _profile_from_dict(profile) for profile in raw.get("judges", ())
                ),
                countries=tuple(
                    str(c) for c in raw.get("countries", DEFAULT_COUNTRIES)
                ),
                aborted_rate=float(raw.get("aborted_rate", 0.0)),
                seed=int(raw.get("seed", DEFAULT_SYNTH_SEED)),
            )
        except (TypeError, ValueError) as exc:
            raise SynthSpecError(f"malformed synth spec: {exc}") from exc
        if problems := spec.violations():
            raise SynthSpecError(f"invalid synth spec: {problems[0]}")
        return spec

    @classmethod
    def load(cls, path: str | PathLike[str]) -> SynthSpec:
        """Read a spec from a JSON file.

        Args:
            path (str | PathLike): The file.

        Raises:
            SynthSpecError: If the file is not valid JSON or not a valid spec.

        Returns:
            SynthSpec: The spec.
        """
        with open(path, encoding="utf-8") as handle:
            try:
                raw = json.load(handle)
            except json.JSONDecodeError as exc:
                raise SynthSpecError(f"{path}: not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise SynthSpecError(f"{path}: expected a JSON object")
        return cls.from_dict(raw)


def generate_competition(
    spec: SynthSpec, seed: int | None = None
) -> tuple[list[MarkRecord], list[TruthRow]]:
    """Generate the marks of a synthetic competition.

    Each performance gets panel_size execution judges and n_reference
    reference judges drawn from the judge pool without replacement. A judge
    marks Normal(q + bias, scale * sigma(q)), plus its compatriot bias when
    the gymnast shares its country, with q the true quality.

    Args:
        spec (SynthSpec): The generator spec.
        seed (int | None, optional): Overrides the spec's seed.

    Raises:
        SynthSpecError: If the spec is invalid.

    Returns:
        tuple[list[MarkRecord], list[TruthRow]]: The marks, ordered by
            performance then judge, and the true quality per performance.
    """
    if problems := spec.violations():
        raise SynthSpecError(f"invalid synth spec: {problems[0]}")
    seed = spec.seed if seed is None else seed
    quality_stream, panel_stream, mark_stream = (
        np.random.default_rng(child)
        for child in np.random.SeedSequence(seed).spawn(3)
    )

    qualities = spec.quality.draw(quality_stream, spec.n_performances)
    execution = spec.pool(JudgeRole.EXECUTION)
    reference = spec.pool(JudgeRole.REFERENCE)
    width = len(str(spec.n_performances))

    records: list[MarkRecord] = []
    truth: list[TruthRow] = []
    for index, quality in enumerate(qualities, start=1):
        performance_id = f"{spec.competition_id}-P{index:0{width}d}"
        gymnast_country = spec.countries[
            int(panel_stream.integers(len(spec.countries)))
        ]
        completed = not panel_stream.random() < spec.aborted_rate
        panel = _seat(panel_stream, execution, spec.panel_size) + _seat(
            panel_stream, reference, spec.n_reference
        )
        sigma = float(spec.curve.sigma(quality))
        noise = mark_stream.standard_normal(len(panel))
        for profile, z in zip(panel, noise):
            shift = profile.bias
            if profile.country == gymnast_country:
                shift += profile.compatriot_bias
            records.append(
                MarkRecord(
                    competition_id=spec.competition_id,
                    discipline=spec.discipline,
                    apparatus=spec.apparatus[(index - 1) % len(spec.apparatus)],
                    phase=spec.phase,
                    performance_id=performance_id,
                    gymnast_id=f"G{index:0{width}d}",
                    gymnast_country=gymnast_country,
                    judge_id=profile.judge_id,
                    judge_country=profile.country,
                    judge_role=profile.role,
                    judge_gender=profile.gender,
                    mark=_on_grid(quality + shift + profile.scale * sigma * z),
                    completed=completed,
                )
            )
        truth.append(TruthRow(performance_id, float(quality)))

    _logger.info(
        "generated %d marks for %d performances (seed %d)",
        len(records),
        len(truth),
        seed,
    )
    return records, truth


def write_truth_csv(
    truth: Iterable[TruthRow], target: str | PathLike[str] | IO[str]
) -> None:
    """Write the true quality table as `performance_id,true_quality`.

    Args:
        truth (Iterable[TruthRow]): The table.
        target (str | PathLike | IO[str]): Destination path or text stream.
    """
    frame = pd.DataFrame(list(truth), columns=list(TruthRow._fields))
    frame.to_csv(target, index=False, float_format="%.6f", lineterminator="\n")


def _seat(
    rng: np.random.Generator, pool: Sequence[JudgeProfile], seats: int
) -> list[JudgeProfile]:
    """Choose judges for the seats, keeping pool order."""
    if seats == 0:
        return []
    if seats == len(pool):
        return list(pool)
    chosen = np.sort(rng.choice(len(pool), size=seats, replace=False))
    return [pool[i] for i in chosen]


def _on_grid(value: float) -> float:
    """Round to the 0.1 grid and clamp to [0, 10]."""
    steps = math.floor(value / SYNTH_GRID + 0.5)
    return min(10.0, max(0.0, round(steps * SYNTH_GRID, 1)))


def _profile_from_dict(raw: Mapping[str, Any]) -> JudgeProfile:
    if "judge_id" not in raw or "country" not in raw:
        raise SynthSpecError("every judge needs a judge_id and a country")
    return JudgeProfile(
        judge_id=str(raw["judge_id"]),
        country=str(raw["country"]),
        gender=Gender.parse(str(raw.get("gender", "UNKNOWN"))),
        role=JudgeRole.parse(str(raw.get("role", "EXECUTION"))),
        scale=float(raw.get("scale", 1.0)),
        bias=float(raw.get("bias", 0.0)),
        compatriot_bias=float(raw.get("compatriot_bias", 0.0)),
    )
