from collections.abc import Callable

import pytest

from model import Discipline, Gender, JudgeRole, MarkRecord, SigmaModel

HEADER = (
    "competition_id,discipline,apparatus,phase,performance_id,gymnast_id,"
    "gymnast_country,judge_id,judge_country,judge_role,judge_gender,mark,"
    "completed"
)


@pytest.fixture
def make_record() -> Callable[..., MarkRecord]:
    """Factory of mark records with sensible defaults."""

    def factory(
        performance_id: str = "P1",
        judge_id: str = "J1",
        mark: float = 9.0,
        **fields: object,
    ) -> MarkRecord:
        values = {
            "competition_id": "C1",
            "discipline": Discipline.ART,
            "apparatus": "FX_M",
            "phase": "QF",
            "gymnast_id": f"G-{performance_id}",
            "gymnast_country": "USA",
            "judge_country": "FRA",
            "judge_role": JudgeRole.EXECUTION,
            "judge_gender": Gender.F,
            "completed": True,
        }
        values.update(fields)
        return MarkRecord(
            performance_id=performance_id,
            judge_id=judge_id,
            mark=mark,
            **values,  # type: ignore[arg-type]
        )

    return factory


@pytest.fixture
def flat_model() -> Callable[[float], SigmaModel]:
    """Factory of models whose curve is a constant sigma."""

    def factory(sigma: float, scope: str = "FX_M") -> SigmaModel:
        return SigmaModel(scope, alpha=sigma, beta=0.0, gamma=0.0)

    return factory


@pytest.fixture
def csv_text() -> Callable[..., str]:
    """Build a mark dataset from rows given as comma-separated strings."""

    def factory(*rows: str, header: str = HEADER) -> str:
        return "\n".join([header, *rows]) + "\n"

    return factory


def row(
    performance_id: str = "P1",
    judge_id: str = "J1",
    mark: str = "9.0",
    apparatus: str = "FX_M",
    role: str = "EXECUTION",
    completed: str = "true",
    discipline: str = "ART",
    gender: str = "F",
) -> str:
    """One data row in the ingestion format."""
    return (
        f"C1,{discipline},{apparatus},QF,{performance_id},G-{performance_id},USA,"
        f"{judge_id},FRA,{role},{gender},{mark},{completed}"
    )


@pytest.fixture
def make_row() -> Callable[..., str]:
    """Factory of data rows in the ingestion format."""
    return row
