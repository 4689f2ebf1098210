"""Roles a judge can hold on a panel, and judge gender."""

from enum import Enum


class JudgeRole(Enum):
    """Roles a judge can hold on a panel."""

    EXECUTION = "EXECUTION"
    REFERENCE = "REFERENCE"
    SUPERIOR = "SUPERIOR"
    VIDEO_REVIEW = "VIDEO_REVIEW"

    def on_regular_panel(self) -> bool:
        """Whether the role belongs to the regular execution panel.

        Returns:
            bool: True for execution judges, else False.
        """
        return self is JudgeRole.EXECUTION

    @classmethod
    def parse(cls, token: str) -> "JudgeRole":
        """Look up a role by its uppercase name.

        Args:
            token (str): The role name.

        Raises:
            ValueError: If the name is not a known role.

        Returns:
            JudgeRole: The matching role.
        """
        try:
            return cls[token]
        except KeyError:
            raise ValueError(f"unknown judge_role '{token}'") from None


class Gender(Enum):
    """Judge gender, UNKNOWN when the dataset does not say."""

    F = "F"
    M = "M"
    UNKNOWN = "UNKNOWN"

    @classmethod
    def parse(cls, token: str) -> "Gender":
        """Look up a gender by its code.

        Args:
            token (str): "F", "M" or "UNKNOWN".

        Raises:
            ValueError: If the code is not known.

        Returns:
            Gender: The matching gender.
        """
        try:
            return cls[token]
        except KeyError:
            raise ValueError(f"unknown judge_gender '{token}'") from None
