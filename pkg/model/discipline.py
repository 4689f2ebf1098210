"""Gymnastics disciplines."""

from enum import Enum


class Discipline(Enum):
    """Gymnastics disciplines."""

    ART = "ART"
    RG = "RG"
    AER = "AER"
    ACRO = "ACRO"
    TRA = "TRA"

    def excludes_aborted(self) -> bool:
        """Whether aborted routines are left out of this discipline's fits.

        Only trampoline records routines that were not completed; its
        variability curves are fitted on completed routines alone.

        Returns:
            bool: True if aborted routines are excluded, else False.
        """
        return self is Discipline.TRA

    @classmethod
    def parse(cls, token: str) -> "Discipline":
        """Look up a discipline by its uppercase code.

        Args:
            token (str): The discipline code, e.g. "ART".

        Raises:
            ValueError: If the code is not a known discipline.

        Returns:
            Discipline: The matching discipline.
        """
        try:
            return cls[token]
        except KeyError:
            raise ValueError(f"unknown discipline '{token}'") from None
