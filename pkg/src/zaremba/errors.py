"""Exception hierarchy shared by every module of the workbench."""


class ZarembaError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ZarembaError, ValueError):
    """An argument lies outside the domain of the operation."""


class ContinuantOverflowError(ZarembaError, OverflowError):
    """An exact integer result exceeded the supported width."""


class InfeasibleParametersError(ZarembaError):
    """Construction parameters cannot satisfy a required inequality.

    ``constraint`` holds the violated inequality written out in full so
    callers (and the CLI) can print it verbatim.
    """

    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        self.detail = detail
        msg = f"infeasible parameters: {constraint}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ConstructionEmptyError(ZarembaError):
    """A construction stage produced an empty set."""

    def __init__(self, stage: str, diagnostics: dict | None = None):
        self.stage = stage
        self.diagnostics = dict(diagnostics or {})
        parts = ", ".join(f"{k}={v}" for k, v in self.diagnostics.items())
        super().__init__(f"construction emptied at {stage}" + (f": {parts}" if parts else ""))
