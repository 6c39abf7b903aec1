"""Exception hierarchy shared by every module.

Each error carries a short machine-readable ``code`` so the command line
front end can emit structured error objects.
"""


class DPColorError(Exception):
    code = "error"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class GraphError(DPColorError):
    code = "graph"


class IdentificationError(GraphError):
    code = "identify"


class CoverError(DPColorError):
    code = "cover"


class StraightenError(CoverError):
    code = "straighten"


class SolverError(DPColorError):
    code = "solver"


class ReducibilityError(DPColorError):
    code = "reducibility"


class DischargingError(DPColorError):
    code = "discharging"
