"""Exception hierarchy shared by every module.

Each error carries a short machine-readable ``code`` and a ``context`` dict so
that callers (and the command-line front end) can report failures without
parsing messages.
"""

from __future__ import annotations

from typing import Any


class NetworkOperadError(ValueError):
    """Base class for domain errors (bad operations, infeasible plans, ...)."""

    code = "domain_error"

    def __init__(self, detail: str, code: str | None = None, **context: Any) -> None:
        super().__init__(detail)
        if code is not None:
            self.code = code
        self.detail = detail
        self.context = context

    def to_json(self) -> dict[str, Any]:
        return {"error": self.code, "detail": self.detail, "context": self.context}


class GraphOpError(NetworkOperadError):
    code = "invalid_graph_op"


class CompositionError(NetworkOperadError):
    code = "composition_error"


class FleetError(NetworkOperadError):
    code = "invalid_fleet"


class CatalogError(NetworkOperadError):
    code = "invalid_catalog"


class NestingError(NetworkOperadError):
    code = "invalid_nesting"


class DesignError(NetworkOperadError):
    code = "invalid_design"


class SearchSpaceTooLarge(NetworkOperadError):
    code = "search_space_too_large"


class TaskError(NetworkOperadError):
    code = "invalid_tasks"


class InfeasibleError(NetworkOperadError):
    code = "infeasible"


class NodeLimitExceeded(NetworkOperadError):
    """The solver ran out of nodes before proving optimality or infeasibility.

    ``best`` holds the best schedule found so far, if any.
    """

    code = "node_limit_exceeded"

    def __init__(self, detail: str, best: Any = None, **context: Any) -> None:
        super().__init__(detail, **context)
        self.best = best
