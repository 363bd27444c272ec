"""Enumeration budget shared across the brute-force routines."""

from .errors import BudgetExceededError

DEFAULT_BUDGET = 10_000_000


class Budget:
    """Counts enumerated items and raises once ``limit`` is passed.

    One instance can be threaded through several calls so that a whole run
    (e.g. a CLI invocation) shares a single cap.
    """

    def __init__(self, limit=DEFAULT_BUDGET):
        self.limit = int(limit)
        self.spent = 0

    def spend(self, n=1, what="enumeration"):
        self.spent += int(n)
        if self.spent > self.limit:
            raise BudgetExceededError(
                f"{what} exceeded budget: {self.spent} > {self.limit} items "
                f"(partial progress: {self.spent - int(n)} items done before this step)",
                spent=self.spent,
                limit=self.limit,
            )

    def __repr__(self):
        return f"Budget(limit={self.limit}, spent={self.spent})"


def as_budget(budget):
    """Accept ``None``, an int limit, or an existing :class:`Budget`."""
    if budget is None:
        return Budget()
    if isinstance(budget, Budget):
        return budget
    return Budget(budget)
