from typing import Any, NamedTuple


class Check(NamedTuple):
    """Outcome of a predicate together with the first witness of failure.

    Truthiness follows ``ok`` so ``if is_ideal(...)`` reads naturally while
    ``ok, witness = is_ideal(...)`` still unpacks.
    """

    ok: bool
    witness: Any = None

    def __bool__(self):
        return bool(self.ok)
