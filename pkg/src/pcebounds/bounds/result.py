"""The result type shared by every bound."""
import math
from dataclasses import dataclass

# exp overflows a float above this
_MAX_LOG = math.log(float.fromhex("0x1.fffffffffffffp+1023"))


@dataclass(frozen=True)
class BoundResult:
    """An upper bound on a query output size.

    :param method: Name of the method that produced the bound.
    :type method: str

    :param log_bound: Natural log of the bound, ``-inf`` for zero.
    :type log_bound: float

    :param witness: Method-specific certificate: cover weights, an
        ordering, a path or an entropy vector.
    :type witness: dict
    """
    method: str
    log_bound: float
    witness: dict = None

    @property
    def bound(self):
        """The bound as a count, saturating at ``inf``."""
        if self.log_bound == -math.inf:
            return 0.0
        if self.log_bound > _MAX_LOG:
            return math.inf

        return math.exp(self.log_bound)

    @property
    def log2_bound(self):

        return self.log_bound / math.log(2)

    def __str__(self):

        return f"{self.method}: {self.bound:.12g}"


def empty_result(method, label):
    """The zero bound forced by an empty statistic."""
    return BoundResult(method, -math.inf, {"empty": label})
