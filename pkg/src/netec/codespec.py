"""Target parameters of a network code: dimension, per-sink rank and distance."""

from dataclasses import dataclass

from .errors import ValidationError
from .flow import maxflow


@dataclass(frozen=True)
class CodeSpec:
    omega: int
    ranks: dict
    dists: dict

    def __post_init__(self):
        if set(self.ranks) != set(self.dists):
            raise ValidationError("ranks and distances must name the same sinks")
        if not self.ranks:
            raise ValidationError("at least one sink is required")
        if self.omega < 1 or self.omega > min(self.ranks.values()):
            raise ValidationError(
                f"dimension {self.omega} must satisfy 0 < omega <= min rank {min(self.ranks.values())}"
            )
        for t, r in self.ranks.items():
            d = self.dists[t]
            if d < 1:
                raise ValidationError(f"distance target for {t!r} must be >= 1")
            if d > r - self.omega + 1:
                raise ValidationError(
                    f"distance target {d} for {t!r} exceeds r - omega + 1 = {r - self.omega + 1}"
                )

    @property
    def sinks(self):
        return tuple(self.ranks)

    def check_network(self, net):
        for t, r in self.ranks.items():
            if t not in net.sinks:
                raise ValidationError(f"unknown sink {t!r}")
            mf = maxflow(net, net.source, t)
            if r > mf:
                raise ValidationError(f"rank target {r} for {t!r} exceeds maxflow {mf}")

    @classmethod
    def uniform(cls, omega, sinks, rank, dist):
        return cls(omega, {t: rank for t in sinks}, {t: dist for t in sinks})

    @classmethod
    def singleton_tight(cls, omega, ranks):
        """Targets d_t = r_t - omega + 1."""
        return cls(omega, dict(ranks), {t: r - omega + 1 for t, r in ranks.items()})
