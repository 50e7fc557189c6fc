"""Run-wide knobs with the desk-scale defaults used throughout the suite."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Caps:
    """Hard limits that keep brute-force sweeps feasible.

    max_alphabet caps every per-terminal alphabet; max_det_maps caps the
    number of deterministic encoder functions enumerated per transmitter;
    max_templates caps outer-bound template enumeration.
    """

    max_alphabet: int = 6
    max_det_maps: int = 4096
    max_templates: int = 20000
    vertex_dim_max: int = 5
    two_letter_state_cap: int = 4096


@dataclass(frozen=True)
class RunConfig:
    """Everything a reproducible run depends on.

    A fixed seed makes all sampled-pmf paths byte-deterministic; grid paths
    are deterministic regardless.
    """

    grid: int = 8
    tol_bits: float = 1e-6
    aux_cards: dict = field(default_factory=lambda: {"W": 2, "U": 2, "V": 2, "Z": 3, "D": 4})
    workers: int = 1
    seed: int = 0
    caps: Caps = field(default_factory=Caps)

    def aux(self, name, default=2):
        return int(self.aux_cards.get(name, default))


DEFAULT_CONFIG = RunConfig()
