"""Instance generator registry.

Generators are plain functions of integer parameters; the registry records their
defaults and whether they draw from the run seed.
"""

import inspect
import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from functools import partial

from rematch.adversaries.batchperm_tight import gen_batchperm_tight
from rematch.adversaries.dto import GeneratedInstance
from rematch.adversaries.line import gen_line_alternating, gen_recursive_cancel_bad
from rematch.adversaries.randomized import gen_dynamic, gen_random
from rematch.adversaries.star import (
    StarAdversary,
    gen_star,
    normalize_star_matching,
    path_diagnostic,
)
from rematch.errors import ContractError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Generator:
    name: str
    build: Callable[..., GeneratedInstance]
    defaults: dict[str, int]
    seeded: bool

    def generate(self, params: Mapping[str, str | int], seed: int) -> GeneratedInstance:
        unknown = set(params) - set(self.defaults)
        if unknown:
            raise ContractError(
                f"{self.name}: unknown parameter(s) {sorted(unknown)}; "
                f"accepted: {sorted(self.defaults)}"
            )
        values: dict[str, int] = dict(self.defaults)
        for key, raw in params.items():
            try:
                values[key] = int(raw)
            except ValueError:
                message = f"{self.name}: parameter {key}={raw!r} is not an integer"
                raise ContractError(message) from None
        if self.seeded:
            values["seed"] = seed
        return self.build(**values)


def _validate_generator(generator: Generator, name: str) -> None:
    """Validate the declared parameters match the generator's signature."""
    accepted = set(inspect.signature(generator.build).parameters)
    declared = set(generator.defaults) | ({"seed"} if generator.seeded else set())
    if declared != accepted:
        raise TypeError(f"{name}: declared parameters {sorted(declared)} do not match "
                        f"signature {sorted(accepted)}")
    logger.debug(f"✓ {name}: parameters {sorted(generator.defaults)}")


def _build_registry() -> dict[str, Generator]:
    """Build GENERATORS registry with validation."""
    generators = [
        Generator("random-line", partial(gen_random, "line"), {"n": 32, "k": 16}, True),
        Generator("random-general", partial(gen_random, "general"), {"n": 32, "k": 16}, True),
        Generator("random-dynamic", gen_dynamic, {"n_points": 32, "n_events": 200}, True),
        Generator("line-alternating", gen_line_alternating, {"n": 16}, False),
        Generator("recursive-cancel-bad", gen_recursive_cancel_bad, {"k": 8}, False),
        Generator("batchperm-tight", gen_batchperm_tight, {"k": 27, "d": 3}, False),
        Generator("star", gen_star, {"n": 16}, False),
    ]

    registry = {}
    for generator in generators:
        _validate_generator(generator, generator.name)
        registry[generator.name] = generator

    logger.info(f"Generator registry initialized with {len(registry)} generators")
    return registry


GENERATORS: dict[str, Generator] = _build_registry()

__all__ = [
    "GENERATORS",
    "GeneratedInstance",
    "Generator",
    "StarAdversary",
    "gen_batchperm_tight",
    "gen_dynamic",
    "gen_line_alternating",
    "gen_random",
    "gen_recursive_cancel_bad",
    "gen_star",
    "normalize_star_matching",
    "path_diagnostic",
]
