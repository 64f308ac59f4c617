"""Experiment configuration shared by the CLI and the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import ConfigError
from .generate import GENERATOR_NAME, generate_set, parse_gen
from .gf import MAX_ORDER, FieldSpec, field_make, is_prime, prime_power
from .vecspace import PointSet

MAX_POINTS = 10**6


def parse_q(text: str, e: int | None = None) -> tuple[int, int]:
    """'9' or '3^2' (optionally with an extension degree) -> (p, e)."""
    text = str(text).strip()
    try:
        if "^" in text:
            base, _, exp = text.partition("^")
            p, ee = int(base), int(exp)
            if not is_prime(p):
                raise ConfigError(f"{p} is not prime")
            if e is not None and e != ee:
                raise ConfigError(f"--e {e} contradicts q={text}")
        else:
            q = int(text)
            if e is not None and e != 1 and is_prime(q):
                p, ee = q, e
            else:
                p, ee = prime_power(q)
                if e is not None and e != ee:
                    raise ConfigError(f"--e {e} contradicts q={q} = {p}^{ee}")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"bad field order {text!r}: not a prime power") from exc
    if ee < 1 or p**ee > MAX_ORDER:
        raise ConfigError(f"q = {p}^{ee} outside [2, 2^20]")
    return p, ee


def parse_list(text: str | None, cast=float) -> list | None:
    if text is None:
        return None
    try:
        vals = [cast(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"bad list {text!r}") from exc
    if not vals:
        raise ConfigError("empty list")
    return [int(v) if isinstance(v, float) and v.is_integer() else v for v in vals]


@dataclass
class ExperimentConfig:
    command: str
    p: int = 2
    e: int = 1
    n: int = 2
    k: int | None = None
    mode: str = "exact"
    seed: int = 0
    gen: str | None = None
    set_path: str | None = None
    u_list: list | None = None
    p_list: list | None = None
    suite: str | None = None
    example: str | None = None
    out: str | None = None
    fmt: str = "json"
    force: bool = False
    timestamp: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def q(self) -> int:
        return self.p**self.e

    @cached_property
    def field(self) -> FieldSpec:
        return field_make(self.p, self.e)

    def validate(self) -> ExperimentConfig:
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if self.q**self.n > MAX_POINTS and not self.force:
            raise ConfigError(f"q^n = {self.q**self.n} exceeds 10^6; pass --force to run anyway")
        if self.k is not None and not 0 <= self.k <= self.n:
            raise ConfigError(f"k={self.k} outside 0..{self.n}")
        if self.mode not in ("exact", "float"):
            raise ConfigError(f"mode must be exact or float, not {self.mode!r}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.gen is not None:
            parse_gen(self.gen)
        if self.gen is not None and self.set_path is not None:
            raise ConfigError("--gen and --set are mutually exclusive")
        return self

    def point_set(self, default: str | None = None) -> PointSet:
        """The set named by --set or --gen, else ``default`` (random third of the space)."""
        if self.set_path is not None:
            from .setfile import read

            E = read(self.set_path)
            if E.field != self.field or E.n != self.n:
                raise ConfigError(f"set file is over q={E.q}, n={E.n}; config says q={self.q}, n={self.n}")
            return E
        spec = self.gen or default or f"random:{max(1, self.q**self.n // 3)}"
        kind, param = parse_gen(spec)
        return generate_set(self.field, self.n, kind, param, self.seed)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "q": self.q,
            "p": self.p,
            "e": self.e,
            "n": self.n,
            "k": self.k,
            "mode": self.mode,
            "seed": self.seed,
            "generator": GENERATOR_NAME,
            "gen": self.gen,
            "set": self.set_path,
            "u_list": self.u_list,
            "p_list": self.p_list,
            "suite": self.suite,
            "example": self.example,
        }
