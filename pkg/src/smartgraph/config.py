"""Detector keyword lists and thresholds.

Loadable from a plain key-value file: one entry per line, ``key = a,b,c``,
lowercase values, ``#`` comments.  Absent keys keep their defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields


class ConfigError(ValueError):
    """Invalid configuration file or detector selection."""


@dataclass
class KeywordConfig:
    stake_names: list[str] = field(default_factory=lambda: ["stake", "deposit", "lock", "provide"])
    unstake_names: list[str] = field(default_factory=lambda: ["unstake", "withdraw", "unlock", "release"])
    exit_names: list[str] = field(default_factory=lambda: ["withdraw", "unstake", "claim", "redeem", "transfer"])
    price_names: list[str] = field(default_factory=lambda: ["rebase", "fetchprice", "updateprice", "getrate"])
    transfer_names: list[str] = field(default_factory=lambda: ["transfer", "transferfrom", "safetransfer", "send"])
    earn_names: list[str] = field(default_factory=lambda: ["earn", "reward", "accrue"])
    spend_names: list[str] = field(default_factory=lambda: ["spend", "redeem", "claim"])
    collateral_entry_names: list[str] = field(default_factory=lambda: ["borrow", "lock"])
    collateral_exit_names: list[str] = field(default_factory=lambda: ["repay", "release"])
    max_distance: int = 10
    complexity_threshold: int = 5
    similarity_threshold: int = 1  # max edit distance between confusable names
    min_similarity_length: int = 4

    @property
    def earn_spend_pairs(self) -> list[tuple[list[str], list[str]]]:
        return [(self.earn_names, self.spend_names)]

    @property
    def collateral_pairs(self) -> list[tuple[list[str], list[str]]]:
        return [(self.collateral_entry_names, self.collateral_exit_names)]

    def validate(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, list):
                for entry in value:
                    if not entry or entry != entry.lower():
                        raise ConfigError(f"{f.name}: entries must be non-empty lowercase strings")
        if self.max_distance < 1:
            raise ConfigError("max_distance must be >= 1")
        if self.complexity_threshold < 2:
            raise ConfigError("complexity_threshold must be >= 2")


_INT_KEYS = {"max_distance", "complexity_threshold", "similarity_threshold", "min_similarity_length"}


def load_config(path: str, base: KeywordConfig | None = None) -> KeywordConfig:
    """Read a key-value config file over the defaults (or a given base)."""
    cfg = base or KeywordConfig()
    valid = {f.name for f in fields(KeywordConfig)}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = values'")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in valid:
                raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
            if key in _INT_KEYS:
                try:
                    setattr(cfg, key, int(value.strip()))
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: '{key}' expects an integer") from exc
            else:
                entries = [v.strip() for v in value.split(",") if v.strip()]
                setattr(cfg, key, entries)
    cfg.validate()
    return cfg
