"""Keyword configuration defaults, file loading, validation."""

import pytest

from smartgraph.config import ConfigError, KeywordConfig, load_config


def test_defaults_match_algorithm_lists():
    cfg = KeywordConfig()
    assert cfg.stake_names == ["stake", "deposit", "lock", "provide"]
    assert cfg.unstake_names == ["unstake", "withdraw", "unlock", "release"]
    assert cfg.exit_names == ["withdraw", "unstake", "claim", "redeem", "transfer"]
    assert cfg.price_names == ["rebase", "fetchprice", "updateprice", "getrate"]
    assert cfg.transfer_names == ["transfer", "transferfrom", "safetransfer", "send"]
    assert cfg.earn_spend_pairs == [(["earn", "reward", "accrue"], ["spend", "redeem", "claim"])]
    assert cfg.collateral_pairs == [(["borrow", "lock"], ["repay", "release"])]
    assert cfg.max_distance == 10
    assert cfg.complexity_threshold == 5
    cfg.validate()


def test_load_overrides_only_given_keys(tmp_path):
    path = tmp_path / "kw.conf"
    path.write_text(
        "# tuning\n"
        "stake_names = stake,bond\n"
        "max_distance = 3\n"
    )
    cfg = load_config(str(path))
    assert cfg.stake_names == ["stake", "bond"]
    assert cfg.max_distance == 3
    assert cfg.exit_names == ["withdraw", "unstake", "claim", "redeem", "transfer"]


def test_load_rejects_unknown_key(tmp_path):
    path = tmp_path / "kw.conf"
    path.write_text("mystery = 1\n")
    with pytest.raises(ConfigError, match="mystery"):
        load_config(str(path))


def test_load_rejects_non_integer_threshold(tmp_path):
    path = tmp_path / "kw.conf"
    path.write_text("max_distance = soon\n")
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_load_rejects_malformed_line(tmp_path):
    path = tmp_path / "kw.conf"
    path.write_text("just some words\n")
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_validate_rejects_uppercase_entries():
    cfg = KeywordConfig(stake_names=["Stake"])
    with pytest.raises(ConfigError):
        cfg.validate()


def test_validate_rejects_bad_thresholds():
    with pytest.raises(ConfigError):
        KeywordConfig(max_distance=0).validate()
    with pytest.raises(ConfigError):
        KeywordConfig(complexity_threshold=1).validate()
