"""Config defaults, strict validation, JSON round trips."""

import json

import pytest

from mmsim.config import (
    SCHEMA_VERSION,
    ConfigError,
    ScenarioConfig,
    default_config,
    describe_keys,
    from_dict,
    load_config,
    save_config,
    to_dict,
    validate,
)


def test_defaults_frozen():
    cfg = default_config()
    assert cfg.schema_version == SCHEMA_VERSION == 1
    assert cfg.carrier_frequency_hz == 28e9
    assert cfg.noise_figure_db == 7.0
    assert cfg.bandwidth_hz == 1e9
    assert cfg.distance_m == 100.0
    assert cfg.num_ues == 4
    assert (cfg.array.n_vertical, cfg.array.n_horizontal) == (8, 8)
    assert (cfg.array.spacing_vertical, cfg.array.spacing_horizontal) == (0.7, 0.5)
    assert cfg.tx_power_dbm == 30.0
    assert cfg.phase_bits == 6
    assert (cfg.oversampling_v, cfg.oversampling_h) == (1, 1)
    assert cfg.tau == 0.99
    assert cfg.channel_model == "nyu"
    assert cfg.precoders == ("gob_p", "gob_slnr", "mf", "zf", "mmse")
    assert cfg.drops == 10000
    assert cfg.master_seed == 1
    assert cfg.shadowing is True


def test_geometry_and_param_lookups():
    cfg = default_config()
    geom = cfg.geometry()
    assert geom.n_elements == 64
    assert geom.carrier_frequency == 28e9
    assert cfg.cluster_params("nyu").cluster_count_mode == "poisson"
    assert cfg.cluster_params("uma").cluster_count_mode == "fixed"
    # Rayleigh borrows its large-scale constants from a configurable model.
    assert cfg.pathloss_params("rayleigh") is cfg.channel_params.nyu_pathloss
    other = from_dict({"channel_params": {"rayleigh_pathloss_model": "uma"}})
    assert other.pathloss_params("rayleigh") is other.channel_params.uma_pathloss


@pytest.mark.parametrize("override,fragment", [
    ({"schema_version": 2}, "schema_version"),
    ({"bandwidth_hz": 0.0}, "bandwidth_hz"),
    ({"distance_m": -5.0}, "distance_m"),
    ({"num_ues": 0}, "num_ues"),
    ({"num_ues": 65}, "num_ues"),
    ({"tau": 1.5}, "tau"),
    ({"channel_model": "fancy"}, "channel_model"),
    ({"drops": 0}, "drops"),
    ({"master_seed": -1}, "master_seed"),
    ({"master_seed": 2 ** 64}, "master_seed"),
    ({"phase_bits": -1}, "phase_bits"),
    ({"oversampling_v": 0}, "oversampling"),
    ({"precoders": []}, "precoders"),
    ({"precoders": ["mf", "dirty"]}, "dirty"),
    ({"precoders": ["mf", "mf"]}, "duplicate"),
    ({"array": {"n_vertical": 0}}, "array"),
    ({"channel_params": {"rayleigh_pathloss_model": "x"}}, "rayleigh_pathloss_model"),
])
def test_validation_errors(override, fragment):
    with pytest.raises(ConfigError, match=fragment):
        from_dict(override)


def test_config_error_is_value_error():
    assert issubclass(ConfigError, ValueError)


def test_from_dict_empty_gives_defaults():
    assert from_dict({}) == default_config()


def test_from_dict_nested_merge():
    cfg = from_dict({"array": {"n_vertical": 4}, "tau": 1.0,
                     "precoders": ["zf", "mmse"]})
    assert cfg.array.n_vertical == 4
    assert cfg.array.n_horizontal == 8  # untouched sibling keeps its default
    assert cfg.tau == 1.0
    assert cfg.precoders == ("zf", "mmse")


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="bandwith_hz"):
        from_dict({"bandwith_hz": 1e6})
    with pytest.raises(ConfigError, match="array"):
        from_dict({"array": {"rows": 4}})
    with pytest.raises(ConfigError, match="nyu_pathloss"):
        from_dict({"channel_params": {"nyu_pathloss": {"los_intercept": 60.0}}})


def test_from_dict_type_errors_are_config_errors():
    with pytest.raises(ConfigError):
        from_dict({"precoders": "mf"})
    with pytest.raises(ConfigError):
        from_dict({"array": 7})


def test_dict_round_trip():
    cfg = from_dict({"tau": 0.9, "channel_model": "uma",
                     "channel_params": {"uma_clusters": {"power_decay": 3.0}}})
    assert from_dict(to_dict(cfg)) == cfg


def test_file_round_trip(tmp_path):
    cfg = from_dict({"drops": 17, "master_seed": 99})
    path = tmp_path / "scenario.json"
    save_config(cfg, path)
    assert load_config(path) == cfg
    # the on-disk form is plain JSON
    raw = json.loads(path.read_text())
    assert raw["drops"] == 17


def test_load_config_failure_modes(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="JSON"):
        load_config(bad)


def test_validate_accepts_defaults():
    validate(default_config())  # must not raise


def test_describe_keys_covers_nested_leaves():
    rows = dict(describe_keys())
    assert rows["bandwidth_hz"] == 1e9
    assert rows["array.n_vertical"] == 8
    assert rows["channel_params.nyu_pathloss.los_intercept_db"] == 61.4
    assert rows["channel_params.uma_clusters.power_decay"] == 4.0
    assert "array" not in rows  # only leaves are listed


def test_scenario_config_is_immutable():
    cfg = default_config()
    with pytest.raises(Exception):
        cfg.tau = 0.5
