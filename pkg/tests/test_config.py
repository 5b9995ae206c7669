import pytest

from seqaug.config import ALIASES, PRESETS, format_config, get_preset, load_config, parse_config
from seqaug.core import ConfigError, LengthPerturbConfig, SmoothingConfig


def test_lenpb_only_preset_holds_best_swb_row():
    cfg = get_preset("swb-lenpb-only")
    assert cfg.lenpb == LengthPerturbConfig(p_s=0.7, r_s=0.1, T_s=7, p_p=0.7, r_p=0.1, T_p=3)
    assert cfg.schedule.lenpb == (1, 25) and cfg.schedule.nbestls is None


def test_combo_presets():
    swb = get_preset("swb-combo")
    assert swb.smoothing == SmoothingConfig(0.1, 20)
    assert swb.lenpb == LengthPerturbConfig(0.5, 0.1, 7, 0.5, 0.1, 3)
    assert (swb.schedule.nbestls, swb.schedule.lenpb) == ((1, 15), (16, 30))
    assert "2x" in swb.note
    jpn = get_preset("jpn-combo")
    assert jpn.smoothing == SmoothingConfig(0.2, 30)
    assert jpn.lenpb == LengthPerturbConfig(0.4, 0.1, 3, 0.4, 0.1, 5)
    assert (jpn.schedule.nbestls, jpn.schedule.lenpb) == ((1, 15), (16, 25))


def test_every_table_row_has_a_preset():
    rows = [k for k in PRESETS if k not in ALIASES]
    assert len(rows) == 34
    assert sum(k.startswith("swb-") for k in rows) == 18
    assert PRESETS["jpn-both-p0.6-r0.2-ts3-tp5"].lenpb.r_s == 0.2
    assert PRESETS["swb-ins-p0.6-r0.05-t5"].lenpb == LengthPerturbConfig(p_p=0.6, r_p=0.05, T_p=5)


def test_unknown_preset():
    with pytest.raises(ConfigError):
        get_preset("nope")


def test_parse_overrides_preset():
    cfg = parse_config("preset = swb-combo  # start here\n\nepsilon = 0.3\nlenpb_epochs = none\n")
    assert cfg.smoothing == SmoothingConfig(0.3, 20)
    assert cfg.schedule.lenpb is None and cfg.schedule.nbestls == (1, 15)


def test_parse_from_scratch():
    cfg = parse_config("p_s=1\nr_s=0.2\nT_s=4\nmin_out_frames=3\nK=5\nnbestls_epochs=2-9\n")
    assert cfg.lenpb == LengthPerturbConfig(p_s=1.0, r_s=0.2, T_s=4, min_out_frames=3)
    assert cfg.smoothing.K == 5 and cfg.schedule.nbestls == (2, 9)


@pytest.mark.parametrize("text", [
    "p_s = 1.5", "T_s = 2.5", "K = 0", "foo = 1", "p_s", "p_s = ", "p_s=0.1\np_s=0.2",
    "lenpb_epochs = 5", "lenpb_epochs = 0-3", "lenpb_epochs = 9-3", "epsilon = abc",
    "preset = missing", "min_out_frames = 0",
])
def test_invalid_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_format_round_trip(name):
    cfg = PRESETS[name]
    back = parse_config(format_config(cfg))
    assert (back.lenpb, back.smoothing, back.schedule) == (cfg.lenpb, cfg.smoothing, cfg.schedule)


def test_load_config(tmp_path):
    path = tmp_path / "c.conf"
    path.write_text("preset = jpn-lenpb-only\n")
    assert load_config(path).lenpb == LengthPerturbConfig(p_s=0.5, r_s=0.1, T_s=3)
