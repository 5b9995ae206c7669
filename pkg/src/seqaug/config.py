"""Named presets and the key=value config file.

Config file syntax: one ``key = value`` per line, ``#`` starts a comment.
``preset`` (if given) loads a named preset first; the remaining keys
override it field by field. Keys:

=================  ==========================================
preset             name from :data:`PRESETS`
p_s, r_s, T_s      drop probability, fraction, max run
p_p, r_p, T_p      insert probability, fraction, max run
min_out_frames     shortest output a drop may leave (>= 1)
epsilon, K         n-best replacement probability, list depth
lenpb_epochs       ``start-end`` (inclusive) or ``none``
nbestls_epochs     ``start-end`` (inclusive) or ``none``
=================  ==========================================
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

from .core import ConfigError, LengthPerturbConfig, SmoothingConfig
from .schedule import ScheduleSpec


@dataclass(frozen=True)
class AugmentConfig:
    lenpb: LengthPerturbConfig = field(default_factory=LengthPerturbConfig)
    smoothing: SmoothingConfig = field(default_factory=SmoothingConfig)
    schedule: ScheduleSpec = field(default_factory=ScheduleSpec)
    note: str = ""


SWB_LIFT = ScheduleSpec(lenpb=(1, 25), nbestls=None)
SWB_LS_LIFT = ScheduleSpec(lenpb=None, nbestls=(1, 25))
SWB_COMBO = ScheduleSpec(lenpb=(16, 30), nbestls=(1, 15))
JPN_LIFT = SWB_LIFT
JPN_LS_LIFT = SWB_LS_LIFT
JPN_COMBO = ScheduleSpec(lenpb=(16, 25), nbestls=(1, 15))

_BOOST_NOTE = ("trainer continues 5 more epochs after lifting with the learning rate "
               "boosted 2x; not part of augmentation")


def _num(x):
    return f"{x:g}"


def _ins(ds, p, r, t, sched):
    return (f"{ds}-ins-p{_num(p)}-r{_num(r)}-t{t}",
            AugmentConfig(LengthPerturbConfig(p_p=p, r_p=r, T_p=t), schedule=sched))


def _drop(ds, p, r, t, sched):
    return (f"{ds}-drop-p{_num(p)}-r{_num(r)}-t{t}",
            AugmentConfig(LengthPerturbConfig(p_s=p, r_s=r, T_s=t), schedule=sched))


def _both(ds, p, r, ts, tp, sched):
    return (f"{ds}-both-p{_num(p)}-r{_num(r)}-ts{ts}-tp{tp}",
            AugmentConfig(LengthPerturbConfig(p, r, ts, p, r, tp), schedule=sched))


def _nbest(ds, eps, k, sched):
    return (f"{ds}-nbest-e{_num(eps)}-k{k}",
            AugmentConfig(smoothing=SmoothingConfig(eps, k), schedule=sched))


def _combo(ds, eps, k, p, r, ts, tp, sched, note=""):
    return (f"{ds}-combo-e{_num(eps)}-k{k}-p{_num(p)}-r{_num(r)}-ts{ts}-tp{tp}",
            AugmentConfig(LengthPerturbConfig(p, r, ts, p, r, tp), SmoothingConfig(eps, k),
                          sched, note))


_ROWS = [
    # SWB300 length perturbation, applied epochs 1-25
    _ins("swb", 0.6, 0.05, 5, SWB_LIFT),
    _ins("swb", 0.6, 0.1, 3, SWB_LIFT),
    _ins("swb", 0.6, 0.1, 7, SWB_LIFT),
    _ins("swb", 0.7, 0.1, 5, SWB_LIFT),
    _drop("swb", 0.7, 0.1, 5, SWB_LIFT),
    _drop("swb", 0.7, 0.1, 7, SWB_LIFT),
    _drop("swb", 0.8, 0.1, 7, SWB_LIFT),
    _drop("swb", 0.7, 0.1, 9, SWB_LIFT),
    _both("swb", 0.6, 0.1, 7, 3, SWB_LIFT),
    _both("swb", 0.7, 0.1, 7, 3, SWB_LIFT),
    _both("swb", 0.8, 0.1, 7, 3, SWB_LIFT),
    # SWB300 n-best smoothing, applied epochs 1-25
    _nbest("swb", 0.1, 20, SWB_LS_LIFT),
    _nbest("swb", 0.2, 20, SWB_LS_LIFT),
    _nbest("swb", 0.1, 30, SWB_LS_LIFT),
    _nbest("swb", 0.2, 30, SWB_LS_LIFT),
    # SWB300 combination: smoothing 1-15, perturbation 16-30
    _combo("swb", 0.1, 20, 0.5, 0.1, 5, 5, SWB_COMBO, _BOOST_NOTE),
    _combo("swb", 0.1, 20, 0.6, 0.1, 5, 5, SWB_COMBO, _BOOST_NOTE),
    _combo("swb", 0.1, 20, 0.5, 0.1, 7, 3, SWB_COMBO, _BOOST_NOTE),
    # JPN500 length perturbation, applied epochs 1-25
    _ins("jpn", 0.6, 0.1, 3, JPN_LIFT),
    _ins("jpn", 0.6, 0.1, 5, JPN_LIFT),
    _ins("jpn", 0.7, 0.1, 5, JPN_LIFT),
    _drop("jpn", 0.5, 0.1, 3, JPN_LIFT),
    _drop("jpn", 0.6, 0.1, 3, JPN_LIFT),
    _drop("jpn", 0.5, 0.1, 5, JPN_LIFT),
    _both("jpn", 0.6, 0.1, 3, 3, JPN_LIFT),
    _both("jpn", 0.6, 0.1, 3, 5, JPN_LIFT),
    _both("jpn", 0.6, 0.2, 3, 5, JPN_LIFT),
    # JPN500 n-best smoothing, applied epochs 1-25
    _nbest("jpn", 0.2, 10, JPN_LS_LIFT),
    _nbest("jpn", 0.2, 20, JPN_LS_LIFT),
    _nbest("jpn", 0.2, 30, JPN_LS_LIFT),
    _nbest("jpn", 0.3, 30, JPN_LS_LIFT),
    # JPN500 combination: smoothing 1-15, perturbation 16-25
    _combo("jpn", 0.2, 30, 0.5, 0.1, 3, 5, JPN_COMBO),
    _combo("jpn", 0.2, 30, 0.4, 0.1, 3, 5, JPN_COMBO),
    _combo("jpn", 0.2, 30, 0.3, 0.1, 3, 5, JPN_COMBO),
]

PRESETS: dict[str, AugmentConfig] = dict(_ROWS)

# best row of each experiment under a short name
ALIASES = {
    "swb-lenpb-only": "swb-both-p0.7-r0.1-ts7-tp3",
    "swb-nbestls-only": "swb-nbest-e0.1-k20",
    "swb-combo": "swb-combo-e0.1-k20-p0.5-r0.1-ts7-tp3",
    "jpn-lenpb-only": "jpn-drop-p0.5-r0.1-t3",
    "jpn-nbestls-only": "jpn-nbest-e0.2-k30",
    "jpn-combo": "jpn-combo-e0.2-k30-p0.4-r0.1-ts3-tp5",
}
PRESETS.update({alias: PRESETS[target] for alias, target in ALIASES.items()})


def get_preset(name: str) -> AugmentConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}") from None


_LP_KEYS = {f.name for f in fields(LengthPerturbConfig)}
_SM_KEYS = {f.name for f in fields(SmoothingConfig)}
_INT_KEYS = {"T_s", "T_p", "min_out_frames", "K"}


def _parse_range(key, text):
    if text.lower() == "none":
        return None
    start, sep, end = text.partition("-")
    try:
        if not sep:
            raise ValueError
        return (int(start), int(end))
    except ValueError:
        raise ConfigError(f"{key}: expected 'start-end' or 'none', got {text!r}") from None


def parse_config(text: str) -> AugmentConfig:
    """Parse the key=value format; raises :class:`ConfigError` on any problem."""
    items: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"config line {lineno}: expected key = value")
        if key in items:
            raise ConfigError(f"config line {lineno}: duplicate key {key!r}")
        items[key] = value

    cfg = get_preset(items.pop("preset")) if "preset" in items else AugmentConfig()
    lp, sm, sched = {}, {}, {}
    for key, value in items.items():
        if key in ("lenpb_epochs", "nbestls_epochs"):
            sched[key.split("_")[0]] = _parse_range(key, value)
            continue
        if key not in _LP_KEYS and key not in _SM_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            number = int(value) if key in _INT_KEYS else float(value)
        except ValueError:
            raise ConfigError(f"{key}: malformed number {value!r}") from None
        (lp if key in _LP_KEYS else sm)[key] = number
    return AugmentConfig(
        replace(cfg.lenpb, **lp),
        replace(cfg.smoothing, **sm),
        replace(cfg.schedule, **sched),
        cfg.note,
    )


def load_config(path) -> AugmentConfig:
    with open(path, encoding="utf-8") as f:
        return parse_config(f.read())


def format_config(cfg: AugmentConfig) -> str:
    def rng(r):
        return "none" if r is None else f"{r[0]}-{r[1]}"

    lp, sm = cfg.lenpb, cfg.smoothing
    lines = [f"{k} = {getattr(lp, k)!r}" for k in ("p_s", "r_s", "T_s", "p_p", "r_p", "T_p",
                                                    "min_out_frames")]
    lines += [f"epsilon = {sm.epsilon!r}", f"K = {sm.K}",
              f"lenpb_epochs = {rng(cfg.schedule.lenpb)}",
              f"nbestls_epochs = {rng(cfg.schedule.nbestls)}"]
    return "\n".join(lines) + "\n"
