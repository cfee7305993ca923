"""YAML config files mirroring :class:`Scenario`, :class:`SweepSpec` and :class:`DriverConfig`.

Every key is optional; omitted keys keep the defaults. Example::

    scenario:
      num_users: 2
      snr_db: 30
      seed: 7
      surface: {m_x: 10, m_y: 10, num_feeds: 6}
      region: {kind: rectangle, z_min: 10, z_max: 50}
    sweep:
      snr_db: [0, 10, 20, 30]
      rhs: [8x8, 10x10]
      users: [2, 4]
      realizations: 20
      mode: both
    optimizer:
      eps_tol: 1.0e-4
      holo: {eta: 0.01, epsilon: 1.0e-5}
      position: {mu_q: 2}
"""

from __future__ import annotations

from dataclasses import fields, replace

import yaml

from .alternating import DriverConfig
from .geometry import SurfaceConfig
from .holographic import HoloOptConfig
from .position import PositionOptConfig, Region
from .scenario import Scenario
from .sweep import SweepSpec, parse_rhs

TUPLE_FIELDS = {"user_area", "q0", "center"}


class ConfigError(ValueError):
    pass


def _build(cls, data, where):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"section {where!r} must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown keys in {where!r}: {sorted(unknown)}")
    kwargs = {k: tuple(v) if k in TUPLE_FIELDS and v is not None else v for k, v in data.items()}
    return cls(**kwargs)


def scenario_from_dict(data: dict | None) -> Scenario:
    data = dict(data or {})
    data["surface"] = _build(SurfaceConfig, data.pop("surface", None), "scenario.surface")
    data["region"] = _build(Region, data.pop("region", None), "scenario.region")
    users = data.get("users")
    if users is not None:
        data["users"] = tuple(tuple(float(c) for c in u) for u in users)
        data.setdefault("num_users", len(users))
    return _build(Scenario, data, "scenario")


def sweep_from_dict(data: dict | None, scenario: Scenario | None = None) -> SweepSpec:
    """Sweep axes; omitted axes fall back to the single value in ``scenario``."""
    data = dict(data or {})
    allowed = {"snr_db", "rhs", "users", "realizations", "mode"}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in 'sweep': {sorted(unknown)}")
    kwargs = {}
    if scenario is not None:
        kwargs = {"snr_db_list": (scenario.snr_db,),
                  "m_list": ((scenario.surface.m_x, scenario.surface.m_y),),
                  "d_list": (scenario.num_users,)}
    if "snr_db" in data:
        kwargs["snr_db_list"] = tuple(float(s) for s in data["snr_db"])
    if "rhs" in data:
        kwargs["m_list"] = tuple(parse_rhs(str(r)) for r in data["rhs"])
    if "users" in data:
        kwargs["d_list"] = tuple(int(d) for d in data["users"])
    for key in ("realizations", "mode"):
        if key in data:
            kwargs[key] = data[key]
    return SweepSpec(**kwargs)


def driver_from_dict(data: dict | None) -> DriverConfig:
    data = dict(data or {})
    holo = _build(HoloOptConfig, data.pop("holo", None), "optimizer.holo")
    pos = _build(PositionOptConfig, data.pop("position", None), "optimizer.position")
    base = _build(DriverConfig, data, "optimizer")
    return replace(base, holo=holo, pos=pos)


def load_config(path: str | None):
    """Read a config file; returns ``(scenario, sweep, driver)``."""
    raw = {}
    if path is not None:
        with open(path) as fh:
            raw = yaml.safe_load(fh) or {}
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")
    unknown = set(raw) - {"scenario", "sweep", "optimizer"}
    if unknown:
        raise ConfigError(f"unknown top-level sections: {sorted(unknown)}")
    scenario = scenario_from_dict(raw.get("scenario"))
    return scenario, sweep_from_dict(raw.get("sweep"), scenario), driver_from_dict(raw.get("optimizer"))
