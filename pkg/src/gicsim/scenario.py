"""Declarative scenario files: parsing, validation, serialization, building.

Scenario files are TOML with sections: channel (gains as [magnitude,
phase-degrees] pairs), codes (alist paths or inline PEG specs), users
(streams with roles/constellations/power), receivers, run, and region.
Unknown keys are rejected with their full path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from .channel import ChannelConfig, gain_from_polar
from .harness import Scenario
from .ldpc import DegreeDistribution, construct_peg, derive_encoder, parse_alist
from .receiver import build_receiver_plan
from .signaling import CONSTELLATIONS
from .transmitter import StreamConfig, UserPlan, power_shares


class SchemaError(ValueError):
    """Scenario file violates the schema; message carries the key path."""


@dataclass
class RegionParams:
    splits: list = field(default_factory=lambda: [0.0, 0.05, 0.1, 0.16, 0.25,
                                                  0.5, 1.0, 2.0, 5.0, 10.0])
    samples: int = 100_000
    operating_point: tuple | None = None


@dataclass
class LoadedScenario:
    scenario: Scenario
    region: RegionParams
    workers: int
    data: dict


def _require(table: dict, key: str, path: str):
    if key not in table:
        raise SchemaError(f"{path}.{key}: missing required key")
    return table[key]


def _check_keys(table: dict, allowed, path: str):
    for key in table:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}: unknown key")


def _as_gain(value, path: str) -> complex:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(v, (int, float)) for v in value)):
        raise SchemaError(f"{path}: expected [magnitude, phase_degrees]")
    return gain_from_polar(float(value[0]), float(value[1]))


def _as_number(value, path: str, minimum=None) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise SchemaError(f"{path}: expected a number")
    v = float(value)
    if minimum is not None and v < minimum:
        raise SchemaError(f"{path}: must be >= {minimum}")
    return v


def _as_int(value, path: str, minimum=None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(f"{path}: expected an integer")
    if minimum is not None and value < minimum:
        raise SchemaError(f"{path}: must be >= {minimum}")
    return value


def parse_scenario_text(text: str) -> dict:
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SchemaError(f"TOML parse error: {exc}") from None


_PEG_CACHE: dict = {}


def _build_code(name: str, spec: dict, base_dir: Path):
    path = f"codes.{name}"
    _check_keys(spec, {"alist", "peg_n", "peg_regular", "peg_var", "peg_chk",
                       "peg_seed"}, path)
    if "alist" in spec:
        file_path = base_dir / str(spec["alist"])
        try:
            text = file_path.read_text()
        except OSError as exc:
            raise FileNotFoundError(f"{path}.alist: cannot read {file_path}: "
                                    f"{exc}") from None
        return derive_encoder(parse_alist(text))
    if "peg_n" not in spec:
        raise SchemaError(f"{path}: needs either alist or peg_n")
    n = _as_int(spec["peg_n"], f"{path}.peg_n", minimum=2)
    seed = _as_int(spec.get("peg_seed", 0), f"{path}.peg_seed", minimum=0)
    if "peg_regular" in spec:
        pair = spec["peg_regular"]
        if not (isinstance(pair, list) and len(pair) == 2):
            raise SchemaError(f"{path}.peg_regular: expected [var_deg, chk_deg]")
        dist = DegreeDistribution.regular(int(pair[0]), int(pair[1]))
    elif "peg_var" in spec and "peg_chk" in spec:
        dist = DegreeDistribution(
            tuple((int(d), float(f)) for d, f in spec["peg_var"]),
            tuple((int(d), float(f)) for d, f in spec["peg_chk"]))
    else:
        raise SchemaError(f"{path}: peg spec needs peg_regular or peg_var+peg_chk")
    key = (n, dist.var_fractions, dist.chk_fractions, seed)
    if key not in _PEG_CACHE:
        _PEG_CACHE[key] = derive_encoder(construct_peg(n, dist, seed).matrix)
    return _PEG_CACHE[key]


def _build_streams(user: int, table: dict, codes: dict, path: str):
    _check_keys(table, {"streams", "pu_over_pw"}, path)
    entries = _require(table, "streams", path)
    if not isinstance(entries, list) or not entries:
        raise SchemaError(f"{path}.streams: expected a non-empty array of tables")
    shares = {}
    if "pu_over_pw" in table:
        ratio = _as_number(table["pu_over_pw"], f"{path}.pu_over_pw", minimum=0.0)
        pw, pu = power_shares(ratio)
        shares = {"public": pw, "private": pu}
    streams = []
    for i, entry in enumerate(entries):
        epath = f"{path}.streams[{i}]"
        _check_keys(entry, {"role", "code", "constellation", "power_share"}, epath)
        role = _require(entry, "role", epath)
        code_name = _require(entry, "code", epath)
        if code_name not in codes:
            raise SchemaError(f"{epath}.code: unknown code {code_name!r}")
        const_name = str(_require(entry, "constellation", epath)).lower()
        if const_name not in CONSTELLATIONS:
            raise SchemaError(f"{epath}.constellation: expected one of "
                              f"{sorted(CONSTELLATIONS)}")
        if "power_share" in entry:
            share = _as_number(entry["power_share"], f"{epath}.power_share")
        elif role in shares:
            share = shares[role]
        else:
            raise SchemaError(f"{epath}: power_share missing and no pu_over_pw")
        streams.append(StreamConfig(user, role, codes[code_name],
                                    CONSTELLATIONS[const_name], share))
    return UserPlan(user, tuple(streams))


def build_scenario(data: dict, base_dir: Path | str = ".") -> LoadedScenario:
    base_dir = Path(base_dir)
    _check_keys(data, {"name", "channel", "codes", "users", "receivers",
                       "run", "region"}, "scenario")
    name = str(data.get("name", "scenario"))

    channel = _require(data, "channel", "scenario")
    _check_keys(channel, {"h11", "h12", "h21", "h22", "n0", "p1", "p2"}, "channel")
    cfg = ChannelConfig(
        h11=_as_gain(_require(channel, "h11", "channel"), "channel.h11"),
        h12=_as_gain(_require(channel, "h12", "channel"), "channel.h12"),
        h21=_as_gain(_require(channel, "h21", "channel"), "channel.h21"),
        h22=_as_gain(_require(channel, "h22", "channel"), "channel.h22"),
        n0=_as_number(channel.get("n0", 1.0), "channel.n0"),
        p1=_as_number(channel.get("p1", 1.0), "channel.p1"),
        p2=_as_number(channel.get("p2", 1.0), "channel.p2"),
    )

    code_specs = _require(data, "codes", "scenario")
    if not isinstance(code_specs, dict) or not code_specs:
        raise SchemaError("codes: expected at least one named code table")
    codes = {cname: _build_code(cname, spec, base_dir)
             for cname, spec in code_specs.items()}

    users = _require(data, "users", "scenario")
    _check_keys(users, {"1", "2"}, "users")
    plans = {}
    for u in (1, 2):
        table = users.get(str(u))
        if table is None:
            raise SchemaError(f"users.{u}: missing")
        plans[u] = _build_streams(u, table, codes, f"users.{u}")

    run = data.get("run", {})
    _check_keys(run, {"bits", "seed", "workers", "min_error_events", "noise",
                      "outer_iterations", "max_bp_iters"}, "run")
    bits = _as_int(run.get("bits", 10_000_000), "run.bits", minimum=1)
    seed = _as_int(run.get("seed", 0), "run.seed", minimum=0)
    workers = _as_int(run.get("workers", 1), "run.workers", minimum=1)
    min_events = _as_int(run.get("min_error_events", 50),
                         "run.min_error_events", minimum=0)
    noise = run.get("noise", True)
    if not isinstance(noise, bool):
        raise SchemaError("run.noise: expected a boolean")
    outer = _as_int(run.get("outer_iterations", 2), "run.outer_iterations",
                    minimum=1)
    max_bp = _as_int(run.get("max_bp_iters", 100), "run.max_bp_iters", minimum=1)

    receivers = data.get("receivers", {})
    _check_keys(receivers, {"1", "2"}, "receivers")
    rplans = {}
    for r in (1, 2):
        table = receivers.get(str(r), {})
        _check_keys(table, {"order", "outer_iterations", "max_bp_iters"},
                    f"receivers.{r}")
        order = table.get("order", "auto")
        if order != "auto" and not (isinstance(order, list)
                                    and all(isinstance(o, str) for o in order)):
            raise SchemaError(f"receivers.{r}.order: expected \"auto\" or a "
                              "list of stream labels")
        rplans[r] = build_receiver_plan(
            r, plans, cfg, order=order,
            outer_iterations=_as_int(table.get("outer_iterations", outer),
                                     f"receivers.{r}.outer_iterations", minimum=1),
            max_bp_iters=_as_int(table.get("max_bp_iters", max_bp),
                                 f"receivers.{r}.max_bp_iters", minimum=1))

    region_table = data.get("region", {})
    _check_keys(region_table, {"splits", "samples", "operating_point"}, "region")
    region = RegionParams()
    if "splits" in region_table:
        splits = region_table["splits"]
        if not isinstance(splits, list) or not splits:
            raise SchemaError("region.splits: expected a non-empty list")
        region.splits = [_as_number(s, "region.splits", minimum=0.0) for s in splits]
    if "samples" in region_table:
        region.samples = _as_int(region_table["samples"], "region.samples",
                                 minimum=1000)
    if "operating_point" in region_table:
        op = region_table["operating_point"]
        if not (isinstance(op, list) and len(op) == 2):
            raise SchemaError("region.operating_point: expected [r1, r2]")
        region.operating_point = (float(op[0]), float(op[1]))
    if region.operating_point is None:
        region.operating_point = (float(plans[1].user_rate()),
                                  float(plans[2].user_rate()))

    scenario = Scenario(name, cfg, plans, rplans, target_bits=bits,
                        min_error_events=min_events, seed=seed, noise=noise)
    return LoadedScenario(scenario, region, workers, data)


def load_scenario(path) -> LoadedScenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read scenario {path}: {exc}") from None
    return build_scenario(parse_scenario_text(text), base_dir=path.parent)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not math.isfinite(value):
            raise SchemaError("cannot serialize non-finite number")
        return repr(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, list):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    raise SchemaError(f"cannot serialize value of type {type(value).__name__}")


def _emit_table(lines: list, table: dict, prefix: str):
    scalars = {k: v for k, v in table.items()
               if not isinstance(v, dict)
               and not (isinstance(v, list) and v and isinstance(v[0], dict))}
    subtables = {k: v for k, v in table.items() if isinstance(v, dict)}
    arrays = {k: v for k, v in table.items()
              if isinstance(v, list) and v and isinstance(v[0], dict)}
    for k, v in scalars.items():
        lines.append(f"{k} = {_format_value(v)}")
    for k, v in arrays.items():
        for entry in v:
            lines.append("")
            lines.append(f"[[{prefix}{k}]]")
            _emit_table(lines, entry, f"{prefix}{k}.")
    for k, v in subtables.items():
        lines.append("")
        lines.append(f"[{prefix}{k}]")
        _emit_table(lines, v, f"{prefix}{k}.")


def dump_scenario(data: dict) -> str:
    """Serialize the nested-dict form back to TOML.

    Covers the scenario schema's value types; parse(dump(parse(x))) is
    structurally identical to parse(x).
    """
    lines: list = []
    _emit_table(lines, data, "")
    while lines and lines[0] == "":
        lines.pop(0)
    return "\n".join(lines) + "\n"
