"""Physical constants, the system parameter record and its text config format.

Everything is stored in SI base units. The config reader accepts the mixed
units used in the device literature (cm^2/Vs, eV^-1 cm^-3, nm, relative
permittivity, ...) and converts at the boundary.

Config files are flat ``section.field = value [unit]`` lines; ``#`` starts a
comment. Example::

    channel.d = 150 um
    transducer.mu_p = 500 cm2/Vs
    noise.N_ot = 1e16 1/(eV*cm3)
"""
from __future__ import annotations

import dataclasses
import hashlib
import math
import re
import warnings
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from scipy import constants as _sc


@dataclass(frozen=True)
class PhysicalConstants:
    q: float = _sc.e
    k_B: float = _sc.k
    N_A: float = _sc.N_A
    eps0: float = _sc.epsilon_0


CONST = PhysicalConstants()

# Values the device parameter set leaves unspecified.
ASSUMED_D = 1e-10
ASSUMED_L_R = 1e-6

ONE_YEAR_S = math.pi * 1e7


@dataclass(frozen=True)
class ChannelParams:
    d: float = 250e-6
    D: float = ASSUMED_D
    Ntx_min: float = 1e8
    Ntx_max: float = 1e9


@dataclass(frozen=True)
class ReceptorParams:
    k1: float = 2e-18
    k_m1: float = 10.0
    rho_SR: float = 4e16
    l_SR: float = 2e-9
    Ne: float = 3.0

    @property
    def K_D(self) -> float:
        """Dissociation constant k_m1/k1 in 1/m^3."""
        return self.k_m1 / self.k1


@dataclass(frozen=True)
class TransducerParams:
    r_R: float = 10e-9
    l_R: float = ASSUMED_L_R
    t_ox: float = 2e-9
    eps_ox: float = 3.9 * CONST.eps0
    eps_Si: float = 11.68 * CONST.eps0
    eps_M: float = 78.0 * CONST.eps0
    c_ion: float = 30.0
    p: float = 1e24
    mu_p: float = 0.05
    V_SD: float = 0.1
    V_SG: float = 0.4
    V_TH: float = 0.0
    T: float = 300.0


@dataclass(frozen=True)
class NoiseParams:
    lambda_tun: float = 0.05e-9
    N_ot: float = 1e16 * 1e6 / CONST.q
    alpha_s: float = 1.9e14
    T_obs: float = ONE_YEAR_S
    f_H: float = 1.0
    flatband_literal: bool = True


@dataclass(frozen=True)
class SystemParams:
    channel: ChannelParams = field(default_factory=ChannelParams)
    receptor: ReceptorParams = field(default_factory=ReceptorParams)
    transducer: TransducerParams = field(default_factory=TransducerParams)
    noise: NoiseParams = field(default_factory=NoiseParams)

    @property
    def n_receptors(self) -> float:
        """Receptor count on the nanowire's top surface, rho_SR * pi r_R * l_R."""
        t = self.transducer
        return self.receptor.rho_SR * math.pi * t.r_R * t.l_R

    def with_values(self, **dotted: float) -> "SystemParams":
        """Return a copy with ``section__field`` or ``"section.field"`` keys replaced.

        >>> default_params().with_values(**{"channel.d": 1e-4}).channel.d
        0.0001
        """
        out = self
        for key, value in dotted.items():
            section, name = _split_key(key.replace("__", "."))
            sub = replace(getattr(out, section), **{name: value})
            out = replace(out, **{section: sub})
        return out

    def get(self, key: str):
        section, name = _split_key(key)
        return getattr(getattr(self, section), name)

    def items(self):
        """Yield ``("section.field", value)`` pairs in declaration order."""
        for sec in fields(self):
            sub = getattr(self, sec.name)
            for f in fields(sub):
                yield f"{sec.name}.{f.name}", getattr(sub, f.name)

    def digest(self) -> str:
        """Short stable hash of the fully resolved parameter set."""
        blob = "\n".join(f"{k}={v!r}" for k, v in self.items())
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def default_params() -> SystemParams:
    """Reference device defaults in SI units (D and l_R are assumed values)."""
    return SystemParams()


SECTIONS = {f.name for f in fields(SystemParams)}


def _split_key(key: str) -> tuple[str, str]:
    section, _, name = key.partition(".")
    if section not in SECTIONS:
        raise KeyError(f"unknown parameter section in {key!r}")
    sub = type(getattr(default_params(), section))
    if name not in {f.name for f in fields(sub)}:
        raise KeyError(f"unknown parameter {key!r}")
    return section, name


PARAM_KEYS = [k for k, _ in default_params().items()]


# ---------------------------------------------------------------------------
# validation

def validate(params: SystemParams) -> list[str]:
    """List every violated invariant; an empty list means ``params`` is usable."""
    out = []
    ch, rc, tr, nz = params.channel, params.receptor, params.transducer, params.noise

    def positive(prefix, obj, names):
        for name in names:
            v = getattr(obj, name)
            if not (math.isfinite(v) and v > 0):
                out.append(f"{prefix}.{name} must be > 0")

    positive("channel", ch, ["d", "D", "Ntx_min", "Ntx_max"])
    if not ch.Ntx_min < ch.Ntx_max:
        out.append("Ntx_min < Ntx_max violated")
    positive("receptor", rc, ["k1", "k_m1", "rho_SR", "l_SR", "Ne"])
    positive("transducer", tr, ["r_R", "l_R", "t_ox", "eps_ox", "eps_Si", "eps_M",
                                "c_ion", "p", "mu_p", "V_SD", "V_SG", "T"])
    if not tr.V_SG - abs(tr.V_TH) > 0:
        out.append("transducer.V_SG - |V_TH| > 0 violated (linear region)")
    positive("noise", nz, ["lambda_tun", "N_ot", "alpha_s", "T_obs", "f_H"])
    if nz.T_obs > 0 and not nz.f_H > 1.0 / nz.T_obs:
        out.append("noise.f_H > 1/T_obs violated")
    if not out and params.n_receptors < 1:
        out.append("receptor count N_r >= 1 violated")
    return out


def advisories(params: SystemParams) -> list[str]:
    """Non-fatal remarks: assumed defaults in use, small receptor counts."""
    notes = []
    if params.channel.D == ASSUMED_D:
        notes.append(f"channel.D = {ASSUMED_D:g} m^2/s is an assumed value (not a measured device value)")
    if params.transducer.l_R == ASSUMED_L_R:
        notes.append(f"transducer.l_R = {ASSUMED_L_R:g} m is an assumed value (not a measured device value)")
    if params.n_receptors < 1000:
        notes.append(f"N_r = {params.n_receptors:.1f} < 1000: Gaussian approximation is loose")
    return notes


class GaussianRegimeWarning(UserWarning):
    pass


def check(params: SystemParams) -> SystemParams:
    """Raise ``ValueError`` on violations, warn below 1000 receptors."""
    bad = validate(params)
    if bad:
        raise ValueError("; ".join(bad))
    if params.n_receptors < 1000:
        warnings.warn(f"N_r = {params.n_receptors:.1f} < 1000", GaussianRegimeWarning,
                      stacklevel=2)
    return params


# ---------------------------------------------------------------------------
# units

_LEN = {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9}
_PERM = {"F/m": 1.0, "eps0": CONST.eps0}
_EV = CONST.q

UNITS: dict[str, dict[str, float]] = {
    "channel.d": _LEN,
    "channel.D": {"m2/s": 1.0, "cm2/s": 1e-4, "um2/s": 1e-12},
    "channel.Ntx_min": {"1": 1.0},
    "channel.Ntx_max": {"1": 1.0},
    "receptor.k1": {"m3/s": 1.0},
    "receptor.k_m1": {"1/s": 1.0},
    "receptor.rho_SR": {"1/m2": 1.0, "1/cm2": 1e4, "1/um2": 1e12},
    "receptor.l_SR": _LEN,
    "receptor.Ne": {"1": 1.0},
    "transducer.r_R": _LEN,
    "transducer.l_R": _LEN,
    "transducer.t_ox": _LEN,
    "transducer.eps_ox": _PERM,
    "transducer.eps_Si": _PERM,
    "transducer.eps_M": _PERM,
    "transducer.c_ion": {"mol/m3": 1.0, "mM": 1.0, "M": 1e3},
    "transducer.p": {"1/m3": 1.0, "1/cm3": 1e6},
    "transducer.mu_p": {"m2/Vs": 1.0, "cm2/Vs": 1e-4},
    "transducer.V_SD": {"V": 1.0, "mV": 1e-3},
    "transducer.V_SG": {"V": 1.0, "mV": 1e-3},
    "transducer.V_TH": {"V": 1.0, "mV": 1e-3},
    "transducer.T": {"K": 1.0},
    "noise.lambda_tun": _LEN,
    "noise.N_ot": {"1/(J*m3)": 1.0, "1/(eV*cm3)": 1e6 / _EV},
    "noise.alpha_s": {"Vs/C": 1.0},
    "noise.T_obs": {"s": 1.0},
    "noise.f_H": {"Hz": 1.0},
    "noise.flatband_literal": {},
}

# Units the device literature quotes; used in human-facing reports.
DISPLAY_UNITS = {
    "channel.d": "um", "channel.D": "m2/s", "receptor.l_SR": "nm",
    "transducer.r_R": "nm", "transducer.l_R": "um", "transducer.t_ox": "nm",
    "transducer.eps_ox": "eps0", "transducer.eps_Si": "eps0", "transducer.eps_M": "eps0",
    "transducer.p": "1/cm3", "transducer.mu_p": "cm2/Vs", "noise.lambda_tun": "nm",
    "noise.N_ot": "1/(eV*cm3)",
}


def si_unit(key: str) -> str:
    """Name of the SI unit a key is stored in (first entry of its table)."""
    table = UNITS[key]
    return next(iter(table)) if table else "bool"


_ALIASES = {
    "eV-1cm-3": "1/(eV*cm3)", "/eV/cm3": "1/(eV*cm3)", "1/eV/cm3": "1/(eV*cm3)",
    "cm-3": "1/cm3", "m-3": "1/m3", "cm-2": "1/cm2", "m-2": "1/m2", "s-1": "1/s",
    "cm2/V/s": "cm2/Vs", "m2/V/s": "m2/Vs", "V*s/C": "Vs/C", "mol/L": "M",
}


def _norm_unit(unit: str) -> str:
    u = unit.replace(" ", "").replace("^", "")
    return _ALIASES.get(u, u)


def to_si(key: str, value: float, unit: str | None) -> float:
    if not unit:
        return float(value)
    table = UNITS[key]
    u = _norm_unit(unit)
    if u not in table:
        raise UnitError(f"{key}: unit {unit!r} not accepted (use one of {sorted(table)})")
    return float(value) * table[u]


def from_si(key: str, value: float, unit: str) -> float:
    table = UNITS[key]
    u = _norm_unit(unit)
    if u not in table:
        raise UnitError(f"{key}: unit {unit!r} not accepted (use one of {sorted(table)})")
    return float(value) / table[u]


# ---------------------------------------------------------------------------
# config files

class ConfigError(ValueError):
    """Malformed config; message carries ``path:line`` when known."""


class UnitError(ConfigError):
    pass


_LINE = re.compile(r"^\s*([A-Za-z_][\w.]*)\s*=\s*(\S+)\s*(.*?)\s*$")


def parse_assignment(text: str, where: str = "<override>") -> tuple[str, object]:
    """Parse one ``key = value [unit]`` assignment into ``(key, SI value)``."""
    m = _LINE.match(text)
    if not m:
        raise ConfigError(f"{where}: expected 'section.field = value [unit]', got {text.strip()!r}")
    key, raw, unit = m.groups()
    if key not in UNITS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    if key == "noise.flatband_literal":
        low = raw.lower()
        if low not in ("true", "false", "1", "0", "yes", "no") or unit:
            raise ConfigError(f"{where}: {key} expects true/false, got {raw!r}")
        return key, low in ("true", "1", "yes")
    try:
        number = float(raw)
    except ValueError:
        raise ConfigError(f"{where}: {key}: cannot parse number {raw!r}") from None
    try:
        return key, to_si(key, number, unit)
    except UnitError as exc:
        raise UnitError(f"{where}: {exc}") from None


def parse_config(text: str, base: SystemParams | None = None,
                 source: str = "<string>") -> SystemParams:
    params = base if base is not None else default_params()
    updates = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        key, value = parse_assignment(body, f"{source}:{lineno}")
        updates[key] = value
    return params.with_values(**updates)


def load_config(path, base: SystemParams | None = None) -> SystemParams:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), base, str(path))


def render_config(params: SystemParams, commented: bool = True) -> str:
    """Emit every parameter in SI with its unit as a trailing comment."""
    lines = []
    if commented:
        lines += ["# mcbiofet parameters, SI units.",
                  "# A unit may follow the number, e.g. 'transducer.mu_p = 500 cm2/Vs'.", ""]
    section = None
    for key, value in params.items():
        sec = key.split(".")[0]
        if commented and section is not None and sec != section:
            lines.append("")
        section = sec
        if isinstance(value, bool):
            text = "true" if value else "false"
        else:
            text = repr(float(value))
        unit = si_unit(key)
        line = f"{key} = {text}"
        if commented:
            extra = ""
            if key in DISPLAY_UNITS:
                disp = DISPLAY_UNITS[key]
                extra = f"  (= {from_si(key, value, disp):.6g} {disp})"
            if key in ("channel.D", "transducer.l_R"):
                extra += "  assumed, not a measured device value"
            line = f"{line:<44}# {unit}{extra}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def save_config(params: SystemParams, path) -> None:
    Path(path).write_text(render_config(params), encoding="utf-8")


def asdict(params: SystemParams) -> dict:
    return dataclasses.asdict(params)
