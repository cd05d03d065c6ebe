"""YAML run configuration with mandatory unit suffixes.

Every dimensionful value is written as "<number> <unit>" and converted
to the package's canonical units (MHz, us, T, rad). Bare numbers are
rejected for dimensionful keys, unknown keys are rejected everywhere,
and the echo serialization round-trips exactly.
"""
import math
from dataclasses import dataclass

import yaml

from .bayes import GaussianKnowledge, SchedulerConfig
from .circuit import Decoherence, ErrorModel, Ideal, RotationError
from .evolution import DissipationParams
from .protocol import RunConfig
from .spin_system import SystemParams

__all__ = ["ConfigError", "Settings", "load_config", "parse_config", "echo_config"]

_FREQ_MHZ = {"Hz": 1e-6, "kHz": 1e-3, "MHz": 1.0, "GHz": 1e3}
_TIME_US = {"ns": 1e-3, "us": 1.0, "ms": 1e3, "s": 1e6}
_FIELD_T = {"T": 1.0, "mT": 1e-3}
_ANGLE_RAD = {"rad": 1.0}

ERROR_MODELS = ("none", "rotation", "decoherence")


class ConfigError(ValueError):
    """Malformed run configuration."""


@dataclass(frozen=True)
class Settings:
    """A run configuration plus the number of independent trials."""

    run: RunConfig
    trials: int


def _quantity(raw, units: dict, key: str) -> float:
    """Parse "<number> <unit>" into the family's canonical unit."""
    if not isinstance(raw, str):
        raise ConfigError(
            f"{key}: expected a quantity string with a unit "
            f"({'/'.join(units)}), got {raw!r}"
        )
    parts = raw.split()
    if len(parts) != 2:
        raise ConfigError(f"{key}: expected '<number> <unit>', got {raw!r}")
    num, unit = parts
    if unit not in units:
        raise ConfigError(
            f"{key}: unknown unit {unit!r}; expected one of {'/'.join(units)}"
        )
    try:
        value = float(num)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse number {num!r}") from None
    return value * units[unit]


def _number(raw, key: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(f"{key}: expected a bare number, got {raw!r}")
    return float(raw)


def _integer(raw, key: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ConfigError(f"{key}: expected an integer, got {raw!r}")
    return raw


def _boolean(raw, key: str) -> bool:
    if not isinstance(raw, bool):
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    return raw


_SYSTEM_KEYS = ("A_perp", "D", "B", "g_e", "g_N", "q_z")
_TOP_KEYS = (
    "true_A",
    "prior_mean",
    "prior_std",
    "N",
    "K_max",
    "c",
    "error_model",
    "epsilon",
    "T1",
    "T2",
    "system",
    "tau_n",
    "rabi",
    "use_finite_pulses",
    "noiseless",
    "target_std",
    "tau_override",
    "m_max",
    "seed",
    "trials",
)


def _reject_unknown(data: dict, allowed, where: str) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown {where} key(s): {', '.join(unknown)}")


def _error_model(name: str, epsilon: float, diss: DissipationParams) -> ErrorModel:
    if name == "none":
        return Ideal()
    if name == "rotation":
        return RotationError(epsilon)
    if name == "decoherence":
        return Decoherence(diss)
    raise ConfigError(
        f"error_model: expected one of {'/'.join(ERROR_MODELS)}, got {name!r}"
    )


def parse_config(data: dict) -> Settings:
    """Build Settings from a parsed YAML mapping; unknown keys are errors."""
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping")
    _reject_unknown(data, _TOP_KEYS, "configuration")
    system_raw = data.get("system", {})
    if not isinstance(system_raw, dict):
        raise ConfigError("system: expected a mapping")
    _reject_unknown(system_raw, _SYSTEM_KEYS, "system")

    true_A = _quantity(data.get("true_A", "3.06 MHz"), _FREQ_MHZ, "true_A")
    prior_mean = _quantity(
        data.get("prior_mean", "3.03 MHz"), _FREQ_MHZ, "prior_mean"
    )
    prior_std = _quantity(
        data.get("prior_std", "0.03 MHz"), _FREQ_MHZ, "prior_std"
    )
    N = _integer(data.get("N", 1000), "N")
    K_max = _integer(data.get("K_max", 6), "K_max")
    c = _number(data.get("c", 0.2), "c")
    epsilon = _quantity(data.get("epsilon", "0.1 rad"), _ANGLE_RAD, "epsilon")
    T1 = _quantity(data.get("T1", "5900 us"), _TIME_US, "T1")
    T2 = _quantity(data.get("T2", "350 us"), _TIME_US, "T2")
    tau_n = _quantity(data.get("tau_n", "1 us"), _TIME_US, "tau_n")
    rabi_MHz = _quantity(data.get("rabi", "500 kHz"), _FREQ_MHZ, "rabi")
    use_finite_pulses = _boolean(
        data.get("use_finite_pulses", False), "use_finite_pulses"
    )
    noiseless = _boolean(data.get("noiseless", False), "noiseless")
    model_name = data.get("error_model", "none")
    if model_name not in ERROR_MODELS:
        raise ConfigError(
            f"error_model: expected one of {'/'.join(ERROR_MODELS)}, "
            f"got {model_name!r}"
        )

    target_std = data.get("target_std")
    if target_std is not None:
        target_std = _quantity(target_std, _FREQ_MHZ, "target_std")
    tau_override = data.get("tau_override")
    if tau_override is not None:
        tau_override = _quantity(tau_override, _TIME_US, "tau_override")
    m_max = _integer(data.get("m_max", 10_000_000), "m_max")
    seed = data.get("seed", 12345)
    if seed is not None:
        seed = _integer(seed, "seed")
    trials = _integer(data.get("trials", 1), "trials")
    if trials < 1:
        raise ConfigError("trials: must be at least 1")

    system = SystemParams(
        A=true_A,
        A_perp=_quantity(
            system_raw.get("A_perp", "3.65 MHz"), _FREQ_MHZ, "system.A_perp"
        ),
        D=_quantity(system_raw.get("D", "2.87 GHz"), _FREQ_MHZ, "system.D")
        * 1e-3,
        B=_quantity(system_raw.get("B", "0.2 T"), _FIELD_T, "system.B"),
        g_e=_number(system_raw.get("g_e", 2.0023), "system.g_e"),
        g_N=_number(system_raw.get("g_N", -0.5664), "system.g_N"),
        q_z=_number(system_raw.get("q_z", 0.0), "system.q_z"),
    )
    diss = DissipationParams(T1=T1, T2=T2)
    scheduler = SchedulerConfig(
        c=c,
        zeta=1.0 / math.sqrt(N),
        tau_min=tau_n if use_finite_pulses else 0.0,
        m_max=m_max,
        tau_override=tau_override,
    )
    run = RunConfig(
        true_A=true_A,
        prior=GaussianKnowledge(mean=prior_mean, std=prior_std),
        scheduler=scheduler,
        N=N,
        K_max=K_max,
        target_std=target_std,
        error_model=_error_model(model_name, epsilon, diss),
        system=system,
        tau_n=tau_n,
        rabi=rabi_MHz * 1e3,
        use_finite_pulses=use_finite_pulses,
        noiseless=noiseless,
        seed=seed,
    )
    return Settings(run=run, trials=trials)


def load_config(path) -> Settings:
    """Parse a YAML config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if data is None:
        data = {}
    return parse_config(data)


def _fmt(value: float, unit: str) -> str:
    return f"{value!r} {unit}"


def echo_config(settings: Settings) -> str:
    """Serialize Settings back to YAML; parsing the result round-trips."""
    run = settings.run
    err = run.error_model
    if isinstance(err, RotationError):
        model_name, epsilon = "rotation", err.epsilon
        diss = DissipationParams()
    elif isinstance(err, Decoherence):
        model_name, epsilon = "decoherence", 0.1
        diss = err.diss
    else:
        model_name, epsilon = "none", 0.1
        diss = DissipationParams()
    data = {
        "true_A": _fmt(run.true_A, "MHz"),
        "prior_mean": _fmt(run.prior.mean, "MHz"),
        "prior_std": _fmt(run.prior.std, "MHz"),
        "N": run.N,
        "K_max": run.K_max,
        "c": run.scheduler.c,
        "error_model": model_name,
        "epsilon": _fmt(epsilon, "rad"),
        "T1": _fmt(diss.T1, "us"),
        "T2": _fmt(diss.T2, "us"),
        "system": {
            "A_perp": _fmt(run.system.A_perp, "MHz"),
            "D": _fmt(run.system.D * 1e3, "MHz"),
            "B": _fmt(run.system.B, "T"),
            "g_e": run.system.g_e,
            "g_N": run.system.g_N,
            "q_z": run.system.q_z,
        },
        "tau_n": _fmt(run.tau_n, "us"),
        "rabi": _fmt(run.rabi * 1e-3, "MHz"),
        "use_finite_pulses": run.use_finite_pulses,
        "noiseless": run.noiseless,
        "target_std": (
            None if run.target_std is None else _fmt(run.target_std, "MHz")
        ),
        "tau_override": (
            None
            if run.scheduler.tau_override is None
            else _fmt(run.scheduler.tau_override, "us")
        ),
        "m_max": run.scheduler.m_max,
        "seed": run.seed,
        "trials": settings.trials,
    }
    return yaml.safe_dump(data, sort_keys=False)
