import json
import logging
import sys
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

from loguru import logger

type ConfigMap = dict[str, object]
type ConfigPath = tuple[str, ...]

CONFIG_DIR = Path("./configs/")
CONFIG_FILE = "solver_config.json"

CONFIG_KEY_MAP: dict[ConfigPath, str] = {
    ("solver", "verify_each_step"): "VERIFY_EACH_STEP",
    ("solver", "check_k4_each_step"): "CHECK_K4_EACH_STEP",
    ("solver", "fallback_node_budget"): "FALLBACK_NODE_BUDGET",
    ("solver", "max_recursion_depth"): "MAX_RECURSION_DEPTH",
    ("solver", "trace_enabled"): "TRACE_ENABLED",
    ("generators", "edgeless_leaf_probability"): "EDGELESS_LEAF_PROBABILITY",
    ("generators", "pole_edge_probability"): "POLE_EDGE_PROBABILITY",
    ("stress", "workers"): "STRESS_WORKERS",
    ("stress", "oracle_max_n"): "ORACLE_MAX_N",
    ("stress", "dump_directory"): "DUMP_DIRECTORY",
    ("stress", "default_k_policy"): "DEFAULT_K_POLICY",
    ("logging", "level"): "LOG_LEVEL",
    ("logging", "show_logs"): "SHOW_LOGS",
    ("logging", "to_file"): "LOG_TO_FILE",
    ("logging", "file"): "LOG_FILE",
}

K_POLICIES = ("tight", "all")


@dataclass(frozen=True)
class RuntimeConfig:
    nested: ConfigMap
    flat: ConfigMap


@dataclass(frozen=True)
class SolverRuntimeConfig:
    verify_each_step: bool = True
    check_k4_each_step: bool = True
    fallback_node_budget: int = 200_000
    max_recursion_depth: int = 100_000
    trace_enabled: bool = True


@dataclass(frozen=True)
class GeneratorRuntimeConfig:
    edgeless_leaf_probability: float = 0.1
    pole_edge_probability: float = 0.3


@dataclass(frozen=True)
class StressRuntimeConfig:
    workers: int = 1
    oracle_max_n: int = 7
    dump_directory: str = "./logs/stress_failures/"
    default_k_policy: str = "tight"


def _read_json_file(path: Path) -> ConfigMap:
    if not path.exists():
        return {}
    with path.open(encoding="utf-8") as file:
        data = json.load(file)
    return data if isinstance(data, dict) else {}


def _nested_lookup(data: ConfigMap, path: ConfigPath) -> object | None:
    current: object = data
    for key in path:
        if not isinstance(current, dict) or key not in current:
            return None
        current = current[key]
    return current


def _flatten_nested(nested_config: ConfigMap) -> ConfigMap:
    flat: ConfigMap = {}
    for path, flat_key in CONFIG_KEY_MAP.items():
        value = _nested_lookup(nested_config, path)
        if value is not None:
            flat[flat_key] = value
    return flat


def load_runtime_config(config_dir: Path = CONFIG_DIR) -> RuntimeConfig:
    """Read the nested config file; a missing file yields an empty config so defaults apply."""
    config_path = config_dir / CONFIG_FILE
    if not config_path.exists():
        logger.debug("No config file at {}, using defaults", config_path)
        return RuntimeConfig(nested={}, flat={})

    try:
        nested = _read_json_file(config_path)
    except json.JSONDecodeError as exc:
        msg = f"Invalid JSON in config file {config_path}: {exc}"
        raise ValueError(msg) from exc

    return RuntimeConfig(nested=nested, flat=_flatten_nested(nested))


def load_app_config(config_dir: Path = CONFIG_DIR) -> ConfigMap:
    return load_runtime_config(config_dir).flat


def _get_str_value(value: object, default: str) -> str:
    if isinstance(value, str) and value:
        return value
    return default


def _get_int_value(value: object, default: int) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        return default


def _get_float_value(value: object, default: float) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        return default


def _get_bool_value(value: object, default: bool) -> bool:
    if value is None:
        return default
    return bool(value)


def _get_probability(value: object, default: float) -> float:
    probability = _get_float_value(value, default)
    if not 0.0 <= probability <= 1.0:
        logger.warning("Probability {} outside [0, 1], using {}", probability, default)
        return default
    return probability


def load_solver_config(app_config: Mapping[str, object]) -> SolverRuntimeConfig:
    return SolverRuntimeConfig(
        verify_each_step=_get_bool_value(app_config.get("VERIFY_EACH_STEP"), True),
        check_k4_each_step=_get_bool_value(app_config.get("CHECK_K4_EACH_STEP"), True),
        fallback_node_budget=max(1, _get_int_value(app_config.get("FALLBACK_NODE_BUDGET"), 200_000)),
        max_recursion_depth=max(1, _get_int_value(app_config.get("MAX_RECURSION_DEPTH"), 100_000)),
        trace_enabled=_get_bool_value(app_config.get("TRACE_ENABLED"), True),
    )


def load_generator_config(app_config: Mapping[str, object]) -> GeneratorRuntimeConfig:
    return GeneratorRuntimeConfig(
        edgeless_leaf_probability=_get_probability(app_config.get("EDGELESS_LEAF_PROBABILITY"), 0.1),
        pole_edge_probability=_get_probability(app_config.get("POLE_EDGE_PROBABILITY"), 0.3),
    )


def load_stress_config(app_config: Mapping[str, object]) -> StressRuntimeConfig:
    k_policy = _get_str_value(app_config.get("DEFAULT_K_POLICY"), "tight")
    if k_policy not in K_POLICIES:
        logger.warning("Unknown k policy '{}', using 'tight'", k_policy)
        k_policy = "tight"
    return StressRuntimeConfig(
        workers=max(1, _get_int_value(app_config.get("STRESS_WORKERS"), 1)),
        oracle_max_n=_get_int_value(app_config.get("ORACLE_MAX_N"), 7),
        dump_directory=_get_str_value(app_config.get("DUMP_DIRECTORY"), "./logs/stress_failures/"),
        default_k_policy=k_policy,
    )


def configure_logging(app_config: Mapping[str, object]) -> None:
    show_logs = bool(app_config.get("SHOW_LOGS", False))
    log_level = str(app_config.get("LOG_LEVEL", "INFO")).upper()
    log_to_file = bool(app_config.get("LOG_TO_FILE", True))
    log_file = str(app_config.get("LOG_FILE", "./logs/equitable.log"))

    logger.remove()

    if log_to_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        logger.add(log_path, level=log_level, rotation="10 MB", retention=5)

    if show_logs:
        logging.basicConfig(level=log_level)
        logger.add(sys.stderr, level=log_level)
    else:
        logging.disable(logging.CRITICAL)
