"""Server configuration: JSON file with environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FileUnreadable
from .responder import GeneratorConfig


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    data_dir: str = "./data"
    generator_mode: str = "retrieval"
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)
    cors_allowed_origins: list[str] = field(default_factory=list)
    log_level: str = "info"


def load_config(path: str | Path | None = None,
                env: dict[str, str] | None = None) -> ServerConfig:
    """Read the config file (if given) and apply XCHAT_* overrides.

    Precedence: defaults, then file values, then environment variables.
    """
    env = os.environ if env is None else env
    config = ServerConfig()
    if path is not None:
        try:
            raw = Path(path).read_text("utf-8")
        except OSError as exc:
            raise FileUnreadable(f"cannot read config {path}: {exc}") from exc
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise FileUnreadable(f"config {path} is not valid JSON: {exc}") from exc
        listen = data.get("listen", {})
        config.host = listen.get("host", config.host)
        config.port = int(listen.get("port", config.port))
        config.data_dir = data.get("data_dir", config.data_dir)
        gen = data.get("generator", {})
        config.generator_mode = gen.get("mode", config.generator_mode)
        config.generator = GeneratorConfig(
            endpoint=gen.get("endpoint"),
            timeout=float(gen.get("timeout", 5.0)),
            max_history_turns=int(gen.get("max_history_turns", 6)))
        config.cors_allowed_origins = list(data.get("cors_allowed_origins", []))
        config.log_level = data.get("log_level", config.log_level)
    if "XCHAT_HOST" in env:
        config.host = env["XCHAT_HOST"]
    if "XCHAT_PORT" in env:
        config.port = int(env["XCHAT_PORT"])
    if "XCHAT_DATA_DIR" in env:
        config.data_dir = env["XCHAT_DATA_DIR"]
    if "XCHAT_GENERATOR_MODE" in env:
        config.generator_mode = env["XCHAT_GENERATOR_MODE"]
    if "XCHAT_GENERATOR_ENDPOINT" in env:
        config.generator.endpoint = env["XCHAT_GENERATOR_ENDPOINT"]
    if "XCHAT_LOG_LEVEL" in env:
        config.log_level = env["XCHAT_LOG_LEVEL"]
    if "XCHAT_CORS_ORIGINS" in env:
        config.cors_allowed_origins = [
            o.strip() for o in env["XCHAT_CORS_ORIGINS"].split(",") if o.strip()]
    return config
