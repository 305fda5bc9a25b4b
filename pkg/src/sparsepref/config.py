"""Experiment configuration: TOML files plus dotted-key command-line overrides.

Files mirror the runner spec: top-level keys (repetitions, base_seed,
estimators, ...) and a [solver] section. Any key can be overridden on the
command line as --section.key value (or --key for top-level keys).
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib


class ConfigError(ValueError):
    pass


def load_config(path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def deep_merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = deep_merge(out[key], val)
        else:
            out[key] = val
    return out


def parse_scalar(text: str):
    """Best-effort typed parse: int, then float, then bool, else string."""
    s = text.strip()
    low = s.lower()
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(s)
        except ValueError:
            pass
    return s


def parse_value(text: str):
    if "," in text:
        return [parse_scalar(tok) for tok in text.split(",") if tok.strip() != ""]
    return parse_scalar(text)


def set_dotted(cfg: dict, dotted: str, value):
    parts = dotted.split(".")
    if any(not p for p in parts):
        raise ConfigError(f"malformed override key {dotted!r}")
    node = cfg
    for p in parts[:-1]:
        nxt = node.setdefault(p, {})
        if not isinstance(nxt, dict):
            raise ConfigError(f"cannot set {dotted}: {p} is not a section")
        node = nxt
    node[parts[-1]] = value


def parse_overrides(extra) -> dict:
    """Turn leftover CLI tokens (--a.b v | --a.b=v) into a nested dict."""
    cfg: dict = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--"):
            raise ConfigError(f"unexpected argument {tok!r}")
        body = tok[2:]
        if "=" in body:
            key, _, raw = body.partition("=")
            i += 1
        else:
            key = body
            if i + 1 >= len(extra):
                raise ConfigError(f"missing value for override --{key}")
            raw = extra[i + 1]
            i += 2
        if not key:
            raise ConfigError(f"malformed override {tok!r}")
        set_dotted(cfg, key, parse_value(raw))
    return cfg
