"""Config-file handling and spec-string parsing for the experiment runner.

Config files are flat ``key = value`` text grouped into sections named
after subcommands, readable by configparser.  Every key is also a command
line flag; a flag given on the command line overrides the file value.
Validation errors always name the offending key.
"""

from __future__ import annotations

import configparser
import os

from .sequences import (BoundedSequence, liouville, load_cache, mix, mobius,
                        phase_sequence, random_signs, save_cache)

__all__ = [
    "ConfigError",
    "load_config_file",
    "Resolver",
    "parse_count",
    "parse_int_list",
    "parse_float_list",
    "parse_sequence",
]


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config key '{key}': {message}")


def load_config_file(path) -> dict:
    """Read a sectioned key=value file into {section: {key: raw string}}."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    read = parser.read(path)
    if not read:
        raise ConfigError("config", f"cannot read config file {path!r}")
    out = {}
    for section in parser.sections():
        out[section.lower()] = {k.lower(): v for k, v in parser[section].items()}
    return out


class Resolver:
    """Merge file-section values with command-line flags, flags winning."""

    def __init__(self, section_values: dict, args):
        self.section = dict(section_values)
        self.args = args

    def get(self, key: str, kind, default=None, required: bool = False):
        flag = getattr(self.args, key.replace("-", "_"), None)
        if flag is not None:
            raw = flag
        elif key.lower() in self.section:
            raw = self.section[key.lower()]
        else:
            if required and default is None:
                raise ConfigError(key, "required but not given")
            return default
        if kind is str or not isinstance(raw, str):
            return raw
        try:
            return kind(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(key, f"cannot parse {raw!r}: {exc}") from None

    def unknown_keys(self, known) -> list:
        return sorted(set(self.section) - set(known))


def parse_count(text) -> int:
    """Integer count that also accepts scientific notation like 1e6."""
    if isinstance(text, int):
        return text
    value = float(text)
    if value != int(value) or value < 0:
        raise ValueError(f"{text!r} is not a nonnegative integer")
    return int(value)


def parse_int_list(text) -> list:
    return [parse_count(t) for t in str(text).split(",") if t.strip()]


def parse_float_list(text) -> list:
    return [float(t) for t in str(text).split(",") if t.strip()]


# ------------------------------------------------------------ sequences

def _split_specs(text: str) -> list:
    """Split a mix body on ';' (sequence specs contain ':' and ',')."""
    return [t for t in text.split(";") if t.strip()]


def parse_sequence(spec: str, N: int, cache_dir=None) -> BoundedSequence:
    """Build the length-N sequence named by a compact spec string.

    Grammar::

        mobius | liouville           number-theoretic signs (sieved)
        random:SEED                  iid signs from the seeded generator
        phase:c0,c1,...              e(c0 + c1 n + c2 n^2 + ...)
        mix:W*SPEC;W*SPEC;...        weighted pointwise combination

    With a cache directory the sieved kinds are loaded from / saved to
    ``<kind>_<N>.odsq`` files.
    """
    spec = spec.strip()
    key = "seq"
    if spec in ("mobius", "liouville"):
        maker = mobius if spec == "mobius" else liouville
        if cache_dir is not None:
            path = os.path.join(cache_dir, f"{spec}_{N}.odsq")
            if os.path.exists(path):
                return load_cache(path, label=spec)
            u = maker(N)
            os.makedirs(cache_dir, exist_ok=True)
            save_cache(path, u)
            return u
        return maker(N)
    if spec.startswith("random:"):
        try:
            seed = int(spec[len("random:"):])
        except ValueError:
            raise ConfigError(key, f"random seed in {spec!r} must be an integer") from None
        return random_signs(N, seed)
    if spec.startswith("phase:"):
        try:
            coeffs = parse_float_list(spec[len("phase:"):])
        except ValueError:
            raise ConfigError(key, f"bad phase coefficients in {spec!r}") from None
        if not coeffs:
            raise ConfigError(key, f"phase spec {spec!r} needs coefficients")
        return phase_sequence(coeffs, N)
    if spec.startswith("mix:"):
        parts, weights = [], []
        for term in _split_specs(spec[len("mix:"):]):
            w_text, sep, sub = term.partition("*")
            if not sep:
                raise ConfigError(key, f"mix term {term!r} needs WEIGHT*SPEC")
            try:
                weights.append(float(w_text))
            except ValueError:
                raise ConfigError(key, f"bad mix weight in {term!r}") from None
            parts.append(parse_sequence(sub, N, cache_dir))
        if not parts:
            raise ConfigError(key, "mix spec has no terms")
        return mix(parts, weights)
    raise ConfigError(key, f"unknown sequence spec {spec!r}")
