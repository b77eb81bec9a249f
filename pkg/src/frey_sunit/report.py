"""Serialization, report envelopes, run configuration and the result cache."""
from __future__ import annotations

import dataclasses
import datetime as _dt
import enum
import fcntl
import hashlib
import json
import os
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from . import errors
from .qfield import AlgebraicNumber, FieldDescriptor, field_from_d

CACHE_ENV = "FREY_SUNIT_CACHE"
SCHEMA_VERSION = 1
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


# ---------------------------------------------------------------------------
# values


def encode(x: Any) -> Any:
    """JSON-ready form: rationals as "n/d" strings, irrational field elements as
    {"d": d, "coords": [x, y]} over the integral basis."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, AlgebraicNumber):
        if x.b == 0:
            return encode(x.a)
        cx, cy = x.coords
        return {"d": x.field.d, "coords": [encode(cx), encode(cy)], "text": str(x)}
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if hasattr(x, "to_dict"):
        return x.to_dict()
    raise TypeError(f"cannot encode {type(x).__name__}")


def parse_rational(s: str) -> Fraction:
    if not isinstance(s, str) or not _RATIONAL.match(s.strip()):
        raise errors.InvalidInput(f"not a rational literal: {s!r}")
    return Fraction(s.strip())


def decode_element(obj: Any, field: Optional[FieldDescriptor] = None) -> AlgebraicNumber:
    """Inverse of :func:`encode` for field elements."""
    if isinstance(obj, dict):
        K = field_from_d(int(obj["d"]))
        if field is not None and field != K:
            raise errors.FieldMismatch(f"element of {K.label()} where {field.label()} was expected")
        x, y = (parse_rational(c) for c in obj["coords"])
        return AlgebraicNumber.from_coords(K, x, y)
    from .qfield import QQ

    return AlgebraicNumber(field or QQ, parse_rational(obj))


def parse_element(text: str, field: FieldDescriptor) -> AlgebraicNumber:
    """Command-line element syntax: a rational "x" or integral-basis coordinates "x:y"."""
    parts = text.split(":")
    if len(parts) == 1:
        return AlgebraicNumber(field, parse_rational(parts[0]))
    if len(parts) == 2:
        if field.is_rational:
            raise errors.InvalidInput(f"{text!r} has two coordinates but the field is Q")
        x, y = (parse_rational(p) for p in parts)
        return AlgebraicNumber.from_coords(field, x, y)
    raise errors.InvalidInput(f"cannot parse element {text!r}")


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# ---------------------------------------------------------------------------
# configuration


@dataclasses.dataclass(frozen=True)
class RunConfig:
    exponent_bound: int = 10
    enumeration_ceiling: int = 10**9
    discriminant_bound: int = 10**6
    sieve_cutoff: int = 10**6
    cache_path: Optional[str] = None
    output_format: str = "json"

    FORMATS = ("json", "csv", "text")

    def __post_init__(self):
        for f in ("exponent_bound", "enumeration_ceiling", "discriminant_bound", "sieve_cutoff"):
            v = getattr(self, f)
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                raise errors.InvalidInput(f"{f} must be a positive integer, got {v!r}")
        if self.output_format not in self.FORMATS:
            raise errors.InvalidInput(f"output_format must be one of {self.FORMATS}")

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise errors.InvalidInput(f"unknown configuration keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise errors.InvalidInput(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise errors.InvalidInput("config file must hold a JSON object")
        return cls.from_mapping(data)

    def replace(self, **kw) -> "RunConfig":
        return dataclasses.replace(self, **{k: v for k, v in kw.items() if v is not None})

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def computational(self) -> dict:
        """The part of the config that can change results (cache key material)."""
        d = self.to_dict()
        d.pop("cache_path")
        d.pop("output_format")
        return d

    def resolved_cache_path(self) -> Optional[str]:
        return self.cache_path or os.environ.get(CACHE_ENV) or None


# ---------------------------------------------------------------------------
# envelope


def envelope(command: str, config: RunConfig, payload: dict, notices=(), timestamp=None) -> dict:
    if "kind" not in payload:
        raise ValueError("payload needs a kind")
    ts = timestamp or _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config.to_dict(),
        "timestamp": ts,
        "payload": payload,
        "paper_discrepancy_notices": list(notices),
    }


def schema_path() -> Path:
    return Path(__file__).with_name("schema") / "report.schema.json"


def load_schema() -> dict:
    return json.loads(schema_path().read_text())


# ---------------------------------------------------------------------------
# cache


def cache_key(command: str, params: dict, config: RunConfig) -> str:
    material = canonical({"command": command, "params": params, "config": config.computational()})
    return hashlib.sha256(material.encode()).hexdigest()


class ResultCache:
    """Append-only JSON-lines file; readers take a shared lock, writers an exclusive one."""

    def __init__(self, path: str):
        self.path = Path(path)

    def get(self, key: str) -> Optional[dict]:
        if not self.path.exists():
            return None
        found = None
        with open(self.path, "r", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_SH)
            try:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        rec = json.loads(line)
                    except json.JSONDecodeError:
                        continue  # torn line from an interrupted writer
                    if rec.get("key") == key:
                        found = rec
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
        return found

    def put(self, key: str, command: str, params: dict, payload: dict, notices=()) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        rec = {"key": key, "command": command, "params": params,
               "payload": payload, "notices": list(notices)}
        with open(self.path, "a", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.write(canonical(rec) + "\n")
                fh.flush()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)


def cached_run(command: str, params: dict, config: RunConfig, compute, use_cache: bool = True):
    """(payload, notices, hit) for compute() -> (payload, notices), via the cache when set."""
    path = config.resolved_cache_path() if use_cache else None
    if path:
        cache = ResultCache(path)
        key = cache_key(command, params, config)
        rec = cache.get(key)
        if rec is not None:
            return rec["payload"], rec["notices"], True
        payload, notices = compute()
        # store the JSON-normalised form so hits and misses are indistinguishable
        payload = json.loads(canonical(payload))
        cache.put(key, command, params, payload, notices)
        return payload, list(notices), False
    payload, notices = compute()
    return json.loads(canonical(payload)), list(notices), False
