"""Field checks shared by the profile and scenario loaders."""

from __future__ import annotations

import math
from typing import Any

from .errors import ProfileSyntaxError, ValidationError


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _require(cond: bool, field_name: str, invariant: str) -> None:
    if not cond:
        raise ValidationError(field_name, invariant)


def _positive(value: Any, name: str) -> None:
    _require(_is_number(value), name, f"{name} is a finite number")
    _require(value > 0, name, f"{name} > 0")


def _nonneg(value: Any, name: str) -> None:
    _require(_is_number(value), name, f"{name} is a finite number")
    _require(value >= 0, name, f"{name} ≥ 0")


def _text(value: Any, name: str) -> None:
    _require(isinstance(value, str) and value != "", name, f"{name} is non-empty text")


def _object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ProfileSyntaxError(f"{path}: expected an object")
    return value


def _fields(obj: dict, allowed: set[str], optional: set[str], path: str,
            lenient: bool) -> dict:
    unknown = set(obj) - allowed
    if unknown and not lenient:
        raise ValidationError(f"{path}.{sorted(unknown)[0]}", "no unknown fields (strict mode)")
    missing = allowed - optional - set(obj)
    if missing:
        raise ValidationError(f"{path}.{sorted(missing)[0]}", "required field present")
    return {k: v for k, v in obj.items() if k in allowed}


def _build(cls, kwargs: dict, path: str):
    try:
        return cls(**kwargs)
    except ValidationError as e:
        raise ValidationError(f"{path}.{e.field}", e.invariant) from None
    except TypeError as e:
        raise ValidationError(path, str(e)) from None
