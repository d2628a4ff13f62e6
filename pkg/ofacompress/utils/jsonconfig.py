# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
Load and save ``dataclasses-json`` configuration documents.

Every config class is a ``@dataclass_json @dataclass`` with a ``check()``
method; :func:`load_config` parses a UTF-8 JSON file into one and validates it.
"""

import json
from pathlib import Path
from typing import Any, Type, TypeVar, Union

from ..errors import OfaConfigError

T = TypeVar("T")
PathLike = Union[str, Path]


def load_config(cls: Type[T], path: PathLike) -> T:
    """
    Read ``path`` as a JSON document of ``cls``.

    Raises:
        OfaConfigError: unreadable file, malformed JSON, or a document ``check()`` rejects.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise OfaConfigError(f"cannot read config {path}: {e}") from e
    return config_from_json(cls, text, source=str(path))


def config_from_json(cls: Type[T], text: str, source: str = "<string>") -> T:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise OfaConfigError(f"{source} is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise OfaConfigError(f"{source} must hold a JSON object")
    try:
        config: Any = cls.from_dict(doc)  # type: ignore[attr-defined]
    except (KeyError, TypeError, ValueError) as e:
        raise OfaConfigError(f"{source} does not describe a {cls.__name__}: {e}") from e
    config.check()
    return config


def save_config(config: Any, path: PathLike) -> None:
    """Write ``config`` as indented JSON with snake_case keys."""
    Path(path).write_text(config.to_json(indent=2) + "\n", encoding="utf-8")
