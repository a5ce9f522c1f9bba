"""
Utility functions for the persuasion toolkit
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from config.settings import settings

from .bench import GridConfig, Table1Config
from .errors import InputError
from .model import Instance, InstanceSpec, check_structure

ModelT = TypeVar("ModelT", bound=BaseModel)

GRID_DIR = settings.GRID_DIR


def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a JSON document

    Args:
        path: Path to the file

    Returns:
        Parsed JSON object

    Raises:
        InputError: missing file or invalid JSON
    """
    path = Path(path)

    if not path.exists():
        raise InputError(f"File not found: {path}")

    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})") from e

    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def parse_model(
    model: Type[ModelT], data: Dict[str, Any], source: str = "input"
) -> ModelT:
    """Validate a dictionary against a pydantic model, as an InputError on failure"""
    try:
        return model(**data)
    except ValidationError as e:
        raise InputError(f"{source}: {e}") from e


def instance_from_dict(data: Dict[str, Any], source: str = "input") -> Instance:
    """Build and structurally check an instance from its file form"""
    spec = parse_model(InstanceSpec, data, source)
    try:
        inst = spec.build()
    except ValidationError as e:
        raise InputError(f"{source}: {e}") from e
    check_structure(inst)
    return inst


def load_instance_from_file(instance_path: Union[str, Path]) -> Instance:
    """
    Load an instance from a JSON file

    Args:
        instance_path: Path to the instance file

    Returns:
        Instance
    """
    return instance_from_dict(read_json(instance_path), source=str(instance_path))


def resolve_grid_path(name_or_path: Union[str, Path]) -> Path:
    """A path, or the name of a bundled grid (fig1, fig2, table1)"""
    path = Path(name_or_path)
    if path.exists():
        return path
    bundled = GRID_DIR / f"{path.stem}.json"
    if bundled.exists():
        return bundled
    raise InputError(f"Grid configuration not found: {name_or_path}")


def load_grid_config(config_path: Union[str, Path]) -> GridConfig:
    path = resolve_grid_path(config_path)
    return parse_model(GridConfig, read_json(path), str(path))


def load_table1_config(config_path: Union[str, Path]) -> Table1Config:
    path = resolve_grid_path(config_path)
    return parse_model(Table1Config, read_json(path), str(path))


def bundled_grids() -> List[str]:
    """Names of the grid files shipped in GRID_DIR"""
    return sorted(p.stem for p in GRID_DIR.glob("*.json"))
