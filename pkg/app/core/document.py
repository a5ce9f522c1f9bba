"""
Output documents for mechanisms, samples and reports
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, Field

from app import __version__


class MechanismDocument(BaseModel):
    """
    Structured output of a toolkit computation.

    Every document names what it holds (`kind`), the toolkit version that
    produced it and the fingerprint of the instance it was computed for,
    so results can be matched to their inputs later.
    """

    kind: str = Field(description="Document type, e.g. private_mechanism")
    version: str = Field(default=__version__, description="Toolkit version")
    fingerprint: Optional[str] = Field(
        default=None, description="sha256 of the canonical instance"
    )
    payload: Dict[str, Any] = Field(default_factory=dict, description="Document body")

    def __str__(self) -> str:
        return self.to_json()

    def to_dict(self) -> Dict[str, Any]:
        """Convert the document to a dictionary"""
        return {
            "kind": self.kind,
            "version": self.version,
            "fingerprint": self.fingerprint,
            "payload": self.payload,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MechanismDocument":
        """Create a document from a dictionary"""
        return cls(
            kind=data["kind"],
            version=data.get("version", __version__),
            fingerprint=data.get("fingerprint"),
            payload=data.get("payload", {}),
        )

    def to_json(self, indent: Optional[int] = 2) -> str:
        # sort_keys keeps repeated runs byte-identical
        return json.dumps(
            self.to_dict(), indent=indent, sort_keys=True, ensure_ascii=False
        )

    def get(self, key: str, default: Any = None) -> Any:
        """Get a payload field"""
        return self.payload.get(key, default)

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        return path


def finite_or_none(value: float) -> Optional[float]:
    """JSON has no infinity or NaN; such values are written as null"""
    value = float(value)
    return value if math.isfinite(value) else None
