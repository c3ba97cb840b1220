"""
Run Configuration

Validated settings for one command invocation. The seed is part of every
report; the thread count only changes speed, never output.
"""

from typing import List, Optional
import re

from pydantic import BaseModel, ConfigDict, Field as PydanticField, ValidationError, field_validator

from homology.linalg import Field

DEFAULT_SEED = 7

__all__ = ["DEFAULT_SEED", "RunConfig", "ValidationError"]


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    command: str
    action: str
    inputs: List[str] = PydanticField(default_factory=list)
    field: str = "q"
    k: Optional[int] = None
    degrees: Optional[List[int]] = None
    max_degree: int = PydanticField(default=3, ge=1, le=6)
    ring: str = "f2"
    seed: int = DEFAULT_SEED
    trials: Optional[int] = PydanticField(default=None, ge=1)
    threads: Optional[int] = PydanticField(default=None, ge=1)
    output: Optional[str] = None
    verbose: bool = False

    # action-specific inputs
    simplex: Optional[List[str]] = None
    vertex: Optional[str] = None
    vertex_map: Optional[str] = None
    pieces: Optional[List[List[str]]] = None
    acyclic: List[List[int]] = PydanticField(default_factory=list)
    immersion: Optional[str] = None

    @field_validator("field")
    @classmethod
    def _known_field(cls, value: str) -> str:
        Field.parse(value)
        return value

    @field_validator("ring")
    @classmethod
    def _known_ring(cls, value: str) -> str:
        if value not in ("z", "f2"):
            raise ValueError(f"ring must be z or f2, got {value!r}")
        return value

    @field_validator("degrees")
    @classmethod
    def _positive_degrees(cls, value: Optional[List[int]]) -> Optional[List[int]]:
        if value is not None and any(d < 1 for d in value):
            raise ValueError("degrees must be positive")
        return value

    @field_validator("action")
    @classmethod
    def _plain_action(cls, value: str) -> str:
        if not re.fullmatch(r"[A-Za-z0-9-]+", value):
            raise ValueError(f"malformed action {value!r}")
        return value

    def parsed_field(self) -> Field:
        return Field.parse(self.field)
