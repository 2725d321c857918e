import json
from importlib import resources
from typing import *

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from elitenet.exceptions import DomainError
from elitenet.network.domain import DTO


class LayoutConfig(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)

    C: float = Field(0.2, gt=0)
    theta: float = Field(1.2, gt=0)
    step_ratio: float = Field(0.9, gt=0, lt=1)
    tolerance: float = Field(1e-3, gt=0)
    area: Optional[float] = Field(None, gt=0)
    min_coarse_size: int = Field(8, ge=2)


class RenderConfig(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)

    palette: List[str] = ['#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd',
                          '#8c564b', '#e377c2', '#7f7f7f', '#bcbd22', '#17becf']
    width: int = Field(800, gt=0)
    height: int = Field(800, gt=0)
    margin: int = Field(60, ge=0)
    radius_unit: float = Field(3.0, gt=0)
    font_size: int = Field(12, gt=0)
    edge_color: str = '#999999'
    edge_opacity: float = Field(0.3, ge=0, le=1)
    precision: int = Field(2, ge=0, le=6)

    @staticmethod
    def default() -> 'RenderConfig':
        text = resources.files('elitenet.viewer').joinpath('data/render.json').read_text(encoding='utf-8')
        return RenderConfig.model_validate(json.loads(text))

    @staticmethod
    def read(path) -> 'RenderConfig':
        with open(path, encoding='utf-8') as f:
            return RenderConfig.model_validate_json(f.read())

    def color(self, component: int) -> str:
        """Color of a 0-based component."""
        return self.palette[component % len(self.palette)]


class LayoutResult(DTO):
    def __init__(self, positions: Dict[str, Tuple[float, float]], iterations_run: int, converged: bool):
        if not all(np.isfinite(p).all() for p in positions.values()):
            raise DomainError('layout produced non-finite coordinates')
        self.positions = positions
        self.iterations_run = iterations_run
        self.converged = converged

    def array(self, labels: Sequence[str]) -> np.ndarray:
        return np.array([self.positions[label] for label in labels], dtype=float).reshape(len(labels), 2)


class Slice(DTO):
    """Pie slice, angles in degrees clockwise from 12 o'clock."""

    def __init__(self, component: int, start: float, end: float):
        self.component = component
        self.start = start
        self.end = end

    @property
    def fraction(self) -> float:
        return (self.end - self.start) / 360.0
