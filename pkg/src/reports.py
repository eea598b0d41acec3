#!/usr/bin/env python

"""
Report documents written by the CLI

Every JSON report is validated through these models before it is written.
The published JSON Schemas are generated from the same models.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.errors import InputError

JSON_SCHEMA_DIALECT = "https://json-schema.org/draft/2020-12/schema"


class _Document(BaseModel):
    model_config = ConfigDict(extra="allow")


class ImageSize(_Document):
    width: int = Field(ge=1)
    height: int = Field(ge=1)


class StageEntry(_Document):
    name: str
    rank: int = Field(ge=0, le=2)
    sigma: Optional[float] = None
    merges: int = Field(ge=0)
    u_total: float = Field(ge=0)
    rms: float = Field(ge=0)
    segments: int = Field(ge=1)
    lock: str
    skipped: bool = False


class StepEntry(_Document):
    name: str
    skipped: bool
    detail: str = ""


class RunReportDocument(_Document):
    """Report of one `colorseg segment` run"""

    input: str
    preset: Optional[str] = None
    config: Dict[str, Any]
    image: ImageSize
    stages: List[StageEntry]
    steps: List[StepEntry]
    isolated_segments: int = Field(ge=0)
    locked_edges: int = Field(ge=0)
    segment_count: int = Field(ge=1)
    wall_time_s: float = Field(ge=0)
    timestamp: str
    success: bool


class MatchEntry(_Document):
    gt_id: int
    out_id: int
    iou: float = Field(ge=0.5, le=1.0)
    shadow: bool


class ImageEvaluation(_Document):
    miou: float = Field(ge=0, le=1)
    literal_sum: float = Field(ge=0)
    gt_segments: int = Field(ge=0)
    shadow_matches: int = Field(ge=0)
    matches: List[MatchEntry]
    unmatched_segments: List[int]
    unmatched_shadows: List[int]


class DatasetSummary(_Document):
    miou: float = Field(ge=0, le=1)
    literal_sum: float = Field(ge=0)
    gt_segments: int = Field(ge=1)
    images: int = Field(ge=1)
    shadow_matches: int = Field(ge=0)
    metric: str


class EvalReportDocument(_Document):
    """Report of one `colorseg eval` run"""

    dataset: DatasetSummary
    images: Dict[str, ImageEvaluation]
    skipped: List[str]
    failed: Dict[str, str]
    wall_time_s: float = Field(ge=0)
    timestamp: str
    success: bool


REPORT_MODELS = {"run": RunReportDocument, "eval": EvalReportDocument}


def report_schema(kind: str) -> Dict[str, Any]:
    """JSON Schema of the `run` or `eval` report, generated from its model"""
    try:
        model = REPORT_MODELS[kind]
    except KeyError:
        raise InputError(f"unknown report kind {kind!r}; choose from {', '.join(REPORT_MODELS)}") from None
    schema = model.model_json_schema()
    schema["$schema"] = JSON_SCHEMA_DIALECT
    return schema
