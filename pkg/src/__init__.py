"""
ColourSeg
Physics-based linear colour segmentation by greedy region merging
"""

__version__ = "1.0.0"
__author__ = "ColourSeg Team"
__description__ = "Linear colour segmentation with rank-0/1/2 region merging"

from .config import PipelineConfig
from .pipeline import LabelMap, RunReport, SegmentationResult, Segmenter, segment_image

__all__ = ["LabelMap", "PipelineConfig", "RunReport", "SegmentationResult", "Segmenter", "segment_image"]
