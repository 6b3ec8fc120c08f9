from .connect import (
    AdjacencyGraph,
    ConnectParams,
    Kind,
    PointClass,
    classify_points,
    connect_points,
    prune_redundant,
    segment_gain,
)
from .corners import CornerParams, shi_tomasi_corners, shi_tomasi_response
from .mask import BinaryMask, dice_loss, iou, load_mask, preprocess_sketch
from .pipeline import ExtractionStages, extract_adjacency, extract_network
from .refine import RefineParams, refine_corners

__all__ = [
    "AdjacencyGraph",
    "BinaryMask",
    "ConnectParams",
    "CornerParams",
    "ExtractionStages",
    "Kind",
    "PointClass",
    "RefineParams",
    "classify_points",
    "connect_points",
    "dice_loss",
    "extract_adjacency",
    "extract_network",
    "iou",
    "load_mask",
    "preprocess_sketch",
    "prune_redundant",
    "refine_corners",
    "segment_gain",
    "shi_tomasi_corners",
    "shi_tomasi_response",
]
