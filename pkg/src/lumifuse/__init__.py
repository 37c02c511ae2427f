"""Dynamic-illumination image fusion for vision-based tactile sensors."""

from .core import (CaptureSet, FusionKind, FusionMethod, IlluminationPattern, Image, MetricReport,
                   to_grayscale)
from .dataset import average_backgrounds, export_capture_set, load_capture_set, load_dataset
from .fusion import fuse, fuse_brovey, fuse_channel_sum
from .metrics import background_difference, evaluate, rms_contrast, sharpness
from .optimizer import (SearchConfig, SequenceResult, effective_frame_rate, evaluate_combination,
                        exhaustive_search, greedy_sequence, intersect_best)
from .pngio import load_png, save_png
from .pyramid import build_laplacian, expand, fuse_laplacian, gaussian_reduce, reconstruct
from .simulator import SceneSpec, render, render_background
from .wavelet import dwt2, fuse_dwt, idwt2

__version__ = "0.1.0"
