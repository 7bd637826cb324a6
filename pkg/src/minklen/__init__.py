"""Nonparametric estimation of boundary length and surface area.

Points are sampled uniformly on a frame and labeled inside/outside a body;
the set of locations whose eps-ball sees both labels estimates the
eps-dilated boundary, and its measure over ``2 eps`` estimates the length.
"""

from minklen.estimator import (
    EstimatorConfig,
    LengthEstimate,
    NeighborIndex,
    build_index,
    contour_index,
    count_neighbors,
    default_bandwidth,
    estimate_length,
    estimate_length_bruteforce,
    in_boundary_estimate,
    min_mc_budget,
    rasterize_boundary_estimate,
)
from minklen.geometry import (
    AxisCube,
    AxisSquare,
    Ball,
    Disk,
    Frame,
    ImageShape,
    RotatedSquare,
    Shape,
    Tschirnhausen,
    contains,
    default_frame,
    parse_shape,
    reference_dilated_length,
    true_area,
    true_length,
)
from minklen.raster import (
    BinaryImage,
    add_noise_patches,
    area_based_length,
    digitize,
    exhaustive_with_smoothing,
    image_oracle,
    perimeter_exhaustive,
    pixel_area,
    read_pbm,
    write_pbm,
)
from minklen.sampling import LabeledPoint, LabeledSample, RngSpec, draw_labeled_sample, mc_area

__version__ = "0.1.0"
