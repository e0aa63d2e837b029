"""Classical KNN-interpolation upsampling, selective upsampling, quality metrics and a benchmark harness."""

from .bilinear import upsample_bilinear
from .image_core import (
    Image,
    ImageFormatError,
    NormalizedImage,
    downsample_box,
    downsample_decimate,
    load_cifar10_batch,
    load_image,
    save_image,
)
from .knn import SummedAreaTable, UpsampleConfig, upsample_knn, upsample_knn_fast, validate_config
from .metrics import MetricsReport, SsimConfig, evaluate, mae, mse, psnr, psnr_from_rmse, rmse, ssim
from .selective import (
    SelectiveConfig,
    SelectiveStats,
    flat_mask,
    gradient_map,
    upsample_selective,
)

__version__ = "0.1.0"
