//! DSP workloads parameterized by a multiplier configuration.

pub mod blur;
pub mod conv;
pub mod fir;
pub mod image;
pub mod matmul;
pub mod quality;
pub mod sobel;

pub use blur::gaussian_blur_fp;
pub use conv::{conv2d, winograd_conv3x3, Kernel2D};
pub use fir::{default_taps, fir, lowpass_taps};
pub use image::{bundled_image, pgm_read, pgm_write, pgm_write_ascii, GrayImage, Raster};
pub use matmul::{matmul_tiled, Matrix};
pub use quality::{psnr, ssim};
pub use sobel::{cer, sobel, sobel_magnitude, EdgeMap};
