//! Aliased-seabed detection.
//!
//! The pipeline ([`detect_aliased_seabed`]) works in five steps followed by
//! two optional clean-up passes:
//!
//! 1. mean-square of along-ship angle counts over a `window_along` square
//!    window, thresholded at `t_theta`;
//! 2. the same over athwart-ship counts with `window_athwart` and `t_phi`;
//! 3. the union of both, the angle mask;
//! 4. the median Sv under the angle mask, optionally floored at `t_min`,
//!    becomes the Sv threshold;
//! 5. connected regions of Sv above that threshold that touch the angle mask
//!    are added to it.
//!
//! Enclosed holes are then filled and pings with a detected true seabed are
//! cleared, since an alias cannot appear where the real bottom was seen.

mod config;
mod pipeline;
mod regions;
mod window;

pub use config::{Connectivity, DetectionConfig};
pub use pipeline::{
    angle_mask, detect_aliased_seabed, dynamic_threshold, exclude_below_seabed, DetectionResult,
};
pub use regions::{fill_holes, grow_regions};
pub use window::{mean_square_window, window_bounds};
