//! Geometry, large-scale path loss, small-scale fading and the derived
//! channel quantities shared by every formula.

mod derived;
mod fading;
mod geometry;

pub use derived::{ChannelRealization, DerivedChannel, DeviceView};
pub(crate) use derived::diag_form;
pub use fading::{path_loss, sample_channels, FadingConfig};
pub use geometry::{place_nodes, GeometryConfig, Positions};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random stream families. Each `(realization, link)` pair gets
/// its own ChaCha stream, so changing one link's sampling never perturbs
/// another and sweeps reuse identical fading at every sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum LinkStream {
    Placement = 0,
    HapIrs = 1,
    IrsDevice = 2,
    Direct = 3,
    Randomization = 4,
}

/// Seed of one Monte Carlo realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealizationSeed {
    pub master: u64,
    pub index: u64,
}

impl RealizationSeed {
    pub fn new(master: u64, index: u64) -> Self {
        Self { master, index }
    }

    pub fn stream(&self, link: LinkStream) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream((self.index << 8) | link as u64);
        rng
    }
}

/// Places nodes and samples channels for one realization, then derives the
/// cached matrices.
pub fn generate(
    geometry: &GeometryConfig,
    fading: &FadingConfig,
    num_elements: usize,
    seed: RealizationSeed,
) -> crate::Result<(Positions, DerivedChannel)> {
    let positions = place_nodes(geometry, &mut seed.stream(LinkStream::Placement))?;
    let realization = sample_channels(&positions, num_elements, fading, seed)?;
    let derived = DerivedChannel::new(&realization)?;
    Ok((positions, derived))
}
