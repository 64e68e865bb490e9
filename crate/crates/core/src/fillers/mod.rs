//! Constructive fillers. Every filling they return has passed
//! [`crate::words::verify_filling`].

mod bfs;
mod doubling;
mod mainscale;
mod relator;
mod shuffle;
mod tokens;

pub use bfs::{best_first_fill, bfs_exact_fill, canonical, central_image, BfsCertificate, BfsFill, BfsLimits};
pub use doubling::{
    commutator_product_seed, doubling_fill, doubling_ledger, quotdehn_bound, quotient_example, DominantTerm, DoublingBase,
    DoublingLedger, QuotientBound, QuotientExample,
};
pub use mainscale::{mainscale_bound, mainscale_fill, AreaLedger, CayleyBall, Mainscale, MainscaleConfig, PentagonFiller, ScaleRecord};
pub use relator::{rescale_filling, rescaled_cost, straighten_swaps, RelatorFiller, StandardFiller};
pub use shuffle::{kfold_shuffle_fill, shuffle_fill, ShuffleFill};
pub use tokens::{Commuter, LoopLibrary, Tokens};
