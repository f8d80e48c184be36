//! Decides whether the spatial entropy of a set of two-symbol Wang tiles is
//! positive, using minimal cycle generators, connecting-operator lower
//! bounds and zero-entropy certificates.

pub mod bound;
pub mod census;
pub mod certificate;
pub mod classify;
pub mod fixtures;
pub mod matrix;
pub mod periodicity;
pub mod spectral;
pub mod tables;
pub mod tile;
pub mod transfer;

pub use bound::{
    entropy_lower_bound, find_positivity_witness, necklaces, operator_product, BoundError,
    PositivityWitness, SearchConfig, SpectralAudit,
};
pub use census::{
    run_census, CensusConfig, CensusError, CensusRecord, CensusReport, CensusSummary,
};
pub use certificate::{
    certify_zero, check_prop_41, check_prop_42, check_prop_43, check_prop_44, check_prop_45,
    Proposition, ZeroCertificate,
};
pub use classify::{classify, ClassificationRecord, Classifier, ClassifyError, Verdict};
pub use matrix::{MatrixError, TransferMatrix};
pub use periodicity::{
    decompose, enumerate_mcgs, has_periodic_pattern, maximal_extensions, CycleDecomposition,
    GeneratorCatalog, PeriodicityError,
};
pub use spectral::{exceeds_one, spectral_radius};
pub use tables::Check;
pub use tile::{
    apply_group_element, canonicalize, format_tileset, orbit, parse_tileset, GroupElement,
    ParseError, Tile, TileSet, TileSetStyle,
};
pub use transfer::{
    base_horizontal, base_vertical, brute_force_gamma, connecting_operator, gamma, Direction,
    OperatorFamily, TransferError,
};
