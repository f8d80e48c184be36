//! Entropy lower bounds from products of connecting operators.
//!
//! For boundary indices `beta_j` in `{1, 4}` every row counted by
//! `S_{m;beta_j}` closes up horizontally with period `m`, so
//! `h(B) >= ln rho(S_{m;beta_1} ... S_{m;beta_k}) / (m k)`, and likewise for
//! the column operators `W`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{MatrixError, TransferMatrix};
use crate::spectral::{exceeds_one, spectral_radius};
use crate::tile::TileSet;
use crate::transfer::{connecting_family, Direction, OperatorFamily, TransferError};

/// Float radii above `1 + SPECTRAL_MARGIN` count as exceeding one.
pub const SPECTRAL_MARGIN: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundError {
    #[error("the boundary sequence must not be empty")]
    EmptyBetas,
    #[error("boundary index {0} is not 1 or 4")]
    InvalidBeta(u8),
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Bounds of the witness search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub m_max: usize,
    pub k_max: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { m_max: 5, k_max: 5 }
    }
}

/// A product of connecting operators with Perron root above one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityWitness {
    pub direction: Direction,
    pub m: usize,
    pub betas: Vec<u8>,
    pub rho: f64,
    /// `ln(rho) / (m k)` in nats.
    pub bound: f64,
}

fn check_betas(betas: &[u8]) -> Result<(), BoundError> {
    if betas.is_empty() {
        return Err(BoundError::EmptyBetas);
    }
    if let Some(&bad) = betas.iter().find(|&&b| b != 1 && b != 4) {
        return Err(BoundError::InvalidBeta(bad));
    }
    Ok(())
}

fn product_in(family: &OperatorFamily, betas: &[u8]) -> Result<TransferMatrix, BoundError> {
    let mut product = family.get(betas[0])?.clone();
    for &beta in &betas[1..] {
        product = product.checked_mul(family.get(beta)?)?;
    }
    Ok(product)
}

/// `S_{m;beta_1} ... S_{m;beta_k}` (or the `W` analogue).
pub fn operator_product(
    set: TileSet,
    m: usize,
    betas: &[u8],
    direction: Direction,
) -> Result<TransferMatrix, BoundError> {
    check_betas(betas)?;
    product_in(&connecting_family(set, m, direction)?, betas)
}

/// The lower bound in nats, or `None` when the product is nilpotent.
pub fn entropy_lower_bound(
    set: TileSet,
    m: usize,
    betas: &[u8],
    direction: Direction,
) -> Result<Option<f64>, BoundError> {
    let product = operator_product(set, m, betas, direction)?;
    let rho = spectral_radius(&product);
    Ok((rho > 0.0).then(|| rho.ln() / (m * betas.len()) as f64))
}

/// Sequences over `{1, 4}` of length `k` that are lexicographically least
/// among their cyclic rotations, in lexicographic order.
pub fn necklaces(k: usize) -> Vec<Vec<u8>> {
    (0u32..1 << k)
        .map(|bits| {
            (0..k)
                .map(|i| if bits >> (k - 1 - i) & 1 == 1 { 4 } else { 1 })
                .collect::<Vec<u8>>()
        })
        .filter(|seq| {
            (1..k).all(|shift| {
                let rotated: Vec<u8> = seq[shift..].iter().chain(&seq[..shift]).copied().collect();
                *seq <= rotated
            })
        })
        .collect()
}

/// Tally of exact-versus-float agreement over every product examined.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpectralAudit {
    pub checked: u64,
    pub disagreements: Vec<String>,
}

impl SpectralAudit {
    fn record(&mut self, exact: bool, rho: f64, what: impl FnOnce() -> String) {
        self.checked += 1;
        if exact != (rho > 1.0 + SPECTRAL_MARGIN) {
            self.disagreements
                .push(format!("{}: exact={exact} rho={rho}", what()));
        }
    }

    pub fn merge(&mut self, other: SpectralAudit) {
        self.checked += other.checked;
        self.disagreements.extend(other.disagreements);
    }
}

/// First product with `rho > 1`, scanning `m` ascending, then length `k`,
/// then the necklace in lexicographic order, horizontal before vertical.
pub fn find_positivity_witness(
    set: TileSet,
    config: &SearchConfig,
) -> Result<Option<PositivityWitness>, BoundError> {
    find_positivity_witness_audited(set, config, &mut SpectralAudit::default())
}

/// [`find_positivity_witness`], also checking every product's float radius
/// against the exact test.
pub fn find_positivity_witness_audited(
    set: TileSet,
    config: &SearchConfig,
    audit: &mut SpectralAudit,
) -> Result<Option<PositivityWitness>, BoundError> {
    let sequences: Vec<Vec<Vec<u8>>> = (1..=config.k_max).map(necklaces).collect();
    for m in 1..=config.m_max {
        let families = [
            connecting_family(set, m, Direction::Horizontal)?,
            connecting_family(set, m, Direction::Vertical)?,
        ];
        for betas in sequences.iter().flatten() {
            for (family, direction) in families.iter().zip(Direction::BOTH) {
                let product = product_in(family, betas)?;
                let exact = exceeds_one(&product);
                let rho = spectral_radius(&product);
                audit.record(exact, rho, || {
                    format!("{set:?} {direction} m={m} betas={betas:?}")
                });
                if exact {
                    return Ok(Some(PositivityWitness {
                        direction,
                        m,
                        betas: betas.clone(),
                        rho,
                        bound: rho.ln() / (m * betas.len()) as f64,
                    }));
                }
            }
        }
    }
    Ok(None)
}
