use std::io::Write;

use serde::Serialize;

use wang_entropy::census::CensusReport;
use wang_entropy::tile::{format_tileset, TileSetStyle};

#[derive(Serialize)]
struct Row {
    mask: String,
    tiles: String,
    orbit_size: usize,
    verdict: String,
    generators: usize,
    remainder: String,
    pure_cycle: bool,
    marginal_positive: bool,
    saturated_zero: bool,
    direction: Option<String>,
    m: Option<usize>,
    betas: Option<String>,
    rho: Option<f64>,
    bound_nats: Option<f64>,
    proposition: Option<String>,
    group_element: Option<usize>,
    container: Option<String>,
    vanishing_size: Option<usize>,
}

/// One row per canonical class, in report order.
pub fn write_csv<W: Write>(out: W, report: &CensusReport) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let indices = |s| format_tileset(s, TileSetStyle::Indices);
    for r in &report.records {
        let c = &r.classification;
        let w = c.witness.as_ref();
        let z = c.certificate.as_ref();
        writer.serialize(Row {
            mask: format_tileset(c.set, TileSetStyle::Hex),
            tiles: indices(c.set),
            orbit_size: r.orbit_size,
            verdict: c.verdict.to_string(),
            generators: c.decomposition.generators.len(),
            remainder: indices(c.decomposition.remainder),
            pure_cycle: r.pure_cycle,
            marginal_positive: r.marginal_positive,
            saturated_zero: r.saturated_zero,
            direction: w.map(|w| w.direction.to_string()),
            m: w.map(|w| w.m),
            betas: w.map(|w| {
                w.betas
                    .iter()
                    .map(u8::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            }),
            rho: w.map(|w| w.rho),
            bound_nats: w.map(|w| w.bound),
            proposition: z.map(|z| z.proposition.to_string()),
            group_element: z.map(|z| z.group_element.index()),
            container: z.and_then(|z| z.container).map(indices),
            vanishing_size: r.vanishing_size,
        })?;
    }
    writer.flush()?;
    Ok(())
}
