//! Text tables of constructed integers: 1S in decimal, then every zone from
//! C2 down to XA with its most significant bit first.

use num_bigint::BigUint;

use super::construction::{beta_string, ReductionBundle};
use super::zones::{Zone, ZoneLayout};
use crate::sat::render_grid;

const COLUMNS: [Zone; 7] = [
    Zone::C2,
    Zone::C1,
    Zone::Y2,
    Zone::Y1,
    Zone::X2,
    Zone::X1,
    Zone::XA,
];

/// One row per `(label, integer)`, under a header naming the zones.
pub fn render_zone_table(layout: &ZoneLayout, rows: &[(String, BigUint)]) -> String {
    let mut header = vec!["".to_string(), "1S".to_string()];
    header.extend(COLUMNS.iter().map(|z| z.name().to_string()));
    let mut grid = vec![header];
    for (label, n) in rows {
        let mut line = vec![label.clone(), (n >> layout.low_width()).to_string()];
        line.extend(COLUMNS.iter().map(|&z| layout.zone_bits(n, z)));
        grid.push(line);
    }
    render_grid(&grid)
}

/// Rows `x1 1`, `x1 0`, ... for every literal integer.
pub fn literal_rows(bundle: &ReductionBundle) -> Vec<(String, BigUint)> {
    bundle
        .h
        .iter()
        .map(|(lit, v)| {
            let name = crate::sat::Literal::pos(lit.var).to_string();
            (format!("{name} {}", u8::from(lit.positive)), v.clone())
        })
        .collect()
}

/// Rows for the unpromoted dummies (`promoted = false`) or the two promoted ones.
pub fn dummy_rows(bundle: &ReductionBundle, promoted: bool) -> Vec<(String, BigUint)> {
    bundle
        .dummies_plus
        .iter()
        .filter(|d| d.promoted == promoted)
        .map(|d| (d.label(), d.value.clone()))
        .collect()
}

/// Rows for `d(x_k1, 110)` and `d(x_k1, 111)` without the extra `d0`.
pub fn extra_s1_rows(bundle: &ReductionBundle) -> Vec<(String, BigUint)> {
    let tag = super::construction::DummyTag::X(bundle.layout.k1);
    bundle
        .extra_s1
        .iter()
        .zip([0b110u8, 0b111])
        .map(|(v, b)| (format!("{tag} {}", beta_string(tag, b)), v.clone()))
        .collect()
}

pub fn endpoint_rows(bundle: &ReductionBundle) -> Vec<(String, BigUint)> {
    vec![
        ("lambda".to_string(), bundle.lambda.clone()),
        ("mu".to_string(), bundle.mu.clone()),
    ]
}
