//! The constructed integers: one per literal, the dummy integers, the interval
//! endpoints and the generator sets built from them.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use super::zones::{layout_of, Zone, ZoneLayout};
use crate::error::{Error, Result};
use crate::sat::{Block, Literal, PartitionedFormula};
use crate::semigroup::GeneratorSet;

/// Largest low-zone width for which F-witness sums are enumerated.
pub const MAX_F_ENUMERATION_WIDTH: u32 = 24;

/// The integer simulating one literal.
///
/// An X-literal gets 1S weight `3 + 2l`, a Y-literal `2 + 2l`, where `l` is the
/// number of clauses containing it; each such clause sets its bit in C1 and C2.
pub fn h_literal(phi: &PartitionedFormula, layout: &ZoneLayout, lit: Literal) -> Result<BigUint> {
    let limit = match lit.var.block {
        Block::X => phi.k1(),
        Block::Y => phi.k2(),
    };
    if lit.var.index == 0 || lit.var.index > limit {
        return Err(Error::InvalidInput(format!(
            "literal {lit} does not belong to the formula"
        )));
    }
    let occurrences = phi.occurrences(lit);
    let l = occurrences.len() as u32;
    let i = lit.var.index;
    let mut value = match lit.var.block {
        Block::X => {
            let mut v = BigUint::from(3 + 2 * l) * layout.d0()
                + layout.bit(Zone::X2, i)
                + layout.bit(Zone::X1, i);
            if lit.positive {
                v += layout.bit(Zone::XA, i);
            }
            v
        }
        Block::Y => {
            BigUint::from(2 + 2 * l) * layout.d0()
                + layout.bit(Zone::Y2, i)
                + layout.bit(Zone::Y1, i)
        }
    };
    for j in occurrences {
        value += layout.bit(Zone::C2, j) + layout.bit(Zone::C1, j);
    }
    Ok(value)
}

/// Owner of a family of dummy integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DummyTag {
    X(u32),
    Y(u32),
    Clause(u32),
}

impl DummyTag {
    /// Number of bits in β: 3 for X tags, 2 otherwise.
    pub fn beta_len(self) -> u32 {
        match self {
            DummyTag::X(_) => 3,
            DummyTag::Y(_) | DummyTag::Clause(_) => 2,
        }
    }
}

impl fmt::Display for DummyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DummyTag::X(i) => write!(f, "x{i}"),
            DummyTag::Y(i) => write!(f, "y{i}"),
            DummyTag::Clause(i) => write!(f, "c{i}"),
        }
    }
}

/// `β` written as a bit string, most significant bit (`b2` or `b1`) first.
pub fn beta_string(tag: DummyTag, beta: u8) -> String {
    let n = tag.beta_len();
    (0..n)
        .rev()
        .map(|b| if beta >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn parse_beta(tag: DummyTag, beta: &str) -> Result<u8> {
    if beta.len() != tag.beta_len() as usize {
        return Err(Error::InvalidInput(format!(
            "β for {tag} needs {} bits, got `{beta}`",
            tag.beta_len()
        )));
    }
    u8::from_str_radix(beta, 2).map_err(|_| Error::InvalidInput(format!("bad bit string `{beta}`")))
}

/// The dummy integer `d(tag, β)` with β given as a bit string such as `"110"`.
pub fn dummy_integer(layout: &ZoneLayout, tag: DummyTag, beta: &str) -> Result<BigUint> {
    dummy_value(layout, tag, parse_beta(tag, beta)?)
}

/// The mirrored bit of a dummy is rotated one index within its zone, so a
/// dummy never looks like a consistent half of a literal integer.
pub(crate) fn dummy_value(layout: &ZoneLayout, tag: DummyTag, beta: u8) -> Result<BigUint> {
    if beta == 0 || beta >> tag.beta_len() != 0 {
        return Err(Error::Precondition(format!(
            "β for {tag} must be a nonzero {}-bit value",
            tag.beta_len()
        )));
    }
    let b = |k: u32| beta >> k & 1 == 1;
    let (k1, k2, k3) = (layout.k1, layout.k2, layout.k3);
    let mut v = layout.d0()
        * if matches!(tag, DummyTag::X(_)) {
            3u32
        } else {
            2
        };
    let (i, high, low, width) = match tag {
        DummyTag::X(i) => {
            check_index(i, k1, tag)?;
            if b(0) {
                v += layout.bit(Zone::XA, i);
            }
            (i, Zone::X2, Zone::X1, k1)
        }
        DummyTag::Y(i) => {
            check_index(i, k2, tag)?;
            (i, Zone::Y2, Zone::Y1, k2)
        }
        DummyTag::Clause(i) => {
            check_index(i, k3, tag)?;
            (i, Zone::C2, Zone::C1, k3)
        }
    };
    let (hi_bit, lo_bit) = match tag {
        DummyTag::X(_) => (2, 1),
        _ => (1, 0),
    };
    if b(hi_bit) {
        v += layout.bit(high, i);
    }
    if b(lo_bit) {
        v += layout.bit(low, i % width + 1);
    }
    Ok(v)
}

fn check_index(i: u32, limit: u32, tag: DummyTag) -> Result<()> {
    if i == 0 || i > limit {
        return Err(Error::InvalidInput(format!(
            "dummy tag {tag} is outside its block"
        )));
    }
    Ok(())
}

/// Every dummy tag of a layout in X, Y, clause order.
pub fn dummy_tags(layout: &ZoneLayout) -> Vec<DummyTag> {
    (1..=layout.k1)
        .map(DummyTag::X)
        .chain((1..=layout.k2).map(DummyTag::Y))
        .chain((1..=layout.k3).map(DummyTag::Clause))
        .collect()
}

/// A dummy integer with its provenance. `promoted` marks the two members of
/// the last X tag that carry an extra `d0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dummy {
    pub tag: DummyTag,
    pub beta: u8,
    pub promoted: bool,
    pub value: BigUint,
}

impl Dummy {
    pub fn label(&self) -> String {
        format!("{} {}", self.tag, beta_string(self.tag, self.beta))
    }
}

fn is_special(layout: &ZoneLayout, tag: DummyTag, beta: u8) -> bool {
    tag == DummyTag::X(layout.k1) && (beta == 0b110 || beta == 0b111)
}

/// D⁺: every dummy with nonzero β, with `d(x_k1, 110)` and `d(x_k1, 111)` raised by `d0`.
pub fn dummies_plus(layout: &ZoneLayout) -> Vec<Dummy> {
    let d0 = layout.d0();
    let mut out = Vec::new();
    for tag in dummy_tags(layout) {
        for beta in 1..1u8 << tag.beta_len() {
            let mut value = dummy_value(layout, tag, beta).expect("tags come from the layout");
            let promoted = is_special(layout, tag, beta);
            if promoted {
                value += &d0;
            }
            out.push(Dummy {
                tag,
                beta,
                promoted,
                value,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    NonRep,
    BoundedGap,
    Gaps,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::NonRep => "nonrep",
            Variant::BoundedGap => "bounded",
            Variant::Gaps => "gaps",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonrep" => Ok(Variant::NonRep),
            "bounded" => Ok(Variant::BoundedGap),
            "gaps" => Ok(Variant::Gaps),
            _ => Err(Error::InvalidInput(format!(
                "unknown variant `{s}` (expected nonrep, bounded or gaps)"
            ))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything a reduction produces for one formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionBundle {
    pub variant: Variant,
    pub formula: PartitionedFormula,
    pub layout: ZoneLayout,
    /// One integer per literal, in the order of [`PartitionedFormula::literals`].
    pub h: Vec<(Literal, BigUint)>,
    /// D⁺; empty for [`Variant::NonRep`].
    pub dummies_plus: Vec<Dummy>,
    /// `d(x_k1, 110)` and `d(x_k1, 111)`; only for [`Variant::Gaps`].
    pub extra_s1: Vec<BigUint>,
    pub lambda: BigUint,
    pub mu: BigUint,
    /// `2^(3k1 + 2k2 + 2k3 - 2)`; only for [`Variant::Gaps`].
    pub f_closed_form: Option<BigUint>,
}

/// `λ = W·d0 + (d0 - 2^k1)`: every low zone full except XA.
pub fn lambda(layout: &ZoneLayout) -> BigUint {
    let d0 = layout.d0();
    &d0 * layout.low_width() + &d0 - (BigUint::one() << layout.k1)
}

/// `μ = (W + 1)·d0 - 1`: every low zone full.
pub fn mu(layout: &ZoneLayout) -> BigUint {
    layout.d0() * (layout.low_width() + 1) - 1u32
}

fn base_bundle(phi: &PartitionedFormula, variant: Variant) -> ReductionBundle {
    let layout = layout_of(phi);
    let h = phi
        .literals()
        .into_iter()
        .map(|lit| {
            let v = h_literal(phi, &layout, lit).expect("literal comes from the formula");
            (lit, v)
        })
        .collect();
    ReductionBundle {
        variant,
        formula: phi.clone(),
        layout,
        h,
        dummies_plus: Vec::new(),
        extra_s1: Vec::new(),
        lambda: lambda(&layout),
        mu: mu(&layout),
        f_closed_form: None,
    }
}

/// H ∪ {d0} with the interval [λ, μ].
pub fn reduce_to_nonrep(phi: &PartitionedFormula) -> ReductionBundle {
    base_bundle(phi, Variant::NonRep)
}

/// s₀ = H ∪ D⁺ ∪ {d0} with bound λ.
pub fn build_bounded(phi: &PartitionedFormula) -> ReductionBundle {
    let mut b = base_bundle(phi, Variant::BoundedGap);
    b.dummies_plus = dummies_plus(&b.layout);
    b
}

/// s₀ as for [`build_bounded`] plus s₁ = s₀ ∪ {d(x_k1,110), d(x_k1,111)}.
pub fn build_gaps_bundle(phi: &PartitionedFormula) -> ReductionBundle {
    let mut b = build_bounded(phi);
    b.variant = Variant::Gaps;
    let special = DummyTag::X(b.layout.k1);
    b.extra_s1 = [0b110, 0b111]
        .iter()
        .map(|&beta| dummy_value(&b.layout, special, beta).expect("valid tag"))
        .collect();
    b.f_closed_form = Some(BigUint::one() << (b.layout.low_width() - 2));
    b
}

/// Builds the bundle for any variant.
pub fn build(phi: &PartitionedFormula, variant: Variant) -> ReductionBundle {
    match variant {
        Variant::NonRep => reduce_to_nonrep(phi),
        Variant::BoundedGap => build_bounded(phi),
        Variant::Gaps => build_gaps_bundle(phi),
    }
}

/// Set union: equal values from different families collapse to one generator.
fn generator_set(values: impl IntoIterator<Item = BigUint>) -> GeneratorSet {
    let mut v: Vec<BigUint> = values.into_iter().collect();
    v.sort();
    v.dedup();
    GeneratorSet::new(v).expect("constructed integers are distinct and at least d0")
}

impl ReductionBundle {
    pub fn d0(&self) -> BigUint {
        self.layout.d0()
    }

    pub fn h_values(&self) -> Vec<BigUint> {
        self.h.iter().map(|(_, v)| v.clone()).collect()
    }

    pub fn h_of(&self, lit: Literal) -> Option<&BigUint> {
        self.h.iter().find(|(l, _)| *l == lit).map(|(_, v)| v)
    }

    /// H ∪ {d0}.
    pub fn nonrep_generators(&self) -> GeneratorSet {
        generator_set(self.h_values().into_iter().chain([self.d0()]))
    }

    /// H ∪ D⁺ ∪ {d0}.
    pub fn s0(&self) -> Result<GeneratorSet> {
        if self.variant == Variant::NonRep {
            return Err(Error::Precondition(
                "s0 needs a bounded or gaps bundle".into(),
            ));
        }
        Ok(generator_set(
            self.h_values()
                .into_iter()
                .chain(self.dummies_plus.iter().map(|d| d.value.clone()))
                .chain([self.d0()]),
        ))
    }

    /// s₀ ∪ {d(x_k1,110), d(x_k1,111)}.
    pub fn s1(&self) -> Result<GeneratorSet> {
        if self.variant != Variant::Gaps {
            return Err(Error::Precondition("s1 needs a gaps bundle".into()));
        }
        let s0 = self.s0()?;
        Ok(generator_set(
            s0.elements()
                .iter()
                .cloned()
                .chain(self.extra_s1.iter().cloned()),
        ))
    }

    /// D̃⁺ = D⁺ ∪ {d(x_k1,110), d(x_k1,111)}, i.e. s₁ without H and d0.
    pub fn dummies_tilde_plus(&self) -> Result<Vec<BigUint>> {
        if self.variant != Variant::Gaps {
            return Err(Error::Precondition("D̃⁺ needs a gaps bundle".into()));
        }
        Ok(self
            .dummies_plus
            .iter()
            .map(|d| d.value.clone())
            .chain(self.extra_s1.iter().cloned())
            .collect())
    }

    /// The generator set whose gaps the variant counts.
    pub fn target_generators(&self) -> GeneratorSet {
        match self.variant {
            Variant::NonRep => self.nonrep_generators(),
            _ => self.s0().expect("not NonRep"),
        }
    }

    /// The integer of [λ, μ] whose XA zone encodes `x_bits` (bit `i-1` for x_i).
    pub fn interval_member(&self, x_bits: u64) -> BigUint {
        &self.lambda + x_bits
    }
}

/// Sums over all selections B that take exactly one of `d(x_k1,110)`, `d(x_k1,111)`,
/// at most one nonzero-β dummy of every other X tag and at most one of every Y
/// and clause tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FWitnessSums {
    /// Number of selections, `2·8^(k1-1)·4^(k2+k3)`.
    pub selections: u64,
    /// Distinct sums, ascending.
    pub sums: Vec<u64>,
}

impl FWitnessSums {
    /// True iff no two selections share a sum.
    pub fn all_distinct(&self) -> bool {
        self.sums.len() as u64 == self.selections
    }
}

pub fn enumerate_f_witness_sums(phi: &PartitionedFormula) -> Result<FWitnessSums> {
    let layout = layout_of(phi);
    let w = layout.low_width();
    if w > MAX_F_ENUMERATION_WIDTH {
        return Err(Error::budget(
            "F-witness enumeration",
            format!("2^{} selections", w - 2),
            format!("2^{}", MAX_F_ENUMERATION_WIDTH - 2),
        ));
    }
    let as_u64 = |v: BigUint| v.to_u64().expect("below 2^32 for enumerable widths");
    let mut sums: Vec<u64> = vec![0];
    for tag in dummy_tags(&layout) {
        let options: Vec<u64> = if tag == DummyTag::X(layout.k1) {
            [0b110, 0b111]
                .iter()
                .map(|&b| as_u64(dummy_value(&layout, tag, b).unwrap()))
                .collect()
        } else {
            std::iter::once(0)
                .chain(
                    (1..1u8 << tag.beta_len())
                        .map(|b| as_u64(dummy_value(&layout, tag, b).unwrap())),
                )
                .collect()
        };
        sums = sums
            .par_iter()
            .flat_map_iter(|&s| options.iter().map(move |&o| s + o))
            .collect();
    }
    let selections = sums.len() as u64;
    sums.par_sort_unstable();
    sums.dedup();
    Ok(FWitnessSums { selections, sums })
}
