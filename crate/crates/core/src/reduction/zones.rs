//! Bit zones of the constructed integers.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::sat::PartitionedFormula;

/// One of the seven low zones. The 1S part (the quotient by `d0`) is not a zone
/// of fixed width and is handled separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Zone {
    XA,
    X1,
    X2,
    Y1,
    Y2,
    C1,
    C2,
}

impl Zone {
    /// Low to high.
    pub const ALL: [Zone; 7] = [
        Zone::XA,
        Zone::X1,
        Zone::X2,
        Zone::Y1,
        Zone::Y2,
        Zone::C1,
        Zone::C2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Zone::XA => "XA",
            Zone::X1 => "X1",
            Zone::X2 => "X2",
            Zone::Y1 => "Y1",
            Zone::Y2 => "Y2",
            Zone::C1 => "C1",
            Zone::C2 => "C2",
        }
    }
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Zone geometry for a formula with block sizes `k1`, `k2` and `k3` clauses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZoneLayout {
    pub k1: u32,
    pub k2: u32,
    pub k3: u32,
}

pub fn layout_of(phi: &PartitionedFormula) -> ZoneLayout {
    ZoneLayout::new(phi.k1(), phi.k2(), phi.k3())
}

impl ZoneLayout {
    pub fn new(k1: u32, k2: u32, k3: u32) -> Self {
        ZoneLayout { k1, k2, k3 }
    }

    /// Total width of the low zones, `3k1 + 2k2 + 2k3`.
    pub fn low_width(&self) -> u32 {
        3 * self.k1 + 2 * self.k2 + 2 * self.k3
    }

    /// `2^low_width`.
    pub fn d0(&self) -> BigUint {
        BigUint::one() << self.low_width()
    }

    pub fn offset(&self, zone: Zone) -> u32 {
        let (k1, k2, k3) = (self.k1, self.k2, self.k3);
        match zone {
            Zone::XA => 0,
            Zone::X1 => k1,
            Zone::X2 => 2 * k1,
            Zone::Y1 => 3 * k1,
            Zone::Y2 => 3 * k1 + k2,
            Zone::C1 => 3 * k1 + 2 * k2,
            Zone::C2 => 3 * k1 + 2 * k2 + k3,
        }
    }

    pub fn width(&self, zone: Zone) -> u32 {
        match zone {
            Zone::XA | Zone::X1 | Zone::X2 => self.k1,
            Zone::Y1 | Zone::Y2 => self.k2,
            Zone::C1 | Zone::C2 => self.k3,
        }
    }

    /// `2^(offset + index - 1)`: the bit of a 1-based index inside a zone.
    pub fn bit(&self, zone: Zone, index: u32) -> BigUint {
        assert!(
            index >= 1 && index <= self.width(zone),
            "index {index} outside zone {zone}"
        );
        BigUint::one() << (self.offset(zone) + index - 1)
    }

    pub fn decompose(&self, n: &BigUint) -> ZoneDecomposition {
        let w = self.low_width();
        let set = |zone: Zone| -> BTreeSet<u32> {
            let off = self.offset(zone) as u64;
            (1..=self.width(zone))
                .filter(|&i| n.bit(off + i as u64 - 1))
                .collect()
        };
        ZoneDecomposition {
            one_s: n >> w,
            xa: set(Zone::XA),
            x1: set(Zone::X1),
            x2: set(Zone::X2),
            y1: set(Zone::Y1),
            y2: set(Zone::Y2),
            c1: set(Zone::C1),
            c2: set(Zone::C2),
        }
    }

    pub fn recompose(&self, d: &ZoneDecomposition) -> BigUint {
        let mut n = &d.one_s << self.low_width();
        for zone in Zone::ALL {
            for &i in d.zone(zone) {
                n.set_bit((self.offset(zone) + i - 1) as u64, true);
            }
        }
        n
    }

    /// Zone contents as bit strings, most significant bit first.
    pub fn zone_bits(&self, n: &BigUint, zone: Zone) -> String {
        let off = self.offset(zone) as u64;
        (0..self.width(zone) as u64)
            .rev()
            .map(|i| if n.bit(off + i) { '1' } else { '0' })
            .collect()
    }
}

/// The 1S quotient and the index set held by every low zone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ZoneDecomposition {
    pub one_s: BigUint,
    pub xa: BTreeSet<u32>,
    pub x1: BTreeSet<u32>,
    pub x2: BTreeSet<u32>,
    pub y1: BTreeSet<u32>,
    pub y2: BTreeSet<u32>,
    pub c1: BTreeSet<u32>,
    pub c2: BTreeSet<u32>,
}

impl ZoneDecomposition {
    pub fn zone(&self, zone: Zone) -> &BTreeSet<u32> {
        match zone {
            Zone::XA => &self.xa,
            Zone::X1 => &self.x1,
            Zone::X2 => &self.x2,
            Zone::Y1 => &self.y1,
            Zone::Y2 => &self.y2,
            Zone::C1 => &self.c1,
            Zone::C2 => &self.c2,
        }
    }

    pub fn is_low_zero(&self) -> bool {
        Zone::ALL.iter().all(|&z| self.zone(z).is_empty())
    }
}

/// Mirrored zones agree, XA ⊆ X1, and 1S = 3|X1| + 2|Y1| + 2|C1|.
pub fn is_consistent(layout: &ZoneLayout, e: &BigUint) -> bool {
    let d = layout.decompose(e);
    let weight = 3 * d.x1.len() + 2 * d.y1.len() + 2 * d.c1.len();
    d.c2 == d.c1
        && d.y2 == d.y1
        && d.x2 == d.x1
        && d.xa.is_subset(&d.x1)
        && d.one_s == BigUint::from(weight)
}

/// No low-zone bit is set in more than one addend; the 1S parts may add freely.
pub fn carry_free(layout: &ZoneLayout, addends: &[BigUint]) -> bool {
    let mask = layout.d0() - 1u32;
    let mut seen = BigUint::zero();
    for a in addends {
        let low = a & &mask;
        if !(&seen & &low).is_zero() {
            return false;
        }
        seen |= low;
    }
    true
}

pub fn popcount(n: &BigUint) -> u64 {
    n.count_ones()
}
