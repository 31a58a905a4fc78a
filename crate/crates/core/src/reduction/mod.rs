//! Zone-encoded reductions from the Π₁ one-in-three count to gap counting,
//! and the clause gadget from #SAT to #1IN3SAT.

mod construction;
mod gadget;
mod render;
mod zones;

pub use construction::{
    beta_string, build, build_bounded, build_gaps_bundle, dummies_plus, dummy_integer, dummy_tags,
    enumerate_f_witness_sums, h_literal, lambda, mu, reduce_to_nonrep, Dummy, DummyTag,
    FWitnessSums, ReductionBundle, Variant, MAX_F_ENUMERATION_WIDTH,
};
pub use gadget::{gadget_clauses, gadget_extensions, one_in_three_gadget};
pub use render::{dummy_rows, endpoint_rows, extra_s1_rows, literal_rows, render_zone_table};
pub use zones::{
    carry_free, is_consistent, layout_of, popcount, Zone, ZoneDecomposition, ZoneLayout,
};
