//! The clause gadget that turns satisfiability into one-in-three satisfiability
//! with the same number of solutions.

use crate::error::Result;
use crate::sat::{Clause, Literal, PartitionedFormula, Variable};

#[derive(Clone, Copy)]
enum Slot {
    /// One of the original literals, 0-based.
    Z(usize),
    /// One of the nine fresh variables, 1-based.
    C(u32),
}

use Slot::{C, Z};

const GADGET: [[Slot; 3]; 7] = [
    [Z(0), C(1), C(2)],
    [Z(1), C(2), C(3)],
    [Z(2), C(5), C(6)],
    [Z(2), C(6), C(7)],
    [C(1), C(3), C(4)],
    [C(5), C(7), C(8)],
    [C(2), C(6), C(9)],
];

/// The seven clauses replacing `z1 ∨ z2 ∨ z3`, given the nine fresh variables.
pub fn gadget_clauses(z: [Literal; 3], fresh: [Variable; 9]) -> Result<[Clause; 7]> {
    let lit = |s: Slot| match s {
        Z(i) => z[i],
        C(t) => Literal::pos(fresh[t as usize - 1]),
    };
    let mut out = Vec::with_capacity(7);
    for [a, b, c] in GADGET {
        out.push(Clause::new(lit(a), lit(b), lit(c))?);
    }
    Ok(out.try_into().expect("seven clauses"))
}

/// Replaces every clause by its gadget. The fresh variables of clause `j` join
/// the counted block as `x_{k1 + 9(j-1) + t}` for `t = 1..9`.
pub fn one_in_three_gadget(phi: &PartitionedFormula) -> Result<PartitionedFormula> {
    let k1 = phi.k1();
    let mut clauses = Vec::with_capacity(7 * phi.clauses().len());
    for (j, clause) in phi.clauses().iter().enumerate() {
        let base = k1 + 9 * j as u32;
        let fresh: [Variable; 9] = std::array::from_fn(|t| Variable::x(base + t as u32 + 1));
        clauses.extend(gadget_clauses(*clause.literals(), fresh)?);
    }
    PartitionedFormula::new(clauses, k1 + 9 * phi.k3(), phi.k2())
}

/// All assignments of the nine fresh variables (bit `t-1` for variable `t`)
/// that give every gadget clause exactly one true literal, for fixed values of
/// the three original literals.
pub fn gadget_extensions(z: [bool; 3]) -> Vec<u16> {
    (0u16..1 << 9)
        .filter(|&c| {
            GADGET.iter().all(|clause| {
                clause
                    .iter()
                    .filter(|&&s| match s {
                        Z(i) => z[i],
                        C(t) => c >> (t - 1) & 1 == 1,
                    })
                    .count()
                    == 1
            })
        })
        .collect()
}
