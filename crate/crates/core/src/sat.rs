//! Partitioned 3-CNF formulas and exhaustive counting oracles for #SAT,
//! #1IN3SAT and the one-quantifier count #·Π₁1IN3SAT.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::SweepRng;

/// Ceiling on the number of total assignments an exhaustive count may visit.
pub const MAX_EXHAUSTIVE_VARIABLES: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Block {
    /// Counted variables.
    X,
    /// Universally quantified variables.
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub block: Block,
    /// 1-based index within the block.
    pub index: u32,
}

impl Variable {
    pub fn x(index: u32) -> Self {
        Variable {
            block: Block::X,
            index,
        }
    }

    pub fn y(index: u32) -> Self {
        Variable {
            block: Block::Y,
            index,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: Variable,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: Variable) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: Variable) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.positive { "" } else { "-" };
        let block = match self.var.block {
            Block::X => 'x',
            Block::Y => 'y',
        };
        write!(f, "{sign}{block}{}", self.var.index)
    }
}

impl FromStr for Literal {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (positive, rest) = match s.strip_prefix('-') {
            Some(r) => (false, r),
            None => (true, s),
        };
        let mut chars = rest.chars();
        let block = match chars.next() {
            Some('x') => Block::X,
            Some('y') => Block::Y,
            _ => return Err(format!("literal `{s}` must look like x3, -x3, y1 or -y1")),
        };
        let index: u32 = chars
            .as_str()
            .parse()
            .map_err(|_| format!("bad variable index in `{s}`"))?;
        if index == 0 {
            return Err(format!("variable indices start at 1 (`{s}`)"));
        }
        Ok(Literal {
            var: Variable { block, index },
            positive,
        })
    }
}

/// Three literals over pairwise distinct variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: [Literal; 3],
}

impl Clause {
    pub fn new(a: Literal, b: Literal, c: Literal) -> Result<Self> {
        if a.var == b.var || a.var == c.var || b.var == c.var {
            return Err(Error::InvalidInput(format!(
                "clause {a} {b} {c} repeats a variable"
            )));
        }
        Ok(Clause {
            literals: [a, b, c],
        })
    }

    pub fn literals(&self) -> &[Literal; 3] {
        &self.literals
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.literals.contains(&lit)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.literals;
        write!(f, "{a} {b} {c}")
    }
}

/// A 3-CNF formula over a counted block X and a quantified block Y.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionedFormula {
    clauses: Vec<Clause>,
    k1: u32,
    k2: u32,
}

impl PartitionedFormula {
    /// Requires `k1 >= 2`, at least two clauses, every index in range and
    /// every variable of both blocks occurring somewhere.
    pub fn new(clauses: Vec<Clause>, k1: u32, k2: u32) -> Result<Self> {
        if k1 < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 X variables, got {k1}"
            )));
        }
        if clauses.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 clauses, got {}",
                clauses.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for lit in clauses.iter().flat_map(|c| c.literals) {
            let limit = match lit.var.block {
                Block::X => k1,
                Block::Y => k2,
            };
            if lit.var.index == 0 || lit.var.index > limit {
                return Err(Error::InvalidInput(format!(
                    "literal {lit} is outside the declared block size {limit}"
                )));
            }
            seen.insert(lit.var);
        }
        let missing = (1..=k1)
            .map(Variable::x)
            .chain((1..=k2).map(Variable::y))
            .find(|v| !seen.contains(v));
        if let Some(v) = missing {
            return Err(Error::InvalidInput(format!(
                "variable {} occurs in no clause",
                Literal::pos(v)
            )));
        }
        Ok(PartitionedFormula { clauses, k1, k2 })
    }

    /// Block sizes are inferred from the largest index used.
    pub fn from_clauses(clauses: Vec<Clause>) -> Result<Self> {
        let max_of = |b: Block| {
            clauses
                .iter()
                .flat_map(|c| c.literals)
                .filter(|l| l.var.block == b)
                .map(|l| l.var.index)
                .max()
                .unwrap_or(0)
        };
        let (k1, k2) = (max_of(Block::X), max_of(Block::Y));
        Self::new(clauses, k1, k2)
    }

    /// Parses the line format: one clause per line, e.g. `-x1 x2 y1`.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut clauses = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lits = line
                .split_whitespace()
                .map(Literal::from_str)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|msg| Error::Parse { line: no + 1, msg })?;
            let [a, b, c] = lits[..] else {
                return Err(Error::Parse {
                    line: no + 1,
                    msg: format!("expected 3 literals, found {}", lits.len()),
                });
            };
            let clause = Clause::new(a, b, c).map_err(|e| Error::Parse {
                line: no + 1,
                msg: e.to_string(),
            })?;
            clauses.push(clause);
        }
        Self::from_clauses(clauses)
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn k1(&self) -> u32 {
        self.k1
    }

    pub fn k2(&self) -> u32 {
        self.k2
    }

    pub fn k3(&self) -> u32 {
        self.clauses.len() as u32
    }

    /// All `2(k1 + k2)` literals: X before Y, index ascending, positive first.
    pub fn literals(&self) -> Vec<Literal> {
        (1..=self.k1)
            .map(Variable::x)
            .chain((1..=self.k2).map(Variable::y))
            .flat_map(|v| [Literal::pos(v), Literal::neg(v)])
            .collect()
    }

    /// Indices (1-based) of the clauses containing `lit`.
    pub fn occurrences(&self, lit: Literal) -> Vec<u32> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(lit))
            .map(|(j, _)| j as u32 + 1)
            .collect()
    }

    fn require_budget(&self) -> Result<()> {
        let n = self.k1 + self.k2;
        if n > MAX_EXHAUSTIVE_VARIABLES {
            return Err(Error::budget(
                "exhaustive enumeration",
                format!("2^{n} assignments"),
                format!("2^{MAX_EXHAUSTIVE_VARIABLES}"),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for PartitionedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Truth values for both blocks; bit `i - 1` holds the variable with index `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    x: u64,
    y: u64,
    k1: u32,
    k2: u32,
}

impl Assignment {
    pub fn new(x: u64, k1: u32, y: u64, k2: u32) -> Result<Self> {
        if k1 > 64 || k2 > 64 {
            return Err(Error::InvalidInput(
                "assignments cover at most 64 variables per block".into(),
            ));
        }
        let fits = |bits: u64, k: u32| k == 64 || bits >> k == 0;
        if !fits(x, k1) || !fits(y, k2) {
            return Err(Error::InvalidInput(
                "assignment has bits beyond its block".into(),
            ));
        }
        Ok(Assignment { x, y, k1, k2 })
    }

    /// Parses bit strings `b1 b2 … bn`, where `b_i` is the value of the i-th variable.
    pub fn from_bits(x: &str, y: &str) -> Result<Self> {
        let parse = |s: &str| -> Result<(u64, u32)> {
            let mut v = 0u64;
            for (i, ch) in s.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => v |= 1 << i,
                    _ => return Err(Error::InvalidInput(format!("bad bit string `{s}`"))),
                }
            }
            Ok((v, s.len() as u32))
        };
        let (xv, k1) = parse(x)?;
        let (yv, k2) = parse(y)?;
        Self::new(xv, k1, yv, k2)
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn y_bits(&self) -> u64 {
        self.y
    }

    pub fn value(&self, var: Variable) -> bool {
        let (bits, k) = match var.block {
            Block::X => (self.x, self.k1),
            Block::Y => (self.y, self.k2),
        };
        assert!(
            var.index >= 1 && var.index <= k,
            "variable outside the assignment"
        );
        bits >> (var.index - 1) & 1 == 1
    }

    pub fn satisfies(&self, lit: Literal) -> bool {
        self.value(lit.var) == lit.positive
    }
}

pub fn bit_string(bits: u64, width: u32) -> String {
    (0..width)
        .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn true_literal_count(clause: &Clause, sigma: &Assignment) -> u32 {
    clause
        .literals
        .iter()
        .filter(|&&l| sigma.satisfies(l))
        .count() as u32
}

pub fn exactly_one_everywhere(phi: &PartitionedFormula, sigma: &Assignment) -> bool {
    phi.clauses
        .iter()
        .all(|c| true_literal_count(c, sigma) == 1)
}

/// Membership in Φ: even `k` asks for a satisfying assignment, odd `k` for a falsifying one.
pub fn phi_member(k: u32, phi: &PartitionedFormula, sigma: &Assignment) -> bool {
    let satisfied = phi
        .clauses
        .iter()
        .all(|c| true_literal_count(c, sigma) >= 1);
    if k.is_multiple_of(2) {
        satisfied
    } else {
        !satisfied
    }
}

/// Membership in Φ₁/₃: even `k` asks for exactly one true literal per clause, odd `k` for its negation.
pub fn phi13_member(k: u32, phi: &PartitionedFormula, sigma: &Assignment) -> bool {
    let one = exactly_one_everywhere(phi, sigma);
    if k.is_multiple_of(2) {
        one
    } else {
        !one
    }
}

/// Number of assignments satisfying every clause.
pub fn count_models(phi: &PartitionedFormula) -> Result<u64> {
    phi.require_budget()?;
    let mut s = Search::new(phi, Mode::Satisfy);
    Ok(s.count(0))
}

/// Number of assignments with exactly one true literal in every clause.
pub fn count_one_in_three(phi: &PartitionedFormula) -> Result<u64> {
    phi.require_budget()?;
    let mut s = Search::new(phi, Mode::ExactlyOne);
    Ok(s.count(0))
}

/// Number of X-assignments for which no Y-assignment gives exactly one true
/// literal in every clause.
pub fn count_pi1_one_in_three(phi: &PartitionedFormula) -> Result<u64> {
    phi.require_budget()?;
    let mut s = Search::new(phi, Mode::ExactlyOne);
    let good = s.count_good_x(0);
    Ok((1u64 << phi.k1) - good)
}

/// X-assignments (as bit masks) that have no exactly-one Y-extension, ascending.
pub fn pi1_witnesses(phi: &PartitionedFormula) -> Result<Vec<u64>> {
    phi.require_budget()?;
    let mut s = Search::new(phi, Mode::ExactlyOne);
    let mut out = Vec::new();
    for x in 0..1u64 << phi.k1 {
        if !s.has_good_y(x) {
            out.push(x);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Satisfy,
    ExactlyOne,
}

/// Backtracking over variables (X block first) with per-clause counters.
/// Counts are exact; pruning only skips subtrees whose every leaf fails.
struct Search {
    mode: Mode,
    nvars: usize,
    k1: usize,
    occurrences: Vec<Vec<(usize, bool)>>,
    trues: Vec<u8>,
    open: Vec<u8>,
    satisfied: usize,
}

impl Search {
    fn new(phi: &PartitionedFormula, mode: Mode) -> Self {
        let k1 = phi.k1 as usize;
        let nvars = k1 + phi.k2 as usize;
        let mut occurrences = vec![Vec::new(); nvars];
        for (j, c) in phi.clauses.iter().enumerate() {
            for l in c.literals {
                let v = match l.var.block {
                    Block::X => l.var.index as usize - 1,
                    Block::Y => k1 + l.var.index as usize - 1,
                };
                occurrences[v].push((j, l.positive));
            }
        }
        Search {
            mode,
            nvars,
            k1,
            occurrences,
            trues: vec![0; phi.clauses.len()],
            open: vec![3; phi.clauses.len()],
            satisfied: 0,
        }
    }

    /// Applies `v := value`; returns false if some touched clause can no longer pass.
    fn assign(&mut self, v: usize, value: bool) -> bool {
        let mut ok = true;
        for &(c, pos) in &self.occurrences[v] {
            self.open[c] -= 1;
            if pos == value {
                self.trues[c] += 1;
                if self.trues[c] == 1 {
                    self.satisfied += 1;
                }
            }
            ok &= match self.mode {
                Mode::Satisfy => self.open[c] > 0 || self.trues[c] > 0,
                Mode::ExactlyOne => self.trues[c] <= 1 && (self.open[c] > 0 || self.trues[c] == 1),
            };
        }
        ok
    }

    fn unassign(&mut self, v: usize, value: bool) {
        for &(c, pos) in &self.occurrences[v] {
            self.open[c] += 1;
            if pos == value {
                if self.trues[c] == 1 {
                    self.satisfied -= 1;
                }
                self.trues[c] -= 1;
            }
        }
    }

    fn count(&mut self, v: usize) -> u64 {
        if self.mode == Mode::Satisfy && self.satisfied == self.trues.len() {
            return 1 << (self.nvars - v);
        }
        if v == self.nvars {
            return 1;
        }
        let mut total = 0;
        for value in [false, true] {
            if self.assign(v, value) {
                total += self.count(v + 1);
            }
            self.unassign(v, value);
        }
        total
    }

    fn exists(&mut self, v: usize) -> bool {
        if v == self.nvars {
            return true;
        }
        for value in [false, true] {
            let ok = self.assign(v, value) && self.exists(v + 1);
            self.unassign(v, value);
            if ok {
                return true;
            }
        }
        false
    }

    fn count_good_x(&mut self, v: usize) -> u64 {
        if v == self.k1 {
            return self.exists(v) as u64;
        }
        let mut total = 0;
        for value in [false, true] {
            if self.assign(v, value) {
                total += self.count_good_x(v + 1);
            }
            self.unassign(v, value);
        }
        total
    }

    fn has_good_y(&mut self, x: u64) -> bool {
        let mut applied = 0;
        let mut ok = true;
        while applied < self.k1 {
            let value = x >> applied & 1 == 1;
            ok = self.assign(applied, value);
            applied += 1;
            if !ok {
                break;
            }
        }
        let found = ok && self.exists(self.k1);
        for v in (0..applied).rev() {
            self.unassign(v, x >> v & 1 == 1);
        }
        found
    }
}

/// For every `(σx, σy)`, the 1-based indices of clauses with exactly one true literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessMatrix {
    k1: u32,
    k2: u32,
    k3: u32,
    cells: Vec<Vec<u32>>,
}

pub fn witness_matrix(phi: &PartitionedFormula) -> Result<WitnessMatrix> {
    phi.require_budget()?;
    let (k1, k2) = (phi.k1, phi.k2);
    let mut cells = Vec::with_capacity(1 << (k1 + k2));
    for x in 0..1u64 << k1 {
        for y in 0..1u64 << k2 {
            let sigma = Assignment::new(x, k1, y, k2)?;
            let cell = phi
                .clauses
                .iter()
                .enumerate()
                .filter(|(_, c)| true_literal_count(c, &sigma) == 1)
                .map(|(j, _)| j as u32 + 1)
                .collect();
            cells.push(cell);
        }
    }
    Ok(WitnessMatrix {
        k1,
        k2,
        k3: phi.k3(),
        cells,
    })
}

impl WitnessMatrix {
    pub fn cell(&self, sigma: &Assignment) -> &[u32] {
        &self.cells[((sigma.x_bits() << self.k2) | sigma.y_bits()) as usize]
    }

    pub fn is_full(&self, sigma: &Assignment) -> bool {
        self.cell(sigma).len() as u32 == self.k3
    }

    /// Text table: rows are σx, columns σy, both ordered by number of ones and
    /// then with earlier variables set first. Empty cells print as `---`.
    pub fn render(&self) -> String {
        let rows = presentation_order(self.k1);
        let cols = presentation_order(self.k2);
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["x\\y".to_string()];
        header.extend(cols.iter().map(|&y| bit_string(y, self.k2)));
        grid.push(header);
        for &x in &rows {
            let mut line = vec![bit_string(x, self.k1)];
            for &y in &cols {
                let cell = &self.cells[((x << self.k2) | y) as usize];
                line.push(if cell.is_empty() {
                    "---".to_string()
                } else {
                    cell.iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                });
            }
            grid.push(line);
        }
        render_grid(&grid)
    }
}

fn presentation_order(width: u32) -> Vec<u64> {
    let mut all: Vec<u64> = (0..1u64 << width).collect();
    all.sort_by_key(|&b| (b.count_ones(), std::cmp::Reverse(bit_string(b, width))));
    all
}

pub(crate) fn render_grid(grid: &[Vec<String>]) -> String {
    let ncols = grid.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|i| {
            grid.iter()
                .filter_map(|r| r.get(i))
                .map(String::len)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in grid {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{s:<w$}", w = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// A seeded random formula in which every variable of both blocks occurs.
///
/// The first `k1 + k2` literal slots receive a shuffled list of all variables,
/// the remaining slots are filled with variables not yet in their clause, and
/// finally clause order and literal order are shuffled. Polarity is a fair coin.
pub fn random_formula(seed: u64, k1: u32, k2: u32, k3: u32) -> Result<PartitionedFormula> {
    if k1 < 2 || k3 < 2 {
        return Err(Error::Precondition(format!(
            "random formulas need k1 >= 2 and k3 >= 2, got k1={k1}, k3={k3}"
        )));
    }
    let nvars = k1 + k2;
    if nvars < 3 {
        return Err(Error::Construction(format!(
            "a clause needs 3 distinct variables but only {nvars} exist"
        )));
    }
    if 3 * k3 < nvars {
        return Err(Error::Construction(format!(
            "{k3} clauses cannot cover {nvars} variables"
        )));
    }
    let mut rng = SweepRng::new(seed);
    let mut pool: Vec<Variable> = (1..=k1)
        .map(Variable::x)
        .chain((1..=k2).map(Variable::y))
        .collect();
    rng.shuffle(&mut pool);

    let mut slots: Vec<Vec<Variable>> = vec![Vec::with_capacity(3); k3 as usize];
    for (i, v) in pool.iter().enumerate() {
        slots[i / 3].push(*v);
    }
    for clause in slots.iter_mut() {
        while clause.len() < 3 {
            let v = pool[rng.below(nvars as u64) as usize];
            if !clause.contains(&v) {
                clause.push(v);
            }
        }
    }
    rng.shuffle(&mut slots);
    let mut clauses = Vec::with_capacity(k3 as usize);
    for mut vars in slots {
        rng.shuffle(&mut vars);
        let lits: Vec<Literal> = vars
            .into_iter()
            .map(|var| Literal {
                var,
                positive: rng.coin(),
            })
            .collect();
        clauses.push(Clause::new(lits[0], lits[1], lits[2])?);
    }
    PartitionedFormula::new(clauses, k1, k2)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// The 4-clause example over x1..x4, y1..y3.
    pub fn phi1() -> PartitionedFormula {
        PartitionedFormula::parse("-x1 x2 y1\nx1 x3 -y2\n-x2 x4 -y3\nx4 y2 y3\n").unwrap()
    }

    /// The 2-clause example over x1, x2, y1, y2.
    pub fn phi2() -> PartitionedFormula {
        PartitionedFormula::parse("-x1 x2 y1\nx1 x2 y2\n").unwrap()
    }
}
