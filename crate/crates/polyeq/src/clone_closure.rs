//! Polynomial clones of a fixed arity, as sets of value tables.
//!
//! `Pol_n` is generated from the n projections and the N constants by
//! composition with the basic operations. Two engines compute it:
//!
//! * a generic breadth-first closure over distinct tables, capped by
//!   `CloneConfig::cap`, which also tracks a witness term per table;
//! * an exact module-span engine used when [`find_module_structure`]
//!   verifies a compatible cyclic abelian group; the clone is then a
//!   submodule of Z_N^(N^n) and saturation is certain regardless of the
//!   clone's cardinality.
//!
//! The absorbing filter extracts the 0-absorbing members (value 0 whenever
//! any argument is 0), which drive the supernilpotency tests.

use std::collections::{HashMap, HashSet};

use crate::algebra::{
    checked_power, decode_index, Element, FiniteAlgebra, ResolvedOp,
    DEFAULT_TABLE_BUDGET,
};
use crate::error::Result;
use crate::linear::ZnSpan;
use crate::structure::{find_module_structure, GroupStructure};
use crate::term::Term;

pub const DEFAULT_CLONE_CAP: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct CloneConfig {
    /// Cap on distinct tables in the breadth-first engine, and on the number
    /// of enumerated absorbing members.
    pub cap: usize,
    pub table_budget: u64,
    /// Template operations `f@1..f@k` up to this arity participate in the
    /// closure when the algebra carries a template.
    pub template_max_arity: usize,
    /// Budget (in pointwise evaluations) for module-span closure rounds;
    /// exceeding it yields a valid but unsaturated span.
    pub work_budget: u64,
}

impl Default for CloneConfig {
    fn default() -> Self {
        CloneConfig {
            cap: DEFAULT_CLONE_CAP,
            table_budget: DEFAULT_TABLE_BUDGET,
            template_max_arity: 4,
            work_budget: 1 << 28,
        }
    }
}

fn closure_ops<'a>(algebra: &'a FiniteAlgebra, template_max_arity: usize) -> Vec<ResolvedOp<'a>> {
    let mut ops: Vec<ResolvedOp<'a>> = algebra
        .operations
        .iter()
        .filter(|op| op.arity >= 1)
        .map(ResolvedOp::Table)
        .collect();
    if let Some(template) = &algebra.template {
        for arity in 1..=template_max_arity {
            ops.push(ResolvedOp::Template { template, arity });
        }
    }
    ops
}

fn template_arities(algebra: &FiniteAlgebra, max: usize) -> Vec<usize> {
    if algebra.template.is_some() {
        (1..=max).collect()
    } else {
        Vec::new()
    }
}

/// Breadth-first clone generation over distinct value tables.
pub struct CloneBfs<'a> {
    algebra: &'a FiniteAlgebra,
    pub arity: usize,
    width: usize,
    pub tables: Vec<Vec<Element>>,
    pub terms: Vec<Term>,
    index: HashMap<Vec<Element>, usize>,
    /// Start of the most recent generation round.
    frontier: usize,
    cap: usize,
    template_max_arity: usize,
    pub saturated: bool,
    done: bool,
}

impl<'a> CloneBfs<'a> {
    pub fn new(algebra: &'a FiniteAlgebra, arity: usize, config: &CloneConfig) -> Result<Self> {
        Self::build(algebra, arity, config, true)
    }

    /// Term-clone variant: seeds only the projections, so the closure ranges
    /// over term functions rather than polynomials.
    pub fn new_without_constants(
        algebra: &'a FiniteAlgebra,
        arity: usize,
        config: &CloneConfig,
    ) -> Result<Self> {
        Self::build(algebra, arity, config, false)
    }

    fn build(
        algebra: &'a FiniteAlgebra,
        arity: usize,
        config: &CloneConfig,
        with_constants: bool,
    ) -> Result<Self> {
        let n = algebra.domain_size;
        let width = checked_power(n, arity as u32, config.table_budget)?;
        let mut bfs = CloneBfs {
            algebra,
            arity,
            width,
            tables: Vec::new(),
            terms: Vec::new(),
            index: HashMap::new(),
            frontier: 0,
            cap: config.cap,
            template_max_arity: config.template_max_arity,
            saturated: false,
            done: false,
        };
        // seed: projections then constants
        for var in 1..=arity {
            let mut table = vec![0; width];
            let mut tuple = vec![0; arity];
            for (idx, slot) in table.iter_mut().enumerate() {
                decode_index(idx, n, &mut tuple);
                *slot = tuple[var - 1];
            }
            bfs.push(table, Term::Var(var));
        }
        if with_constants {
            for c in 0..n {
                bfs.push(vec![c; width], Term::Const(c));
            }
        }
        Ok(bfs)
    }

    fn push(&mut self, table: Vec<Element>, term: Term) -> bool {
        if self.index.contains_key(&table) {
            return false;
        }
        self.index.insert(table.clone(), self.tables.len());
        self.tables.push(table);
        self.terms.push(term);
        true
    }

    pub fn contains(&self, table: &[Element]) -> bool {
        self.index.contains_key(table)
    }

    /// One composition round; returns false once the closure is saturated or
    /// the cap was hit.
    pub fn step(&mut self) -> bool {
        if self.done {
            return false;
        }
        let snapshot = self.tables.len();
        let frontier = self.frontier;
        self.frontier = snapshot;
        let ops = closure_ops(self.algebra, self.template_max_arity);
        let n = self.algebra.domain_size;
        let mut grew = false;
        'all: for op in &ops {
            let r = op.arity();
            let mut args_idx = vec![0usize; r];
            let mut arg_vals = vec![0usize; r];
            loop {
                // at least one argument must come from the frontier
                if args_idx.iter().any(|&i| i >= frontier) {
                    let mut table = Vec::with_capacity(self.width);
                    for pos in 0..self.width {
                        for (slot, &i) in arg_vals.iter_mut().zip(&args_idx) {
                            *slot = self.tables[i][pos];
                        }
                        table.push(op.apply(&arg_vals, n));
                    }
                    let term = Term::Apply {
                        op: match op {
                            ResolvedOp::Table(o) => o.name.clone(),
                            ResolvedOp::Template { template, arity } => template.name_for(*arity),
                        },
                        args: args_idx.iter().map(|&i| self.terms[i].clone()).collect(),
                    };
                    if self.push(table, term) {
                        grew = true;
                        if self.tables.len() >= self.cap {
                            self.done = true;
                            self.saturated = false;
                            break 'all;
                        }
                    }
                }
                // odometer over snapshot indices, last position fastest
                let mut i = r;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    args_idx[i] += 1;
                    if args_idx[i] < snapshot {
                        break;
                    }
                    args_idx[i] = 0;
                }
                if args_idx.iter().all(|&v| v == 0) {
                    break;
                }
                if r == 0 {
                    break;
                }
            }
        }
        if !self.done && !grew {
            self.saturated = true;
            self.done = true;
        }
        !self.done
    }

    pub fn run(&mut self) {
        while self.step() {}
    }
}

/// Exact clone representation as a submodule of Z_N^(N^arity).
#[derive(Debug, Clone)]
pub struct ModuleClone {
    pub arity: usize,
    pub width: usize,
    pub group: GroupStructure,
    pub span: ZnSpan,
    /// False when the work budget cut the closure short; the span is then a
    /// sub-span of the true clone.
    pub saturated: bool,
}

impl ModuleClone {
    fn to_vec(&self, table: &[Element]) -> Vec<u64> {
        table.iter().map(|&a| self.group.to_zn[a]).collect()
    }

    pub fn contains(&self, table: &[Element]) -> bool {
        self.span.contains(&self.to_vec(table))
    }

    pub fn size(&self) -> u128 {
        self.span.size()
    }
}

/// Span of `generators` (as element tuples of length `width`) closed under
/// the pointwise action of all non-group operations, over the verified group.
///
/// This is exactly the subuniverse of A^width generated by the generators
/// and the constants occurring among them: multilinearity lets every
/// operation application distribute over span combinations, so iterating over
/// basis tuples until the span stops growing reaches the full closure.
///
/// Each round only applies operations to argument tuples touching a basis row
/// added since the previous round, and the projected pointwise evaluation
/// count is charged against `work_budget`. The returned flag is true iff the
/// closure saturated within budget; on false the span is a valid but possibly
/// proper sub-span of the closure.
pub(crate) fn span_close(
    algebra: &FiniteAlgebra,
    group: &GroupStructure,
    width: usize,
    generators: &[Vec<Element>],
    template_max_arity: usize,
    work_budget: u64,
) -> (ZnSpan, bool) {
    let n = algebra.domain_size;
    let mut span = ZnSpan::new(n as u64, width);
    let to_vec = |t: &[Element]| -> Vec<u64> { t.iter().map(|&a| group.to_zn[a]).collect() };
    for g in generators {
        span.insert(&to_vec(g));
    }
    let ops: Vec<ResolvedOp> = closure_ops(algebra, template_max_arity)
        .into_iter()
        .filter(|op| match op {
            ResolvedOp::Table(o) => o.name != group.op_name,
            ResolvedOp::Template { .. } => true,
        })
        .collect();
    let mut work_left = work_budget;
    // Rows already covered by a previous round. Tracked by content because
    // inserting into the span may rewrite existing basis rows; a rewritten
    // row counts as new and gets (re)processed.
    let mut processed: HashSet<Vec<u64>> = HashSet::new();
    loop {
        let basis_rows: Vec<Vec<u64>> = span.basis().cloned().collect();
        // old rows first so the frontier filter is a single index comparison
        let (old_rows, new_rows): (Vec<_>, Vec<_>) = basis_rows
            .into_iter()
            .partition(|row| processed.contains(row));
        if new_rows.is_empty() {
            return (span, true);
        }
        let seen = old_rows.len();
        let basis_tables: Vec<Vec<Element>> = old_rows
            .iter()
            .chain(&new_rows)
            .map(|row| row.iter().map(|&k| group.from_zn[k as usize]).collect())
            .collect();
        let count = basis_tables.len();
        // budget check: combos touching at least one new row
        for op in &ops {
            let r = op.arity() as u32;
            let combos = (count as u128).pow(r).saturating_sub((seen as u128).pow(r));
            let cost = combos.saturating_mul(width as u128);
            if cost > work_left as u128 {
                return (span, false);
            }
            work_left -= cost as u64;
        }
        for op in &ops {
            let r = op.arity();
            let mut args_idx = vec![0usize; r];
            let mut arg_vals = vec![0usize; r];
            loop {
                if r == 0 || args_idx.iter().any(|&i| i >= seen) {
                    let mut table = Vec::with_capacity(width);
                    for pos in 0..width {
                        for (slot, &i) in arg_vals.iter_mut().zip(&args_idx) {
                            *slot = basis_tables[i][pos];
                        }
                        table.push(op.apply(&arg_vals, n));
                    }
                    span.insert(&to_vec(&table));
                }
                let mut i = r;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    args_idx[i] += 1;
                    if args_idx[i] < count {
                        break;
                    }
                    args_idx[i] = 0;
                }
                if r == 0 || args_idx.iter().all(|&v| v == 0) {
                    break;
                }
            }
        }
        processed.extend(old_rows);
        processed.extend(new_rows);
    }
}

fn module_clone(
    algebra: &FiniteAlgebra,
    arity: usize,
    group: GroupStructure,
    config: &CloneConfig,
) -> Result<ModuleClone> {
    let n = algebra.domain_size;
    let width = checked_power(n, arity as u32, config.table_budget)?;
    // generators: projections and constants
    let mut generators = Vec::with_capacity(arity + n);
    let mut tuple = vec![0usize; arity];
    for var in 1..=arity {
        let mut table = vec![0; width];
        for (idx, slot) in table.iter_mut().enumerate() {
            decode_index(idx, n, &mut tuple);
            *slot = tuple[var - 1];
        }
        generators.push(table);
    }
    for c in 0..n {
        generators.push(vec![c; width]);
    }
    let (span, saturated) = span_close(
        algebra,
        &group,
        width,
        &generators,
        config.template_max_arity,
        config.work_budget,
    );
    Ok(ModuleClone {
        arity,
        width,
        group,
        span,
        saturated,
    })
}

/// The arity-n polynomial clone of the algebra.
pub enum CloneClosure {
    Enumerated(Box<CloneBfsResult>),
    Module(ModuleClone),
}

pub struct CloneBfsResult {
    pub arity: usize,
    pub tables: Vec<Vec<Element>>,
    pub terms: Vec<Term>,
    pub saturated: bool,
}

impl CloneClosure {
    pub fn arity(&self) -> usize {
        match self {
            CloneClosure::Enumerated(r) => r.arity,
            CloneClosure::Module(m) => m.arity,
        }
    }

    pub fn saturated(&self) -> bool {
        match self {
            CloneClosure::Enumerated(r) => r.saturated,
            CloneClosure::Module(m) => m.saturated,
        }
    }

    pub fn size(&self) -> u128 {
        match self {
            CloneClosure::Enumerated(r) => r.tables.len() as u128,
            CloneClosure::Module(m) => m.size(),
        }
    }

    pub fn contains(&self, table: &[Element]) -> bool {
        match self {
            CloneClosure::Enumerated(r) => r.tables.iter().any(|t| t == table),
            CloneClosure::Module(m) => m.contains(table),
        }
    }
}

/// Generates `Pol_arity`, preferring the exact module engine.
pub fn clone_closure(
    algebra: &FiniteAlgebra,
    arity: usize,
    config: &CloneConfig,
) -> Result<CloneClosure> {
    let t_arities = template_arities(algebra, config.template_max_arity.max(arity));
    let mut cfg = config.clone();
    cfg.template_max_arity = cfg.template_max_arity.max(arity);
    if let Some(group) = find_module_structure(algebra, &t_arities) {
        return Ok(CloneClosure::Module(module_clone(algebra, arity, group, &cfg)?));
    }
    let mut bfs = CloneBfs::new(algebra, arity, &cfg)?;
    bfs.run();
    Ok(CloneClosure::Enumerated(Box::new(CloneBfsResult {
        arity,
        saturated: bfs.saturated,
        tables: bfs.tables,
        terms: bfs.terms,
    })))
}

/// Forces the generic breadth-first engine (used to cross-check the module
/// engine on small algebras).
pub fn clone_closure_bfs(
    algebra: &FiniteAlgebra,
    arity: usize,
    config: &CloneConfig,
) -> Result<CloneClosure> {
    let mut bfs = CloneBfs::new(algebra, arity, config)?;
    bfs.run();
    Ok(CloneClosure::Enumerated(Box::new(CloneBfsResult {
        arity,
        saturated: bfs.saturated,
        tables: bfs.tables,
        terms: bfs.terms,
    })))
}

/// The 0-absorbing members of an arity-n clone.
pub struct AbsorbingReport {
    pub arity: usize,
    /// Tables in lexicographic order; always includes the constant-0 table.
    pub tables: Vec<Vec<Element>>,
    /// True when `tables` provably lists every absorbing member of the clone.
    pub complete: bool,
    /// True when the underlying closure reached a fixpoint.
    pub saturated: bool,
}

impl AbsorbingReport {
    /// First table (in lexicographic order) that is not constant 0, with the
    /// lexicographically least tuple where it is nonzero.
    pub fn nonzero_witness(
        &self,
        algebra: &FiniteAlgebra,
    ) -> Option<(Vec<Element>, Vec<Element>)> {
        let zero = algebra.designated_zero?;
        let n = algebra.domain_size;
        for table in &self.tables {
            if let Some(idx) = table.iter().position(|&v| v != zero) {
                let mut tuple = vec![0; self.arity];
                decode_index(idx, n, &mut tuple);
                return Some((table.clone(), tuple));
            }
        }
        None
    }
}

/// Indices (into the flat table) of argument tuples containing the zero.
fn zero_touching_indices(n: usize, arity: usize, zero: Element, width: usize) -> Vec<usize> {
    let mut tuple = vec![0; arity];
    (0..width)
        .filter(|&idx| {
            decode_index(idx, n, &mut tuple);
            tuple.contains(&zero)
        })
        .collect()
}

fn is_absorbing(table: &[Element], zero_idx: &[usize], zero: Element) -> bool {
    zero_idx.iter().all(|&i| table[i] == zero)
}

/// Enumerates the 0-absorbing members of the arity-n clone.
pub fn absorbing_polynomials(
    algebra: &FiniteAlgebra,
    arity: usize,
    config: &CloneConfig,
) -> Result<AbsorbingReport> {
    let zero = algebra.zero()?;
    let n = algebra.domain_size;
    let closure = clone_closure(algebra, arity, config)?;
    let width = checked_power(n, arity as u32, config.table_budget)?;
    let zero_idx = zero_touching_indices(n, arity, zero, width);
    match closure {
        CloneClosure::Enumerated(r) => {
            let mut tables: Vec<Vec<Element>> = r
                .tables
                .iter()
                .filter(|t| is_absorbing(t, &zero_idx, zero))
                .cloned()
                .collect();
            tables.sort();
            Ok(AbsorbingReport {
                arity,
                tables,
                complete: r.saturated,
                saturated: r.saturated,
            })
        }
        CloneClosure::Module(mc) => {
            // Absorbing members form the coset v0 + W where v0 is the
            // constant-0 table and W is the sub-span vanishing on all
            // zero-touching coordinates. Reordering those coordinates to the
            // front makes W exactly the rows with pivot beyond the prefix.
            let mut order: Vec<usize> = zero_idx.clone();
            let in_zero: Vec<bool> = {
                let mut flags = vec![false; width];
                for &i in &zero_idx {
                    flags[i] = true;
                }
                flags
            };
            order.extend((0..width).filter(|&i| !in_zero[i]));
            let mut reordered = ZnSpan::new(n as u64, width);
            for row in mc.span.basis() {
                let v: Vec<u64> = order.iter().map(|&i| row[i]).collect();
                reordered.insert(&v);
            }
            let homog = reordered.vanishing_prefix_basis(zero_idx.len());
            let mut homog_span = ZnSpan::new(n as u64, width);
            for row in &homog {
                homog_span.insert(row);
            }
            let v0 = mc.group.to_zn[zero];
            let (members, complete) = match homog_span.enumerate(config.cap) {
                Some(all) => (all, mc.saturated),
                None => {
                    // over cap: report the basis translates as samples
                    let mut sample: Vec<Vec<u64>> = vec![vec![0; width]];
                    sample.extend(homog.iter().cloned());
                    (sample, false)
                }
            };
            let mut tables: Vec<Vec<Element>> = members
                .iter()
                .map(|w| {
                    // v0 + w, undone reordering
                    let mut table = vec![0; width];
                    for (pos, &col) in order.iter().enumerate() {
                        let val = (v0 + w[pos]) % n as u64;
                        table[col] = mc.group.from_zn[val as usize];
                    }
                    table
                })
                .collect();
            tables.sort();
            tables.dedup();
            debug_assert!(tables.iter().all(|t| is_absorbing(t, &zero_idx, zero)));
            debug_assert!(tables.iter().all(|t| mc.contains(t)));
            Ok(AbsorbingReport {
                arity,
                tables,
                complete,
                saturated: mc.saturated,
            })
        }
    }
}

/// A 0-absorbing clone member that is not equivalent to 0, together with a
/// tuple witnessing the nonzero value, if one exists within the cap.
pub fn find_absorbing_witness(
    algebra: &FiniteAlgebra,
    arity: usize,
    config: &CloneConfig,
) -> Result<(Option<(Vec<Element>, Vec<Element>)>, bool)> {
    let report = absorbing_polynomials(algebra, arity, config)?;
    Ok((report.nonzero_witness(algebra), report.saturated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::table_index;
    use crate::fixtures;

    fn cfg() -> CloneConfig {
        CloneConfig::default()
    }

    #[test]
    fn z4_arity2_clone_is_affine() {
        // all c + a*x1 + b*x2: 64 functions
        let z4 = fixtures::cyclic_group(4);
        let clone = clone_closure(&z4, 2, &cfg()).unwrap();
        assert!(matches!(clone, CloneClosure::Module(_)));
        assert!(clone.saturated());
        assert_eq!(clone.size(), 64);
    }

    #[test]
    fn module_and_bfs_engines_agree() {
        let z4 = fixtures::cyclic_group(4);
        for arity in 1..=2 {
            let module = clone_closure(&z4, arity, &cfg()).unwrap();
            let bfs = clone_closure_bfs(&z4, arity, &cfg()).unwrap();
            assert!(bfs.saturated());
            assert_eq!(module.size(), bfs.size());
            if let CloneClosure::Enumerated(r) = &bfs {
                for t in &r.tables {
                    assert!(module.contains(t));
                }
            }
        }
        // Z_9 reduct at arity 1: 243 unary polynomials c + a*x + 3*q*x^2
        let a3 = fixtures::z9_f2();
        let module = clone_closure(&a3, 1, &cfg()).unwrap();
        let bfs = clone_closure_bfs(&a3, 1, &cfg()).unwrap();
        assert!(bfs.saturated());
        assert_eq!(module.size(), 243);
        assert_eq!(bfs.size(), 243);
        if let CloneClosure::Enumerated(r) = &bfs {
            for t in &r.tables {
                assert!(module.contains(t));
            }
        }
    }

    #[test]
    fn z9_arity2_clone_size() {
        // c + a1 x1 + a2 x2 + 3 q(x1,x2): 9^3 * 3^3 distinct functions
        let a3 = fixtures::z9_f2();
        let clone = clone_closure(&a3, 2, &cfg()).unwrap();
        assert_eq!(clone.size(), 9u128.pow(3) * 27);
        assert!(clone.saturated());
    }

    #[test]
    fn z4_absorbing_arity2_is_trivial() {
        let z4 = fixtures::cyclic_group(4);
        let report = absorbing_polynomials(&z4, 2, &cfg()).unwrap();
        assert!(report.complete && report.saturated);
        assert_eq!(report.tables, vec![vec![0; 16]]);
        let (witness, saturated) = find_absorbing_witness(&z4, 2, &cfg()).unwrap();
        assert!(witness.is_none());
        assert!(saturated);
    }

    #[test]
    fn z9_absorbing_arity2_contains_f2() {
        let a3 = fixtures::z9_f2();
        let report = absorbing_polynomials(&a3, 2, &cfg()).unwrap();
        assert!(report.complete && report.saturated);
        // {0, 3xy, 6xy}
        assert_eq!(report.tables.len(), 3);
        let f2_table: Vec<usize> = (0..81).map(|i| 3 * (i / 9) * (i % 9) % 9).collect();
        assert!(report.tables.contains(&f2_table));
        let (witness, _) = find_absorbing_witness(&a3, 2, &cfg()).unwrap();
        let (table, tuple) = witness.unwrap();
        assert_eq!(table[table_index(&tuple, 9)], 3 * tuple[0] * tuple[1] % 9);
        assert_ne!(table[table_index(&tuple, 9)], 0);
    }

    #[test]
    fn z9_absorbing_arity3_is_trivial() {
        let a3 = fixtures::z9_f2();
        let report = absorbing_polynomials(&a3, 3, &cfg()).unwrap();
        assert!(report.complete && report.saturated);
        assert_eq!(report.tables, vec![vec![0; 729]]);
    }

    #[test]
    fn bfs_absorbing_agrees_on_z9_arity1() {
        let a3 = fixtures::z9_f2();
        let module = absorbing_polynomials(&a3, 1, &cfg()).unwrap();
        let mut bfs = CloneBfs::new(&a3, 1, &cfg()).unwrap();
        bfs.run();
        assert!(bfs.saturated);
        let zero_idx = zero_touching_indices(9, 1, 0, 9);
        let mut via_bfs: Vec<Vec<usize>> = bfs
            .tables
            .iter()
            .filter(|t| is_absorbing(t, &zero_idx, 0))
            .cloned()
            .collect();
        via_bfs.sort();
        assert_eq!(module.tables, via_bfs);
    }

    #[test]
    fn semilattice_clone_is_small_and_saturated() {
        let sl = fixtures::meet_semilattice_2();
        let clone = clone_closure(&sl, 2, &cfg()).unwrap();
        assert!(matches!(clone, CloneClosure::Enumerated(_)));
        assert!(clone.saturated());
        // projections, constants, and the meets: x, y, 0, 1, min(x,y)
        assert_eq!(clone.size(), 5);
    }

    #[test]
    fn cap_marks_unsaturated() {
        let z4 = fixtures::cyclic_group(4);
        let config = CloneConfig {
            cap: 10,
            ..CloneConfig::default()
        };
        let bfs = clone_closure_bfs(&z4, 2, &config).unwrap();
        assert!(!bfs.saturated());
        assert!(bfs.size() >= 10);
    }
}
