//! Finite algebras as operation tables.
//!
//! Elements are canonical integers `0..N-1`. Every operation is stored as a
//! flat row-major table (last argument varies fastest); arity-0 operations are
//! length-1 tables. Algebras of infinite type (the `A_p` family) carry a
//! template that supplies the missing operations on demand.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Element = usize;

/// Default cap on explicit table sizes (number of entries).
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 26;

/// `base^exp` as entry count, guarded against the given budget.
pub fn checked_power(base: usize, exp: u32, budget: u64) -> Result<usize> {
    let entries = (base as u128).pow(exp);
    if entries > budget as u128 {
        return Err(Error::PowerOverBudget {
            base,
            exp,
            entries,
            budget,
        });
    }
    Ok(entries as usize)
}

/// Row-major index of `args` in a table over a domain of size `n`.
pub fn table_index(args: &[Element], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

/// Inverse of [`table_index`]: writes the `arity` digits of `index` into `out`.
pub fn decode_index(mut index: usize, n: usize, out: &mut [Element]) {
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<Element>,
}

impl Operation {
    pub fn apply(&self, args: &[Element], n: usize) -> Element {
        debug_assert_eq!(args.len(), self.arity);
        self.table[table_index(args, n)]
    }
}

/// Generator for operation families of infinite type.
///
/// `ApFamily { p }` supplies `f@n(x1,..,xn) = p * x1 * x2 * ... * xn mod p^2`
/// for every positive arity `n`, under the names `f@1`, `f@2`, ...
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpTemplate {
    ApFamily { p: usize },
}

impl OpTemplate {
    /// Resolves a template operation name like `f@6` to its arity.
    pub fn resolve(&self, name: &str) -> Option<usize> {
        match self {
            OpTemplate::ApFamily { .. } => {
                let arity: usize = name.strip_prefix("f@")?.parse().ok()?;
                (arity >= 1).then_some(arity)
            }
        }
    }

    pub fn name_for(&self, arity: usize) -> String {
        match self {
            OpTemplate::ApFamily { .. } => format!("f@{arity}"),
        }
    }

    pub fn eval(&self, args: &[Element]) -> Element {
        match self {
            OpTemplate::ApFamily { p } => {
                let m = p * p;
                let prod = args.iter().fold(1usize, |acc, &a| acc * a % m);
                p * prod % m
            }
        }
    }
}

/// Resolved view of an operation, either an explicit table or a template op.
#[derive(Clone, Copy)]
pub enum ResolvedOp<'a> {
    Table(&'a Operation),
    Template { template: &'a OpTemplate, arity: usize },
}

impl ResolvedOp<'_> {
    pub fn arity(&self) -> usize {
        match self {
            ResolvedOp::Table(op) => op.arity,
            ResolvedOp::Template { arity, .. } => *arity,
        }
    }

    pub fn apply(&self, args: &[Element], n: usize) -> Element {
        match self {
            ResolvedOp::Table(op) => op.apply(args, n),
            ResolvedOp::Template { template, .. } => template.eval(args),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    pub domain_size: usize,
    pub operations: Vec<Operation>,
    pub designated_zero: Option<Element>,
    pub template: Option<OpTemplate>,
}

impl FiniteAlgebra {
    pub fn new(domain_size: usize, operations: Vec<Operation>) -> Result<Self> {
        let alg = FiniteAlgebra {
            domain_size,
            operations,
            designated_zero: None,
            template: None,
        };
        alg.validate()?;
        Ok(alg)
    }

    pub fn with_zero(mut self, zero: Element) -> Result<Self> {
        if zero >= self.domain_size {
            return Err(Error::ElementOutOfRange {
                value: zero,
                domain: self.domain_size,
            });
        }
        self.designated_zero = Some(zero);
        Ok(self)
    }

    pub fn with_template(mut self, template: OpTemplate) -> Self {
        self.template = Some(template);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.domain_size == 0 {
            return Err(Error::InvalidAlgebra("domain size must be positive".into()));
        }
        let n = self.domain_size;
        let mut seen = HashMap::new();
        for op in &self.operations {
            if seen.insert(op.name.clone(), ()).is_some() {
                return Err(Error::InvalidAlgebra(format!(
                    "duplicate operation name `{}`",
                    op.name
                )));
            }
            let expected = (n as u128).pow(op.arity as u32);
            if op.table.len() as u128 != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "operation `{}` has table length {}, expected {}",
                    op.name,
                    op.table.len(),
                    expected
                )));
            }
            if let Some(&bad) = op.table.iter().find(|&&v| v >= n) {
                return Err(Error::ElementOutOfRange {
                    value: bad,
                    domain: n,
                });
            }
        }
        if let Some(z) = self.designated_zero {
            if z >= n {
                return Err(Error::ElementOutOfRange {
                    value: z,
                    domain: n,
                });
            }
        }
        Ok(())
    }

    pub fn op(&self, name: &str) -> Option<&Operation> {
        self.operations.iter().find(|op| op.name == name)
    }

    /// Looks up an operation by name, consulting the template as a fallback.
    pub fn resolve(&self, name: &str) -> Option<ResolvedOp<'_>> {
        if let Some(op) = self.op(name) {
            return Some(ResolvedOp::Table(op));
        }
        let template = self.template.as_ref()?;
        let arity = template.resolve(name)?;
        Some(ResolvedOp::Template { template, arity })
    }

    pub fn zero(&self) -> Result<Element> {
        self.designated_zero.ok_or(Error::NoDesignatedZero)
    }

    pub fn add_op(&mut self, name: &str, arity: usize, table: Vec<Element>) -> Result<()> {
        self.operations.push(Operation {
            name: name.to_string(),
            arity,
            table,
        });
        self.validate()
    }

    /// Parses the algebra file format:
    /// `domain N`, optional `zero K`, optional `template ap P`, then for each
    /// operation a line `op NAME ARITY` followed by `N^ARITY` whitespace
    /// separated values.
    pub fn parse(source: &str, table_budget: u64) -> Result<Self> {
        let mut tokens = source
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(|l| l.split_whitespace())
            .peekable();

        let mut expect = |what: &str| -> Result<&str> {
            tokens
                .next()
                .ok_or_else(|| Error::InvalidAlgebra(format!("expected {what}, found end of file")))
        };

        let kw = expect("`domain`")?;
        if kw != "domain" {
            return Err(Error::InvalidAlgebra(format!(
                "expected `domain`, found `{kw}`"
            )));
        }
        let n: usize = expect("domain size")?
            .parse()
            .map_err(|_| Error::InvalidAlgebra("bad domain size".into()))?;

        let mut zero = None;
        let mut template = None;
        let mut operations = Vec::new();
        while let Some(kw) = tokens.next() {
            match kw {
                "zero" => {
                    let z: usize = tokens
                        .next()
                        .ok_or_else(|| Error::InvalidAlgebra("missing zero element".into()))?
                        .parse()
                        .map_err(|_| Error::InvalidAlgebra("bad zero element".into()))?;
                    zero = Some(z);
                }
                "template" => {
                    let kind = tokens
                        .next()
                        .ok_or_else(|| Error::InvalidAlgebra("missing template kind".into()))?;
                    if kind != "ap" {
                        return Err(Error::InvalidAlgebra(format!(
                            "unknown template kind `{kind}`"
                        )));
                    }
                    let p: usize = tokens
                        .next()
                        .ok_or_else(|| Error::InvalidAlgebra("missing template prime".into()))?
                        .parse()
                        .map_err(|_| Error::InvalidAlgebra("bad template prime".into()))?;
                    template = Some(OpTemplate::ApFamily { p });
                }
                "op" => {
                    let name = tokens
                        .next()
                        .ok_or_else(|| Error::InvalidAlgebra("missing op name".into()))?
                        .to_string();
                    let arity: usize = tokens
                        .next()
                        .ok_or_else(|| Error::InvalidAlgebra("missing op arity".into()))?
                        .parse()
                        .map_err(|_| Error::InvalidAlgebra("bad op arity".into()))?;
                    let entries = (n as u128).pow(arity as u32);
                    if entries > table_budget as u128 {
                        return Err(Error::TableOverBudget {
                            op: name,
                            entries,
                            budget: table_budget,
                        });
                    }
                    let mut table = Vec::with_capacity(entries as usize);
                    for _ in 0..entries {
                        let v: usize = tokens
                            .next()
                            .ok_or_else(|| {
                                Error::InvalidAlgebra(format!("table for `{name}` is too short"))
                            })?
                            .parse()
                            .map_err(|_| {
                                Error::InvalidAlgebra(format!("bad table entry for `{name}`"))
                            })?;
                        table.push(v);
                    }
                    operations.push(Operation { name, arity, table });
                }
                other => {
                    return Err(Error::InvalidAlgebra(format!(
                        "unexpected token `{other}`"
                    )));
                }
            }
        }

        let mut alg = FiniteAlgebra::new(n, operations)?;
        if let Some(z) = zero {
            alg = alg.with_zero(z)?;
        }
        if let Some(t) = template {
            alg = alg.with_template(t);
        }
        Ok(alg)
    }

    /// Renders the algebra in the same file format that [`parse`] accepts.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "domain {}", self.domain_size);
        if let Some(z) = self.designated_zero {
            let _ = writeln!(out, "zero {z}");
        }
        if let Some(OpTemplate::ApFamily { p }) = &self.template {
            let _ = writeln!(out, "template ap {p}");
        }
        for op in &self.operations {
            let _ = writeln!(out, "op {} {}", op.name, op.arity);
            let row = self.domain_size.max(1);
            for chunk in op.table.chunks(row) {
                let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
        out
    }
}

/// A (partial) map from variable indices to domain elements.
///
/// Variables are 1-based, matching the `x1, x2, ...` term syntax.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    values: Vec<Option<Element>>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment { values: Vec::new() }
    }

    /// Assignment mapping `x1..xm` to the given tuple, in order.
    pub fn from_tuple(tuple: &[Element]) -> Self {
        Assignment {
            values: tuple.iter().map(|&v| Some(v)).collect(),
        }
    }

    pub fn set(&mut self, var: usize, value: Element) {
        assert!(var >= 1, "variables are 1-based");
        if self.values.len() < var {
            self.values.resize(var, None);
        }
        self.values[var - 1] = Some(value);
    }

    pub fn get(&self, var: usize) -> Option<Element> {
        if var == 0 {
            return None;
        }
        self.values.get(var - 1).copied().flatten()
    }

    /// Copy with every variable outside `support` replaced by `zero`.
    ///
    /// `support` contains 1-based variable indices.
    pub fn masked(&self, support: &[usize], zero: Element) -> Assignment {
        let mut values = vec![Some(zero); self.values.len()];
        for &var in support {
            if var >= 1 && var <= self.values.len() {
                values[var - 1] = self.values[var - 1];
            }
        }
        Assignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
