//! The term language: abstract syntax, parser, printer and evaluators.
//!
//! Grammar: `term := var | const | name '(' term (',' term)* ')'` with
//! `var := 'x' [1-9][0-9]*` and `const := '#' [0-9]+`. Operation names may
//! contain letters, digits, `_` and `@` (the `@` form is used by template
//! operation families such as `f@6`). Whitespace is insignificant.

use std::fmt;

use crate::algebra::{decode_index, Assignment, Element, FiniteAlgebra, ResolvedOp};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// 1-based variable `x1, x2, ...`
    Var(usize),
    /// Constant literal `#c`.
    Const(Element),
    Apply { op: String, args: Vec<Term> },
}

impl Term {
    pub fn apply(op: &str, args: Vec<Term>) -> Term {
        Term::Apply {
            op: op.to_string(),
            args,
        }
    }

    /// Term length: the total count of operation, constant and variable
    /// symbols in the tree.
    pub fn length(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Apply { args, .. } => 1 + args.iter().map(Term::length).sum::<usize>(),
        }
    }

    /// Largest variable index occurring in the term (0 if none).
    pub fn max_var(&self) -> usize {
        match self {
            Term::Var(i) => *i,
            Term::Const(_) => 0,
            Term::Apply { args, .. } => args.iter().map(Term::max_var).max().unwrap_or(0),
        }
    }

    /// Replaces every variable not in `support` (1-based) with `#zero`.
    pub fn masked(&self, support: &[usize], zero: Element) -> Term {
        match self {
            Term::Var(i) => {
                if support.contains(i) {
                    Term::Var(*i)
                } else {
                    Term::Const(zero)
                }
            }
            Term::Const(c) => Term::Const(*c),
            Term::Apply { op, args } => Term::Apply {
                op: op.clone(),
                args: args.iter().map(|a| a.masked(support, zero)).collect(),
            },
        }
    }

    /// Renames variables according to `map[old - 1] = new` (both 1-based).
    pub fn renumbered(&self, map: &[usize]) -> Term {
        match self {
            Term::Var(i) => Term::Var(map[*i - 1]),
            Term::Const(c) => Term::Const(*c),
            Term::Apply { op, args } => Term::Apply {
                op: op.clone(),
                args: args.iter().map(|a| a.renumbered(map)).collect(),
            },
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Const(c) => write!(f, "#{c}"),
            Term::Apply { op, args } => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '@'
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    algebra: &'a FiniteAlgebra,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn syntax(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn take_while(&mut self, pred: fn(char) -> bool) -> &'a str {
        let start = self.pos;
        for c in self.src[self.pos..].chars() {
            if pred(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            None => Err(self.syntax("expected a term, found end of input")),
            Some('#') => {
                self.pos += 1;
                let digits = self.take_while(|c| c.is_ascii_digit());
                if digits.is_empty() {
                    return Err(self.syntax("expected digits after `#`"));
                }
                let value: usize = digits
                    .parse()
                    .map_err(|_| self.syntax("constant literal too large"))?;
                if value >= self.algebra.domain_size {
                    return Err(Error::ConstantOutOfRange {
                        value,
                        domain: self.algebra.domain_size,
                    });
                }
                Ok(Term::Const(value))
            }
            Some(c) if is_name_char(c) => {
                let name = self.take_while(is_name_char);
                // A variable is `x` followed by a nonzero-led number.
                if let Some(rest) = name.strip_prefix('x') {
                    if !rest.is_empty()
                        && !rest.starts_with('0')
                        && rest.chars().all(|c| c.is_ascii_digit())
                    {
                        let idx: usize = rest
                            .parse()
                            .map_err(|_| self.syntax("variable index too large"))?;
                        return Ok(Term::Var(idx));
                    }
                }
                if self.peek() != Some('(') {
                    return Err(self.syntax(&format!(
                        "expected `(` after operation name `{name}`"
                    )));
                }
                self.pos += 1;
                let mut args = vec![self.term()?];
                loop {
                    match self.peek() {
                        Some(',') => {
                            self.pos += 1;
                            args.push(self.term()?);
                        }
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => return Err(self.syntax("expected `,` or `)`")),
                        None => return Err(self.syntax("unbalanced parenthesis")),
                    }
                }
                let op = self
                    .algebra
                    .resolve(name)
                    .ok_or_else(|| Error::UnknownOperation(name.to_string()))?;
                if op.arity() != args.len() {
                    return Err(Error::ArityMismatch {
                        op: name.to_string(),
                        expected: op.arity(),
                        got: args.len(),
                    });
                }
                Ok(Term::Apply {
                    op: name.to_string(),
                    args,
                })
            }
            Some(_) => Err(self.syntax("expected a variable, constant or operation")),
        }
    }
}

/// Parses a term and validates all operation names and arities against the
/// algebra.
pub fn parse_term(source: &str, algebra: &FiniteAlgebra) -> Result<Term> {
    let mut p = Parser {
        src: source,
        bytes: source.as_bytes(),
        pos: 0,
        algebra,
    };
    let t = p.term()?;
    if p.peek().is_some() {
        return Err(p.syntax("trailing input after term"));
    }
    Ok(t)
}

/// Evaluates `term` under `assignment` by bottom-up table lookup.
pub fn eval(term: &Term, algebra: &FiniteAlgebra, assignment: &Assignment) -> Result<Element> {
    match term {
        Term::Var(i) => assignment
            .get(*i)
            .ok_or(Error::UnassignedVariable(*i))
            .and_then(|v| {
                if v < algebra.domain_size {
                    Ok(v)
                } else {
                    Err(Error::ElementOutOfRange {
                        value: v,
                        domain: algebra.domain_size,
                    })
                }
            }),
        Term::Const(c) => {
            if *c < algebra.domain_size {
                Ok(*c)
            } else {
                Err(Error::ConstantOutOfRange {
                    value: *c,
                    domain: algebra.domain_size,
                })
            }
        }
        Term::Apply { op, args } => {
            let resolved = algebra
                .resolve(op)
                .ok_or_else(|| Error::UnknownOperation(op.clone()))?;
            let mut values = Vec::with_capacity(args.len());
            for a in args {
                values.push(eval(a, algebra, assignment)?);
            }
            Ok(resolved.apply(&values, algebra.domain_size))
        }
    }
}

/// Evaluates `term` at the masked tuple `base_S`: entries outside `support`
/// (1-based variable indices) are replaced by the designated zero.
pub fn eval_support(
    term: &Term,
    algebra: &FiniteAlgebra,
    base: &Assignment,
    support: &[usize],
) -> Result<Element> {
    let zero = algebra.zero()?;
    let masked = base.masked(support, zero);
    eval(term, algebra, &masked)
}

/// A term compiled to a flat postfix program for fast repeated evaluation.
pub struct Program<'a> {
    code: Vec<Instr<'a>>,
    max_var: usize,
    stack: usize,
}

enum Instr<'a> {
    Var(usize),
    Const(Element),
    Op(ResolvedOp<'a>),
}

impl<'a> Program<'a> {
    pub fn compile(term: &Term, algebra: &'a FiniteAlgebra) -> Result<Self> {
        fn go<'a>(
            term: &Term,
            algebra: &'a FiniteAlgebra,
            code: &mut Vec<Instr<'a>>,
        ) -> Result<()> {
            match term {
                Term::Var(i) => code.push(Instr::Var(*i)),
                Term::Const(c) => {
                    if *c >= algebra.domain_size {
                        return Err(Error::ConstantOutOfRange {
                            value: *c,
                            domain: algebra.domain_size,
                        });
                    }
                    code.push(Instr::Const(*c));
                }
                Term::Apply { op, args } => {
                    for a in args {
                        go(a, algebra, code)?;
                    }
                    let resolved = algebra
                        .resolve(op)
                        .ok_or_else(|| Error::UnknownOperation(op.clone()))?;
                    if resolved.arity() != args.len() {
                        return Err(Error::ArityMismatch {
                            op: op.clone(),
                            expected: resolved.arity(),
                            got: args.len(),
                        });
                    }
                    code.push(Instr::Op(resolved));
                }
            }
            Ok(())
        }
        let mut code = Vec::with_capacity(term.length());
        go(term, algebra, &mut code)?;
        let mut depth = 0usize;
        let mut max_depth = 0usize;
        for instr in &code {
            match instr {
                Instr::Var(_) | Instr::Const(_) => depth += 1,
                Instr::Op(op) => depth = depth - op.arity() + 1,
            }
            max_depth = max_depth.max(depth);
        }
        Ok(Program {
            code,
            max_var: term.max_var(),
            stack: max_depth,
        })
    }

    pub fn max_var(&self) -> usize {
        self.max_var
    }

    /// Evaluates at a dense tuple (`tuple[i]` is the value of `x(i+1)`).
    pub fn eval_tuple(&self, algebra: &FiniteAlgebra, tuple: &[Element]) -> Element {
        let n = algebra.domain_size;
        let mut stack: Vec<Element> = Vec::with_capacity(self.stack);
        for instr in &self.code {
            match instr {
                Instr::Var(i) => stack.push(tuple[*i - 1]),
                Instr::Const(c) => stack.push(*c),
                Instr::Op(op) => {
                    let at = stack.len() - op.arity();
                    let v = op.apply(&stack[at..], n);
                    stack.truncate(at);
                    stack.push(v);
                }
            }
        }
        stack[0]
    }
}

/// Full value table of `term` viewed as an `arity`-ary function: entry at
/// [`crate::algebra::table_index`] of each tuple in `A^arity`.
///
/// `arity` must be at least the largest variable index of the term.
pub fn term_table(term: &Term, algebra: &FiniteAlgebra, arity: usize) -> Result<Vec<Element>> {
    assert!(arity >= term.max_var());
    let n = algebra.domain_size;
    let prog = Program::compile(term, algebra)?;
    let size = n.pow(arity as u32);
    let mut table = Vec::with_capacity(size);
    let mut tuple = vec![0; arity];
    for idx in 0..size {
        decode_index(idx, n, &mut tuple);
        table.push(prog.eval_tuple(algebra, &tuple));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parse_length_counts_symbols() {
        let z4 = fixtures::cyclic_group(4);
        let t = parse_term("plus(x1, neg(x2))", &z4).unwrap();
        assert_eq!(t.length(), 4);
        assert_eq!(
            t,
            Term::apply("plus", vec![Term::Var(1), Term::apply("neg", vec![Term::Var(2)])])
        );
    }

    #[test]
    fn parse_unbalanced_is_syntax_error() {
        let z4 = fixtures::cyclic_group(4);
        match parse_term("plus(x1", &z4) {
            Err(Error::Syntax { .. }) => {}
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn parse_constant_literal() {
        let z4 = fixtures::cyclic_group(4);
        let t = parse_term("#3", &z4).unwrap();
        assert_eq!(t, Term::Const(3));
        assert_eq!(t.length(), 1);
    }

    #[test]
    fn parse_errors() {
        let z4 = fixtures::cyclic_group(4);
        assert!(matches!(
            parse_term("#7", &z4),
            Err(Error::ConstantOutOfRange { .. })
        ));
        assert!(matches!(
            parse_term("weird(x1)", &z4),
            Err(Error::UnknownOperation(_))
        ));
        assert!(matches!(
            parse_term("plus(x1,x2,x3)", &z4),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn eval_examples() {
        let z4 = fixtures::cyclic_group(4);
        let t = parse_term("plus(x1,x2)", &z4).unwrap();
        assert_eq!(eval(&t, &z4, &Assignment::from_tuple(&[1, 3])).unwrap(), 0);

        let a3 = fixtures::z9_f2();
        let f2 = parse_term("f@2(x1,x2)", &a3).unwrap();
        assert_eq!(eval(&f2, &a3, &Assignment::from_tuple(&[2, 5])).unwrap(), 3);

        // Mal'cev identity m(a,a,b) = b for m = x1 - x2 + x3.
        let m = parse_term("plus(x1,plus(neg(x2),x3))", &z4).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(eval(&m, &z4, &Assignment::from_tuple(&[a, a, b])).unwrap(), b);
            }
        }
    }

    #[test]
    fn eval_unassigned_variable() {
        let z4 = fixtures::cyclic_group(4);
        let t = parse_term("plus(x1,x2)", &z4).unwrap();
        let mut asn = Assignment::new();
        asn.set(1, 2);
        assert!(matches!(
            eval(&t, &z4, &asn),
            Err(Error::UnassignedVariable(2))
        ));
    }

    #[test]
    fn support_masking_matches_paper_example() {
        // b = (x1,x2,0,0,x5) masked with S = {1,2,5}.
        let base = Assignment::from_tuple(&[1, 2, 3, 3, 2]);
        let masked = base.masked(&[1, 2, 5], 0);
        assert_eq!(masked, Assignment::from_tuple(&[1, 2, 0, 0, 2]));
    }

    #[test]
    fn eval_support_exhaustive_small() {
        // eval_support(t, b, S) = eval(t, b_S) for all S, over N <= 4 and <= 3 vars.
        let z4 = fixtures::cyclic_group(4);
        let terms = [
            "plus(x1,plus(x2,neg(x3)))",
            "plus(plus(x1,x1),neg(x2))",
            "neg(x3)",
        ];
        for src in terms {
            let t = parse_term(src, &z4).unwrap();
            let mut tuple = [0usize; 3];
            for idx in 0..64 {
                decode_index(idx, 4, &mut tuple);
                let base = Assignment::from_tuple(&tuple);
                for mask in 0u32..8 {
                    let support: Vec<usize> =
                        (1..=3).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                    let via_support = eval_support(&t, &z4, &base, &support).unwrap();
                    let direct = eval(&t, &z4, &base.masked(&support, 0)).unwrap();
                    assert_eq!(via_support, direct);
                }
            }
        }
    }

    #[test]
    fn full_support_equals_plain_eval() {
        let z4 = fixtures::cyclic_group(4);
        let t = parse_term("plus(x1,neg(x2))", &z4).unwrap();
        let base = Assignment::from_tuple(&[3, 2]);
        assert_eq!(
            eval_support(&t, &z4, &base, &[1, 2]).unwrap(),
            eval(&t, &z4, &base).unwrap()
        );
    }

    #[test]
    fn empty_support_is_all_zero_substitution() {
        let z4 = fixtures::cyclic_group(4);
        let t = parse_term("plus(plus(x1,x2),#2)", &z4).unwrap();
        let base = Assignment::from_tuple(&[3, 1]);
        assert_eq!(eval_support(&t, &z4, &base, &[]).unwrap(), 2);
    }

    #[test]
    fn print_parse_round_trip() {
        let a3 = fixtures::z9_f2();
        let src = "plus(f@2(x1,plus(x2,#4)),neg(x3))";
        let t = parse_term(src, &a3).unwrap();
        let back = parse_term(&t.to_string(), &a3).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn term_table_matches_eval() {
        let z4 = fixtures::cyclic_group(4);
        let t = parse_term("plus(x1,plus(x2,#1))", &z4).unwrap();
        let table = term_table(&t, &z4, 2).unwrap();
        let mut tuple = [0usize; 2];
        for (idx, &v) in table.iter().enumerate() {
            decode_index(idx, 4, &mut tuple);
            assert_eq!(v, eval(&t, &z4, &Assignment::from_tuple(&tuple)).unwrap());
        }
    }
}
