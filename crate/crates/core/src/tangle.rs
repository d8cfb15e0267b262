//! A small textual language for wiring diagrams over named objects and
//! morphisms: parser, typechecker, evaluator to exact matrices, and
//! identity checking with counterexample witnesses.
//!
//! Text is algebraic: in `f . g` the rightmost factor applies first. Only
//! shift-0 morphisms are admissible.

use crate::graded::{braiding, braiding_inverse, GradedMap, GradedSpace, SpaceRef};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TangleError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unbound name '{name}' at {line}:{col}")]
    Unbound { name: String, line: usize, col: usize },
    #[error("type error at {line}:{col}: {msg}")]
    Type { line: usize, col: usize, msg: String },
}

/// A formal tensor word of named objects.
pub type Word = Vec<String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Gen {
        name: String,
        line: usize,
        col: usize,
    },
    Id(Word),
    Psi(Word, Word),
    PsiInv(Word, Word),
    Tensor(Vec<Expr>),
    /// Composition, leftmost applied last.
    Compose(Vec<Expr>),
}

/// Named spaces and shift-0 morphisms with their word signatures. A
/// designated one-dimensional unit space is absorbed in tensor words, so
/// the unit object can be written or omitted interchangeably.
#[derive(Default)]
pub struct Env {
    spaces: BTreeMap<String, SpaceRef>,
    maps: BTreeMap<String, (Word, Word, GradedMap)>,
    unit_name: Option<String>,
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Env({} spaces, {} maps)",
            self.spaces.len(),
            self.maps.len()
        )
    }
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn add_space(&mut self, name: impl Into<String>, space: SpaceRef) {
        let prev = self.spaces.insert(name.into(), space);
        assert!(prev.is_none(), "duplicate space name");
    }

    /// Register the tensor unit under a name; it is absorbed in words.
    pub fn add_unit_space(&mut self, name: impl Into<String>, modulus: u32) {
        let name = name.into();
        self.add_space(name.clone(), GradedSpace::unit(modulus));
        self.unit_name = Some(name);
    }

    /// Drop unit factors from a word.
    fn normalize(&self, word: &Word) -> Word {
        match &self.unit_name {
            Some(u) => word.iter().filter(|n| *n != u).cloned().collect(),
            None => word.clone(),
        }
    }

    /// Register a morphism with its domain and codomain words; the realized
    /// words must match the map's spaces.
    pub fn add_map(
        &mut self,
        name: impl Into<String>,
        dom: Word,
        cod: Word,
        map: GradedMap,
    ) {
        assert_eq!(map.shift(), 0, "only shift-0 morphisms are admissible");
        let rd = self.realize(&dom).expect("domain word realizes");
        let rc = self.realize(&cod).expect("codomain word realizes");
        assert!(spaces_compatible(&rd, map.dom()), "domain word mismatch");
        assert!(spaces_compatible(&rc, map.cod()), "codomain word mismatch");
        let prev = self
            .maps
            .insert(name.into(), (self.normalize(&dom), self.normalize(&cod), map));
        assert!(prev.is_none(), "duplicate map name");
    }

    pub fn space(&self, name: &str) -> Option<&SpaceRef> {
        self.spaces.get(name)
    }

    /// Realized space of a word; unit factors are absorbed and the empty
    /// word realizes to the tensor unit.
    pub fn realize(&self, word: &Word) -> Option<SpaceRef> {
        let word = self.normalize(word);
        let mut it = word.iter();
        let first = match it.next() {
            Some(f) => f,
            None => return Some(GradedSpace::unit(self.modulus())),
        };
        let mut acc = self.spaces.get(first)?.clone();
        for name in it {
            acc = GradedSpace::tensor(&acc, self.spaces.get(name)?);
        }
        Some(acc)
    }

    fn modulus(&self) -> u32 {
        self.spaces
            .values()
            .next()
            .map(|s| s.modulus())
            .unwrap_or(3)
    }
}

/// An evaluated morphism: exact matrix between realized tensor words.
#[derive(Clone, PartialEq, Eq)]
pub struct TangleMor {
    pub dom: Word,
    pub cod: Word,
    pub mat: Vec<Vec<Scalar>>,
}

impl fmt::Debug for TangleMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TangleMor({:?} -> {:?})", self.dom, self.cod)
    }
}

impl TangleMor {
    fn from_map(dom: Word, cod: Word, map: &GradedMap) -> TangleMor {
        TangleMor {
            dom,
            cod,
            mat: map.matrix().clone(),
        }
    }

    /// Convert back to a graded map over the realized spaces.
    pub fn to_graded_map(&self, env: &Env) -> GradedMap {
        let dom = env.realize(&self.dom).expect("domain realizes");
        let cod = env.realize(&self.cod).expect("codomain realizes");
        GradedMap::new(dom, cod, 0, self.mat.clone()).expect("evaluated morphism is graded")
    }
}

pub fn parse(text: &str) -> Result<Expr, TangleError> {
    let mut p = ExprParser::new(text, 1);
    let e = p.parse_expr()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

struct ExprParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    line_start: usize,
}

impl<'a> ExprParser<'a> {
    fn new(text: &'a str, line: usize) -> ExprParser<'a> {
        ExprParser {
            bytes: text.as_bytes(),
            pos: 0,
            line,
            line_start: 0,
        }
    }

    fn col(&self) -> usize {
        self.pos - self.line_start + 1
    }

    fn err(&self, msg: &str) -> TangleError {
        TangleError::Syntax {
            line: self.line,
            col: self.col(),
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'\n' => {
                    self.line += 1;
                    self.pos += 1;
                    self.line_start = self.pos;
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), TangleError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn parse_name(&mut self) -> Result<String, TangleError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn parse_obj(&mut self) -> Result<Word, TangleError> {
        let mut word = vec![self.parse_name()?];
        while self.eat(b'*') {
            word.push(self.parse_name()?);
        }
        Ok(word)
    }

    /// expr := ten ('.' ten)*
    fn parse_expr(&mut self) -> Result<Expr, TangleError> {
        let mut stages = vec![self.parse_tensor()?];
        while self.eat(b'.') {
            stages.push(self.parse_tensor()?);
        }
        Ok(if stages.len() == 1 {
            stages.pop().unwrap()
        } else {
            Expr::Compose(stages)
        })
    }

    /// ten := atom ('*' atom)*
    fn parse_tensor(&mut self) -> Result<Expr, TangleError> {
        let mut factors = vec![self.parse_atom()?];
        while self.eat(b'*') {
            factors.push(self.parse_atom()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Tensor(factors)
        })
    }

    fn parse_atom(&mut self) -> Result<Expr, TangleError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.parse_expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {
                let line = self.line;
                let col = self.col();
                let name = self.parse_name()?;
                match name.as_str() {
                    "id" => {
                        self.expect(b'[')?;
                        let obj = self.parse_obj()?;
                        self.expect(b']')?;
                        Ok(Expr::Id(obj))
                    }
                    "psi" => {
                        self.expect(b'[')?;
                        let a = self.parse_obj()?;
                        self.expect(b',')?;
                        let b = self.parse_obj()?;
                        self.expect(b']')?;
                        Ok(Expr::Psi(a, b))
                    }
                    "psinv" => {
                        self.expect(b'[')?;
                        let a = self.parse_obj()?;
                        self.expect(b',')?;
                        let b = self.parse_obj()?;
                        self.expect(b']')?;
                        Ok(Expr::PsiInv(a, b))
                    }
                    _ => Ok(Expr::Gen { name, line, col }),
                }
            }
            _ => Err(self.err("expected an atom")),
        }
    }
}

/// Wire types of an expression; every referenced name must be bound and
/// composition stages must match. Unit factors are absorbed.
pub fn typecheck(expr: &Expr, env: &Env) -> Result<(Word, Word), TangleError> {
    match expr {
        Expr::Gen { name, line, col } => match env.maps.get(name) {
            Some((dom, cod, _)) => Ok((dom.clone(), cod.clone())),
            None => Err(TangleError::Unbound {
                name: name.clone(),
                line: *line,
                col: *col,
            }),
        },
        Expr::Id(obj) => {
            check_word(obj, env)?;
            let w = env.normalize(obj);
            Ok((w.clone(), w))
        }
        Expr::Psi(a, b) => {
            check_word(a, env)?;
            check_word(b, env)?;
            let (a, b) = (env.normalize(a), env.normalize(b));
            let mut dom = a.clone();
            dom.extend(b.iter().cloned());
            let mut cod = b.clone();
            cod.extend(a.iter().cloned());
            Ok((dom, cod))
        }
        Expr::PsiInv(a, b) => {
            check_word(a, env)?;
            check_word(b, env)?;
            let (a, b) = (env.normalize(a), env.normalize(b));
            let mut dom = b.clone();
            dom.extend(a.iter().cloned());
            let mut cod = a.clone();
            cod.extend(b.iter().cloned());
            Ok((dom, cod))
        }
        Expr::Tensor(parts) => {
            let mut dom = Vec::new();
            let mut cod = Vec::new();
            for p in parts {
                let (d, c) = typecheck(p, env)?;
                dom.extend(d);
                cod.extend(c);
            }
            Ok((dom, cod))
        }
        Expr::Compose(stages) => {
            let mut sig: Option<(Word, Word)> = None;
            for (k, stage) in stages.iter().enumerate().rev() {
                let (d, c) = typecheck(stage, env)?;
                match sig {
                    None => sig = Some((d, c)),
                    Some((dom0, mid)) => {
                        if d != mid {
                            return Err(TangleError::Type {
                                line: 0,
                                col: 0,
                                msg: format!(
                                    "composition stage {} expects {:?} but receives {:?}",
                                    k + 1,
                                    d,
                                    mid
                                ),
                            });
                        }
                        sig = Some((dom0, c));
                    }
                }
            }
            sig.ok_or_else(|| TangleError::Type {
                line: 0,
                col: 0,
                msg: "empty composition".to_string(),
            })
        }
    }
}

fn check_word(word: &Word, env: &Env) -> Result<(), TangleError> {
    for name in word {
        if env.space(name).is_none() {
            return Err(TangleError::Unbound {
                name: name.clone(),
                line: 0,
                col: 0,
            });
        }
    }
    Ok(())
}

/// Same modulus, dimension, and degree sequence.
fn spaces_compatible(a: &SpaceRef, b: &SpaceRef) -> bool {
    a.modulus() == b.modulus()
        && a.dim() == b.dim()
        && (0..a.dim()).all(|i| a.degree(i) == b.degree(i))
}

/// Evaluate to an exact matrix between realized words.
pub fn evaluate(expr: &Expr, env: &Env) -> Result<TangleMor, TangleError> {
    typecheck(expr, env)?;
    eval_inner(expr, env)
}

fn eval_inner(expr: &Expr, env: &Env) -> Result<TangleMor, TangleError> {
    match expr {
        Expr::Gen { name, .. } => {
            let (dom, cod, map) = env.maps.get(name).unwrap();
            Ok(TangleMor::from_map(dom.clone(), cod.clone(), map))
        }
        Expr::Id(obj) => {
            let space = env.realize(obj).unwrap();
            let w = env.normalize(obj);
            Ok(TangleMor::from_map(
                w.clone(),
                w,
                &GradedMap::identity(&space),
            ))
        }
        Expr::Psi(a, b) => {
            let va = env.realize(a).unwrap();
            let vb = env.realize(b).unwrap();
            let (a, b) = (env.normalize(a), env.normalize(b));
            let mut dom = a.clone();
            dom.extend(b.iter().cloned());
            let mut cod = b.clone();
            cod.extend(a.iter().cloned());
            Ok(TangleMor {
                dom,
                cod,
                mat: braiding(&va, &vb).matrix().clone(),
            })
        }
        Expr::PsiInv(a, b) => {
            let va = env.realize(a).unwrap();
            let vb = env.realize(b).unwrap();
            let (a, b) = (env.normalize(a), env.normalize(b));
            let mut dom = b.clone();
            dom.extend(a.iter().cloned());
            let mut cod = a.clone();
            cod.extend(b.iter().cloned());
            Ok(TangleMor {
                dom,
                cod,
                mat: braiding_inverse(&va, &vb).matrix().clone(),
            })
        }
        Expr::Tensor(parts) => {
            let mors: Vec<TangleMor> = parts
                .iter()
                .map(|p| eval_inner(p, env))
                .collect::<Result<_, _>>()?;
            let n = env.modulus();
            let mut acc = mors[0].clone();
            for m in &mors[1..] {
                acc = kronecker(&acc, m, n);
            }
            Ok(acc)
        }
        Expr::Compose(stages) => {
            let mut acc: Option<TangleMor> = None;
            for stage in stages.iter().rev() {
                let m = eval_inner(stage, env)?;
                acc = Some(match acc {
                    None => m,
                    Some(prev) => mat_compose(&m, &prev, env.modulus()),
                });
            }
            Ok(acc.unwrap())
        }
    }
}

fn kronecker(a: &TangleMor, b: &TangleMor, n: u32) -> TangleMor {
    let ar = a.mat.len();
    let ac = if ar > 0 { a.mat[0].len() } else { 0 };
    let br = b.mat.len();
    let bc = if br > 0 { b.mat[0].len() } else { 0 };
    let mut mat = vec![vec![Scalar::zero(n); ac * bc]; ar * br];
    for (i, arow) in a.mat.iter().enumerate() {
        for (j, av) in arow.iter().enumerate() {
            if av.is_zero() {
                continue;
            }
            for (k, brow) in b.mat.iter().enumerate() {
                for (l, bv) in brow.iter().enumerate() {
                    if !bv.is_zero() {
                        mat[i * br + k][j * bc + l] = av * bv;
                    }
                }
            }
        }
    }
    let mut dom = a.dom.clone();
    dom.extend(b.dom.iter().cloned());
    let mut cod = a.cod.clone();
    cod.extend(b.cod.iter().cloned());
    TangleMor { dom, cod, mat }
}

/// outer . inner as matrices.
fn mat_compose(outer: &TangleMor, inner: &TangleMor, n: u32) -> TangleMor {
    assert_eq!(outer.dom, inner.cod, "stage mismatch after typecheck");
    let rows = outer.mat.len();
    let mid = inner.mat.len();
    let cols = if mid > 0 { inner.mat[0].len() } else { 0 };
    let mut mat = vec![vec![Scalar::zero(n); cols]; rows];
    for (i, orow) in outer.mat.iter().enumerate() {
        for (k, ov) in orow.iter().enumerate() {
            if ov.is_zero() {
                continue;
            }
            for (j, iv) in inner.mat[k].iter().enumerate() {
                if !iv.is_zero() {
                    mat[i][j] += &(ov * iv);
                }
            }
        }
    }
    TangleMor {
        dom: inner.dom.clone(),
        cod: outer.cod.clone(),
        mat,
    }
}

/// Compare two expressions; Ok(None) on equality, Ok(Some(witness)) with the
/// first differing domain basis vector otherwise.
pub fn check_identity(
    lhs: &Expr,
    rhs: &Expr,
    env: &Env,
) -> Result<Option<String>, TangleError> {
    let (ld, lc) = typecheck(lhs, env)?;
    let (rd, rc) = typecheck(rhs, env)?;
    if ld != rd || lc != rc {
        return Err(TangleError::Type {
            line: 0,
            col: 0,
            msg: format!(
                "sides have different wire types: {ld:?} -> {lc:?} vs {rd:?} -> {rc:?}"
            ),
        });
    }
    let l = eval_inner(lhs, env)?;
    let r = eval_inner(rhs, env)?;
    let dom_space = env.realize(&ld).unwrap();
    for j in 0..dom_space.dim() {
        let col_l: Vec<&Scalar> = l.mat.iter().map(|row| &row[j]).collect();
        let col_r: Vec<&Scalar> = r.mat.iter().map(|row| &row[j]).collect();
        if col_l != col_r {
            return Ok(Some(dom_space.name(j).to_string()));
        }
    }
    Ok(None)
}

/// One `check:` line of an identity file.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub line: usize,
    pub lhs: Expr,
    pub rhs: Expr,
    pub text: String,
}

/// Parse an identity file: `check: expr == expr` lines with '#' comments.
pub fn parse_identity_file(text: &str) -> Result<Vec<IdentityCheck>, TangleError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let rest = trimmed.strip_prefix("check:").ok_or(TangleError::Syntax {
            line: line_no,
            col: 1,
            msg: "expected 'check:'".to_string(),
        })?;
        let (lhs_text, rhs_text) = rest.split_once("==").ok_or(TangleError::Syntax {
            line: line_no,
            col: 1,
            msg: "expected '=='".to_string(),
        })?;
        let parse_at = |s: &str| -> Result<Expr, TangleError> {
            let mut p = ExprParser::new(s, line_no);
            let e = p.parse_expr()?;
            p.skip_ws();
            if p.pos < p.bytes.len() {
                return Err(p.err("trailing input"));
            }
            Ok(e)
        };
        out.push(IdentityCheck {
            line: line_no,
            lhs: parse_at(lhs_text)?,
            rhs: parse_at(rhs_text)?,
            text: rest.trim().to_string(),
        });
    }
    Ok(out)
}

/// Outcome of one identity check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub line: usize,
    pub text: String,
    pub witness: Option<String>,
}

/// Run every check in an identity file against the environment.
pub fn run_identity_file(text: &str, env: &Env) -> Result<Vec<CheckOutcome>, TangleError> {
    let checks = parse_identity_file(text)?;
    let mut out = Vec::new();
    for check in checks {
        let witness = check_identity(&check.lhs, &check.rhs, env)?;
        out.push(CheckOutcome {
            line: check.line,
            text: check.text,
            witness,
        });
    }
    Ok(out)
}
