//! Line-oriented model files: named algebras, Hopf data, coactions, and
//! morphisms given by structure constants. Unspecified structure constants
//! are zero; products with a declared unit are implied. Every statement is
//! validated for degree homogeneity as it is read, and errors carry the
//! offending line.

use crate::algebra::{Algebra, Coaction, Hopf};
use crate::graded::{GradedMap, GradedSpace, SpaceRef};
use crate::scalar::{Scalar, ScalarError};
use crate::tangle::Env;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ModelError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ModelError> {
    Err(ModelError {
        line,
        msg: msg.into(),
    })
}

/// A parsed and elaborated model file.
#[derive(Debug)]
pub struct Model {
    pub modulus: u32,
    algebras: Vec<(String, Arc<Algebra>)>,
    hopfs: Vec<(String, Arc<Hopf>)>,
    coactions: Vec<(String, Coaction)>,
    maps: Vec<NamedMap>,
}

pub struct NamedMap {
    pub name: String,
    pub dom_word: Vec<String>,
    pub cod_word: Vec<String>,
    pub map: GradedMap,
}

impl Model {
    pub fn algebras(&self) -> impl Iterator<Item = (&str, &Arc<Algebra>)> {
        self.algebras.iter().map(|(n, a)| (n.as_str(), a))
    }

    pub fn hopfs(&self) -> impl Iterator<Item = (&str, &Arc<Hopf>)> {
        self.hopfs.iter().map(|(n, h)| (n.as_str(), h))
    }

    pub fn coactions(&self) -> impl Iterator<Item = (&str, &Coaction)> {
        self.coactions.iter().map(|(n, c)| (n.as_str(), c))
    }

    pub fn named_maps(&self) -> impl Iterator<Item = &NamedMap> {
        self.maps.iter()
    }

    pub fn algebra(&self, name: &str) -> Option<&Arc<Algebra>> {
        self.algebras
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| a)
    }

    pub fn hopf(&self, name: &str) -> Option<&Arc<Hopf>> {
        self.hopfs.iter().find(|(n, _)| n == name).map(|(_, h)| h)
    }

    pub fn coaction(&self, name: &str) -> Option<&Coaction> {
        self.coactions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
    }

    pub fn named_map(&self, name: &str) -> Option<&NamedMap> {
        self.maps.iter().find(|m| m.name == name)
    }

    /// Wiring environment: one space per algebra plus the absorbed unit
    /// object `I`; structure morphisms under conventional names
    /// (`mul_X`, `eta_X`, `comul_H`, `eps_H`, `S_H`, `Sinv_H`, `ad_H`),
    /// every declared coaction and named morphism under its own name.
    pub fn tangle_env(&self) -> Env {
        let mut env = Env::new();
        env.add_unit_space("I", self.modulus);
        for (name, alg) in &self.algebras {
            env.add_space(name.clone(), alg.space().clone());
        }
        for (name, alg) in &self.algebras {
            env.add_map(
                format!("mul_{name}"),
                vec![name.clone(), name.clone()],
                vec![name.clone()],
                alg.mult().clone(),
            );
            env.add_map(
                format!("eta_{name}"),
                vec!["I".into()],
                vec![name.clone()],
                alg.unit_map(),
            );
        }
        for (name, hopf) in &self.hopfs {
            env.add_map(
                format!("comul_{name}"),
                vec![name.clone()],
                vec![name.clone(), name.clone()],
                hopf.comul().clone(),
            );
            env.add_map(
                format!("eps_{name}"),
                vec![name.clone()],
                vec!["I".into()],
                hopf.counit().clone(),
            );
            env.add_map(
                format!("S_{name}"),
                vec![name.clone()],
                vec![name.clone()],
                hopf.antipode().clone(),
            );
            if let Some(sinv) = hopf.antipode_inv() {
                env.add_map(
                    format!("Sinv_{name}"),
                    vec![name.clone()],
                    vec![name.clone()],
                    sinv.clone(),
                );
            }
            if let Ok(ad) = crate::algebra::adjoint_coaction(hopf) {
                env.add_map(
                    format!("ad_{name}"),
                    vec![name.clone()],
                    vec![name.clone(), name.clone()],
                    ad.map().clone(),
                );
            }
        }
        for (name, coaction) in &self.coactions {
            let carrier_name = self
                .algebras
                .iter()
                .find(|(_, a)| a.space().as_ref() == coaction.carrier().as_ref())
                .map(|(n, _)| n.clone())
                .expect("coaction carrier is a declared algebra");
            let hopf_name = self
                .hopfs
                .iter()
                .find(|(_, h)| Arc::ptr_eq(h, coaction.hopf()))
                .map(|(n, _)| n.clone())
                .expect("coaction group is a declared hopf");
            env.add_map(
                name.clone(),
                vec![carrier_name.clone()],
                vec![carrier_name, hopf_name],
                coaction.map().clone(),
            );
        }
        for m in &self.maps {
            env.add_map(
                m.name.clone(),
                m.dom_word.clone(),
                m.cod_word.clone(),
                m.map.clone(),
            );
        }
        env
    }
}

pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    Parser::new(text).run()
}

const RESERVED: &[&str] = &["id", "psi", "psinv", "q", "I", "check"];

struct PendingAlgebra {
    line: usize,
    name: String,
    modulus: Option<u32>,
    basis: Vec<(String, u32)>,
    unit: Option<String>,
    muls: Vec<(usize, String, String, String)>,
}

enum Section {
    None,
    Algebra(PendingAlgebra),
    Coalgebra {
        line: usize,
        name: String,
        counit: Vec<(usize, String, String)>,
        comul: Vec<(usize, String, String)>,
        antipode: Vec<(usize, String, String)>,
        antipode_inv: Vec<(usize, String, String)>,
    },
    Coaction {
        line: usize,
        name: String,
        on: String,
        by: String,
        sends: Vec<(usize, String, String)>,
    },
    Map {
        line: usize,
        name: String,
        dom: Vec<String>,
        cod: Vec<String>,
        shift: u32,
        sends: Vec<(usize, String, String)>,
    },
}

struct Parser<'a> {
    text: &'a str,
    model: Model,
    section: Section,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Parser<'a> {
        Parser {
            text,
            model: Model {
                modulus: 0,
                algebras: Vec::new(),
                hopfs: Vec::new(),
                coactions: Vec::new(),
                maps: Vec::new(),
            },
            section: Section::None,
        }
    }

    fn run(mut self) -> Result<Model, ModelError> {
        let lines: Vec<&str> = self.text.lines().collect();
        for (idx, raw) in lines.iter().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            self.statement(line_no, trimmed)?;
        }
        self.flush_section(usize::MAX)?;
        if self.model.modulus == 0 {
            return err(1, "no algebra declared");
        }
        Ok(self.model)
    }

    fn statement(&mut self, line: usize, text: &str) -> Result<(), ModelError> {
        let mut words = text.split_whitespace();
        let head = words.next().unwrap();
        match head {
            "algebra" | "coalgebra" | "coaction" | "map" => {
                self.flush_section(line)?;
            }
            _ => {}
        }
        match head {
            "algebra" => {
                let name = expect_name(line, words.next())?;
                check_fresh_name(line, &name, &self.model)?;
                expect_end(line, words.next())?;
                self.section = Section::Algebra(PendingAlgebra {
                    line,
                    name,
                    modulus: None,
                    basis: Vec::new(),
                    unit: None,
                    muls: Vec::new(),
                });
                Ok(())
            }
            "coalgebra" => {
                let name = expect_name(line, words.next())?;
                if self.model.algebra(&name).is_none() {
                    return err(line, format!("coalgebra extends unknown algebra '{name}'"));
                }
                if self.model.hopf(&name).is_some() {
                    return err(line, format!("'{name}' already has coalgebra data"));
                }
                expect_end(line, words.next())?;
                self.section = Section::Coalgebra {
                    line,
                    name,
                    counit: Vec::new(),
                    comul: Vec::new(),
                    antipode: Vec::new(),
                    antipode_inv: Vec::new(),
                };
                Ok(())
            }
            "coaction" => {
                // coaction NAME on ALG by HOPF
                let name = expect_name(line, words.next())?;
                check_fresh_name(line, &name, &self.model)?;
                if words.next() != Some("on") {
                    return err(line, "expected 'on'");
                }
                let on = expect_name(line, words.next())?;
                if words.next() != Some("by") {
                    return err(line, "expected 'by'");
                }
                let by = expect_name(line, words.next())?;
                expect_end(line, words.next())?;
                if self.model.algebra(&on).is_none() {
                    return err(line, format!("unknown algebra '{on}'"));
                }
                if self.model.hopf(&by).is_none() {
                    return err(line, format!("unknown hopf '{by}'"));
                }
                self.section = Section::Coaction {
                    line,
                    name,
                    on,
                    by,
                    sends: Vec::new(),
                };
                Ok(())
            }
            "map" => {
                // map NAME : A [* B ...] -> C [* D ...] [shift K]
                let rest = text.strip_prefix("map").unwrap().trim();
                let (name, rest) = match rest.split_once(':') {
                    Some((n, r)) => (n.trim().to_string(), r.trim()),
                    None => return err(line, "expected ':' after the map name"),
                };
                check_fresh_name(line, &name, &self.model)?;
                let (sig, shift_text) = match rest.find("shift") {
                    Some(p) => (rest[..p].trim(), Some(rest[p + 5..].trim())),
                    None => (rest, None),
                };
                let (dom_text, cod_text) = match sig.split_once("->") {
                    Some((d, c)) => (d.trim(), c.trim()),
                    None => return err(line, "expected '->' in the map signature"),
                };
                let parse_word = |t: &str| -> Result<Vec<String>, ModelError> {
                    t.split('*')
                        .map(|w| {
                            let w = w.trim();
                            if w.is_empty() {
                                err(line, "empty factor in a map signature")
                            } else {
                                Ok(w.to_string())
                            }
                        })
                        .collect()
                };
                let dom = parse_word(dom_text)?;
                let cod = parse_word(cod_text)?;
                for w in dom.iter().chain(cod.iter()) {
                    if self.model.algebra(w).is_none() {
                        return err(line, format!("unknown algebra '{w}' in map signature"));
                    }
                }
                let shift = match shift_text {
                    None => 0,
                    Some(t) => {
                        let k: i64 = t
                            .parse()
                            .map_err(|_| ModelError {
                                line,
                                msg: format!("bad shift '{t}'"),
                            })?;
                        let n = self.model.modulus as i64;
                        (((k % n) + n) % n) as u32
                    }
                };
                self.section = Section::Map {
                    line,
                    name,
                    dom,
                    cod,
                    shift,
                    sends: Vec::new(),
                };
                Ok(())
            }
            "modulus" => {
                let value: u32 = expect_name(line, words.next())?
                    .parse()
                    .map_err(|_| ModelError {
                        line,
                        msg: "bad modulus".into(),
                    })?;
                if value == 0 {
                    return err(line, "modulus must be positive");
                }
                expect_end(line, words.next())?;
                match &mut self.section {
                    Section::Algebra(a) => {
                        a.modulus = Some(value);
                        Ok(())
                    }
                    _ => err(line, "'modulus' outside an algebra block"),
                }
            }
            "basis" => match &mut self.section {
                Section::Algebra(a) => {
                    for item in words {
                        let (name, degree) = match item.split_once(':') {
                            Some((n, d)) => (n, d),
                            None => return err(line, format!("bad basis item '{item}'")),
                        };
                        if RESERVED.contains(&name) {
                            return err(line, format!("reserved name '{name}'"));
                        }
                        let degree: u32 = degree.parse().map_err(|_| ModelError {
                            line,
                            msg: format!("bad degree in '{item}'"),
                        })?;
                        a.basis.push((name.to_string(), degree));
                    }
                    Ok(())
                }
                _ => err(line, "'basis' outside an algebra block"),
            },
            "unit" => match &mut self.section {
                Section::Algebra(a) => {
                    a.unit = Some(expect_name(line, words.next())?);
                    expect_end(line, words.next())?;
                    Ok(())
                }
                _ => err(line, "'unit' outside an algebra block"),
            },
            "mul" => match &mut self.section {
                Section::Algebra(a) => {
                    let x = expect_name(line, words.next())?;
                    let y = expect_name(line, words.next())?;
                    if words.next() != Some("->") {
                        return err(line, "expected '->'");
                    }
                    let rhs: Vec<&str> = words.collect();
                    a.muls.push((line, x, y, rhs.join(" ")));
                    Ok(())
                }
                _ => err(line, "'mul' outside an algebra block"),
            },
            "counit" | "comul" | "antipode" | "antipode_inv" => {
                let x = expect_name(line, words.next())?;
                if words.next() != Some("->") {
                    return err(line, "expected '->'");
                }
                let rhs: Vec<&str> = words.collect();
                let rhs = rhs.join(" ");
                match &mut self.section {
                    Section::Coalgebra {
                        counit,
                        comul,
                        antipode,
                        antipode_inv,
                        ..
                    } => {
                        match head {
                            "counit" => counit.push((line, x, rhs)),
                            "comul" => comul.push((line, x, rhs)),
                            "antipode" => antipode.push((line, x, rhs)),
                            _ => antipode_inv.push((line, x, rhs)),
                        }
                        Ok(())
                    }
                    _ => err(line, format!("'{head}' outside a coalgebra block")),
                }
            }
            "send" => {
                let x = expect_name(line, words.next())?;
                if words.next() != Some("->") {
                    return err(line, "expected '->'");
                }
                let rhs: Vec<&str> = words.collect();
                let rhs = rhs.join(" ");
                match &mut self.section {
                    Section::Coaction { sends, .. } | Section::Map { sends, .. } => {
                        sends.push((line, x, rhs));
                        Ok(())
                    }
                    _ => err(line, "'send' outside a coaction or map block"),
                }
            }
            other => err(line, format!("unknown statement '{other}'")),
        }
    }

    fn flush_section(&mut self, next_line: usize) -> Result<(), ModelError> {
        let section = std::mem::replace(&mut self.section, Section::None);
        match section {
            Section::None => Ok(()),
            Section::Algebra(a) => self.finish_algebra(a),
            Section::Coalgebra {
                line,
                name,
                counit,
                comul,
                antipode,
                antipode_inv,
            } => self.finish_coalgebra(line, name, counit, comul, antipode, antipode_inv),
            Section::Coaction {
                line,
                name,
                on,
                by,
                sends,
            } => self.finish_coaction(line, name, on, by, sends),
            Section::Map {
                line,
                name,
                dom,
                cod,
                shift,
                sends,
            } => self.finish_map(line, name, dom, cod, shift, sends),
        }
        .map_err(|e| {
            if e.line == usize::MAX {
                ModelError {
                    line: next_line,
                    msg: e.msg,
                }
            } else {
                e
            }
        })
    }

    fn finish_algebra(&mut self, a: PendingAlgebra) -> Result<(), ModelError> {
        let modulus = match a.modulus {
            Some(m) => m,
            None => return err(a.line, "algebra block is missing 'modulus'"),
        };
        if self.model.modulus == 0 {
            self.model.modulus = modulus;
        } else if self.model.modulus != modulus {
            return err(a.line, "all algebras must share one grading modulus");
        }
        if a.basis.is_empty() {
            return err(a.line, "algebra block is missing 'basis'");
        }
        let space = GradedSpace::new(modulus, a.basis.clone()).map_err(|e| ModelError {
            line: a.line,
            msg: e.to_string(),
        })?;
        let unit_name = match &a.unit {
            Some(u) => u,
            None => return err(a.line, "algebra block is missing 'unit'"),
        };
        let unit_index = match space.index_of(unit_name) {
            Some(i) => i,
            None => return err(a.line, format!("unknown unit '{unit_name}'")),
        };
        let mut products = Vec::new();
        for (line, x, y, rhs) in &a.muls {
            let xi = space
                .index_of(x)
                .ok_or_else(|| ModelError {
                    line: *line,
                    msg: format!("unknown basis vector '{x}'"),
                })?;
            let yi = space.index_of(y).ok_or_else(|| ModelError {
                line: *line,
                msg: format!("unknown basis vector '{y}'"),
            })?;
            if xi == unit_index || yi == unit_index {
                return err(*line, "products with the unit are implied");
            }
            let img = parse_vector(*line, modulus, &space, rhs)?;
            let want = (space.degree(xi) + space.degree(yi)) % modulus;
            if let Some(k) = (0..space.dim())
                .find(|&k| !img[k].is_zero() && space.degree(k) != want)
            {
                return err(
                    *line,
                    format!(
                        "degree violation: |{}| != |{}| + |{}| (mod {})",
                        space.name(k),
                        x,
                        y,
                        modulus
                    ),
                );
            }
            products.push((xi, yi, img));
        }
        let algebra = Algebra::from_table(space, unit_index, &products);
        self.model.algebras.push((a.name, Arc::new(algebra)));
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn finish_coalgebra(
        &mut self,
        line: usize,
        name: String,
        counit: Vec<(usize, String, String)>,
        comul: Vec<(usize, String, String)>,
        antipode: Vec<(usize, String, String)>,
        antipode_inv: Vec<(usize, String, String)>,
    ) -> Result<(), ModelError> {
        let algebra = self.model.algebra(&name).unwrap().clone();
        let space = algebra.space().clone();
        let n = self.model.modulus;
        let unit_space = GradedSpace::unit(n);
        let sq = GradedSpace::tensor(&space, &space);

        let mut counit_images = vec![unit_space.zero_vector(); space.dim()];
        for (l, x, rhs) in &counit {
            let xi = index_of(*l, &space, x)?;
            let value = Scalar::parse(n, rhs).map_err(|e| scalar_err(*l, e))?;
            if !value.is_zero() && space.degree(xi) != 0 {
                return err(*l, format!("counit of '{x}' must vanish in nonzero degree"));
            }
            counit_images[xi] = vec![value];
        }
        let counit_map = graded_err(line, GradedMap::from_images(
            space.clone(),
            unit_space,
            0,
            counit_images,
        ))?;

        let build_endo = |entries: &[(usize, String, String)]| -> Result<Vec<Vec<Scalar>>, ModelError> {
            let mut images = vec![space.zero_vector(); space.dim()];
            for (l, x, rhs) in entries {
                let xi = index_of(*l, &space, x)?;
                let img = parse_vector(*l, n, &space, rhs)?;
                check_degree(*l, &space, space.degree(xi), &img)?;
                images[xi] = img;
            }
            Ok(images)
        };
        let mut comul_images = vec![sq.zero_vector(); space.dim()];
        for (l, x, rhs) in &comul {
            let xi = index_of(*l, &space, x)?;
            let img = parse_vector(*l, n, &sq, rhs)?;
            check_degree(*l, &sq, space.degree(xi), &img)?;
            comul_images[xi] = img;
        }
        let comul_map = graded_err(line, GradedMap::from_images(space.clone(), sq, 0, comul_images))?;
        let antipode_map = graded_err(
            line,
            GradedMap::from_images(space.clone(), space.clone(), 0, build_endo(&antipode)?),
        )?;
        let antipode_inv_map = if antipode_inv.is_empty() {
            None
        } else {
            Some(graded_err(
                line,
                GradedMap::from_images(space.clone(), space.clone(), 0, build_endo(&antipode_inv)?),
            )?)
        };
        let hopf = Hopf::new(
            algebra.as_ref().clone(),
            comul_map,
            counit_map,
            antipode_map,
            antipode_inv_map,
        );
        self.model.hopfs.push((name, Arc::new(hopf)));
        Ok(())
    }

    fn finish_coaction(
        &mut self,
        line: usize,
        name: String,
        on: String,
        by: String,
        sends: Vec<(usize, String, String)>,
    ) -> Result<(), ModelError> {
        let algebra = self.model.algebra(&on).unwrap().clone();
        let hopf = self.model.hopf(&by).unwrap().clone();
        let space = algebra.space().clone();
        let cod = GradedSpace::tensor(&space, hopf.space());
        let n = self.model.modulus;
        let mut images = vec![cod.zero_vector(); space.dim()];
        for (l, x, rhs) in &sends {
            let xi = index_of(*l, &space, x)?;
            let img = parse_vector(*l, n, &cod, rhs)?;
            check_degree(*l, &cod, space.degree(xi), &img)?;
            images[xi] = img;
        }
        let map = graded_err(line, GradedMap::from_images(space.clone(), cod, 0, images))?;
        self.model
            .coactions
            .push((name, Coaction::new(space, hopf, map)));
        Ok(())
    }

    fn finish_map(
        &mut self,
        line: usize,
        name: String,
        dom: Vec<String>,
        cod: Vec<String>,
        shift: u32,
        sends: Vec<(usize, String, String)>,
    ) -> Result<(), ModelError> {
        let n = self.model.modulus;
        let realize = |word: &[String]| -> SpaceRef {
            let mut acc = self.model.algebra(&word[0]).unwrap().space().clone();
            for w in &word[1..] {
                acc = GradedSpace::tensor(&acc, self.model.algebra(w).unwrap().space());
            }
            acc
        };
        let dom_space = realize(&dom);
        let cod_space = realize(&cod);
        let mut images = vec![cod_space.zero_vector(); dom_space.dim()];
        for (l, x, rhs) in &sends {
            let xi = index_of(*l, &dom_space, x)?;
            let img = parse_vector(*l, n, &cod_space, rhs)?;
            check_degree(*l, &cod_space, (dom_space.degree(xi) + shift) % n, &img)?;
            images[xi] = img;
        }
        let map = graded_err(
            line,
            GradedMap::from_images(dom_space, cod_space, shift, images),
        )?;
        self.model.maps.push(NamedMap {
            name,
            dom_word: dom,
            cod_word: cod,
            map,
        });
        Ok(())
    }
}

fn expect_name(line: usize, w: Option<&str>) -> Result<String, ModelError> {
    match w {
        Some(name) => {
            if RESERVED.contains(&name) {
                err(line, format!("reserved name '{name}'"))
            } else {
                Ok(name.to_string())
            }
        }
        None => err(line, "expected a name"),
    }
}

fn expect_end(line: usize, w: Option<&str>) -> Result<(), ModelError> {
    match w {
        None => Ok(()),
        Some(extra) => err(line, format!("unexpected '{extra}'")),
    }
}

fn check_fresh_name(line: usize, name: &str, model: &Model) -> Result<(), ModelError> {
    let clash = model.algebra(name).is_some()
        || model.coaction(name).is_some()
        || model.named_map(name).is_some();
    if clash {
        err(line, format!("duplicate name '{name}'"))
    } else {
        Ok(())
    }
}

fn index_of(line: usize, space: &SpaceRef, name: &str) -> Result<usize, ModelError> {
    space.index_of(name).ok_or_else(|| ModelError {
        line,
        msg: format!("unknown basis vector '{name}'"),
    })
}

fn check_degree(
    line: usize,
    space: &SpaceRef,
    want: u32,
    img: &[Scalar],
) -> Result<(), ModelError> {
    for (k, c) in img.iter().enumerate() {
        if !c.is_zero() && space.degree(k) != want {
            return err(
                line,
                format!(
                    "degree violation: '{}' has degree {} but {} is required",
                    space.name(k),
                    space.degree(k),
                    want
                ),
            );
        }
    }
    Ok(())
}

fn scalar_err(line: usize, e: ScalarError) -> ModelError {
    ModelError {
        line,
        msg: e.to_string(),
    }
}

fn graded_err(line: usize, r: Result<GradedMap, crate::graded::GradedError>) -> Result<GradedMap, ModelError> {
    r.map_err(|e| ModelError {
        line,
        msg: e.to_string(),
    })
}

/// Parse a sum of scalar-weighted tensor atoms over a named basis:
/// `term (('+'|'-') term)*` with `term := coef? atom | '0'` and
/// `coef := rat | '(' scalar ')'`; atoms join basis names with '.'.
pub fn parse_vector(
    line: usize,
    modulus: u32,
    space: &SpaceRef,
    text: &str,
) -> Result<Vec<Scalar>, ModelError> {
    let mut out = space.zero_vector();
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut first = true;
    let fail = |msg: &str| ModelError {
        line,
        msg: format!("{msg} in '{text}'"),
    };
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            if first {
                return Err(fail("empty expression"));
            }
            return Ok(out);
        }
        let mut negate = false;
        if !first {
            match bytes[pos] {
                b'+' => pos += 1,
                b'-' => {
                    negate = true;
                    pos += 1;
                }
                _ => return Err(fail("expected '+' or '-'")),
            }
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
        } else if bytes.get(pos) == Some(&b'-') {
            negate = true;
            pos += 1;
        }
        first = false;
        // coefficient; digit-leading tokens are atoms when they continue
        // with '.', letters, or '_' (basis names may start with a digit)
        let mut coeff = Scalar::one(modulus);
        if bytes.get(pos) == Some(&b'(') {
            let close = text[pos..]
                .find(')')
                .ok_or_else(|| fail("unbalanced '('"))?;
            let inner = &text[pos + 1..pos + close];
            coeff = Scalar::parse(modulus, inner).map_err(|e| scalar_err(line, e))?;
            pos += close + 1;
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
        } else if pos < bytes.len() && bytes[pos].is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'/') {
                pos += 1;
            }
            let continues_as_atom = matches!(
                bytes.get(pos),
                Some(c) if *c == b'.' || *c == b'_' || c.is_ascii_alphabetic()
            );
            if continues_as_atom {
                pos = start;
            } else {
                let token = &text[start..pos];
                let mut look = pos;
                while look < bytes.len() && bytes[look].is_ascii_whitespace() {
                    look += 1;
                }
                let at_term_end =
                    look >= bytes.len() || bytes[look] == b'+' || bytes[look] == b'-';
                if at_term_end {
                    // the token is the whole term: a basis name or a zero
                    if space.index_of(token).is_some() {
                        pos = start;
                    } else {
                        let value =
                            Scalar::parse(modulus, token).map_err(|e| scalar_err(line, e))?;
                        if !value.is_zero() {
                            return Err(fail("dangling coefficient"));
                        }
                        pos = look;
                        continue;
                    }
                } else {
                    coeff = Scalar::parse(modulus, token)
                        .map_err(|e| scalar_err(line, e))?;
                    pos = look;
                }
            }
        }
        // atom
        let start = pos;
        while pos < bytes.len()
            && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_' || bytes[pos] == b'.')
        {
            pos += 1;
        }
        if start == pos {
            return Err(fail("expected a basis name"));
        }
        let atom = &text[start..pos];
        let idx = space
            .index_of(atom)
            .ok_or_else(|| fail(&format!("unknown basis vector '{atom}'")))?;
        if negate {
            coeff = -coeff;
        }
        out[idx] += &coeff;
    }
}

impl std::fmt::Debug for NamedMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "NamedMap({}: {:?} -> {:?})",
            self.name, self.dom_word, self.cod_word
        )
    }
}
