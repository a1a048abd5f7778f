//! Free-group words, finite presentations with a class `phi`, and the
//! line-oriented presentation file format.
//!
//! ```text
//! # trefoil
//! group trefoil
//! gens a b
//! rel abaBAB
//! phi a 1
//! phi b 1
//! norm 1
//! closed 0
//! ```
//!
//! Generators are single lowercase letters; an uppercase letter is the
//! inverse of the matching generator.

use std::fmt;

use thiserror::Error;

pub const MAX_GENERATORS: usize = 26;

/// A generator or its inverse. `generator` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + self.generator as u8) as char;
        if self.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        if c.is_ascii_lowercase() {
            Some(Letter::new((c as u8 - b'a') as usize, false))
        } else if c.is_ascii_uppercase() {
            Some(Letter::new((c as u8 - b'A') as usize, true))
        } else {
            None
        }
    }
}

/// A word in the free group. Not necessarily reduced; see [`Word::free_reduce`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        Word(vec![Letter::new(i, false)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses letters such as `abaBAB` or `a b a B A B`; `1` is the empty word.
    pub fn parse(s: &str) -> Option<Self> {
        if s.trim() == "1" {
            return Some(Word::empty());
        }
        s.chars().filter(|c| !c.is_whitespace()).map(Letter::from_char).collect::<Option<Vec<_>>>().map(Word)
    }

    /// Cancels adjacent `x x^-1` pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Replaces each generator `i` by `images[i]` and reduces.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::empty();
        for l in &self.0 {
            let img = &images[l.generator];
            out = if l.inverse { out.mul(&img.inverse()) } else { out.mul(img) };
        }
        out
    }

    /// Exponent sum of each generator, length `gen_count`.
    pub fn exponent_sums(&self, gen_count: usize) -> Vec<i64> {
        let mut sums = vec![0; gen_count];
        for l in &self.0 {
            sums[l.generator] += l.sign();
        }
        sums
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("generator `{0}` is not a letter a-z")]
    BadGenerator(String),
    #[error("relator {index} (`{relator}`) uses a generator outside the generator list")]
    UnknownGenerator { index: usize, relator: String },
    #[error("phi is nonzero on relator {index} (`{relator}`): phi = {value}")]
    PhiNonzeroOnRelator { index: usize, relator: String, value: i64 },
    #[error("phi is trivial: every generator has phi-value 0")]
    PhiTrivial,
    #[error("deficiency is {0}, but a deficiency-1 presentation is required")]
    Deficiency(i64),
    #[error("no generators given")]
    NoGenerators,
    #[error("phi has {got} values for {expected} generators")]
    PhiLength { expected: usize, got: usize },
}

/// A finite presentation together with a class `phi` and manifold data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub name: String,
    gen_count: usize,
    relators: Vec<Word>,
    phi: Vec<i64>,
    /// `b3 = 1` when closed.
    pub closed: bool,
    pub thurston_norm: Option<u64>,
}

impl GroupPresentation {
    /// Validates and builds a presentation. Relators are stored freely reduced.
    pub fn new(
        name: impl Into<String>,
        gen_count: usize,
        relators: Vec<Word>,
        phi: Vec<i64>,
        closed: bool,
        thurston_norm: Option<u64>,
    ) -> Result<Self, PresentationError> {
        if gen_count == 0 {
            return Err(PresentationError::NoGenerators);
        }
        if gen_count > MAX_GENERATORS {
            return Err(PresentationError::BadGenerator(format!("#{gen_count}")));
        }
        if phi.len() != gen_count {
            return Err(PresentationError::PhiLength { expected: gen_count, got: phi.len() });
        }
        let relators: Vec<Word> = relators.iter().map(Word::free_reduce).collect();
        for (index, r) in relators.iter().enumerate() {
            if r.max_generator().is_some_and(|g| g >= gen_count) {
                return Err(PresentationError::UnknownGenerator { index: index + 1, relator: r.to_string() });
            }
        }
        let pres = GroupPresentation { name: name.into(), gen_count, relators, phi, closed, thurston_norm };
        for (index, r) in pres.relators.iter().enumerate() {
            let value = pres.phi_of_word(r);
            if value != 0 {
                return Err(PresentationError::PhiNonzeroOnRelator { index: index + 1, relator: r.to_string(), value });
            }
        }
        if pres.phi.iter().all(|&v| v == 0) {
            return Err(PresentationError::PhiTrivial);
        }
        let deficiency = pres.deficiency();
        if deficiency != 1 {
            return Err(PresentationError::Deficiency(deficiency));
        }
        Ok(pres)
    }

    pub fn gen_count(&self) -> usize {
        self.gen_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn phi(&self) -> &[i64] {
        &self.phi
    }

    pub fn deficiency(&self) -> i64 {
        self.gen_count as i64 - self.relators.len() as i64
    }

    pub fn b3(&self) -> u64 {
        u64::from(self.closed)
    }

    /// Sum over letters of `sign * phi(generator)`.
    pub fn phi_of_word(&self, w: &Word) -> i64 {
        w.0.iter().map(|l| l.sign() * self.phi[l.generator]).sum()
    }

    pub fn generator_name(&self, i: usize) -> char {
        Letter::new(i, false).to_char()
    }

    pub fn with_norm(mut self, norm: Option<u64>) -> Self {
        self.thurston_norm = norm;
        self
    }

    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut name = String::from("unnamed");
        let mut gens: Option<usize> = None;
        let mut relators = Vec::new();
        let mut phi_entries: Vec<(usize, usize, i64)> = Vec::new();
        let mut norm = None;
        let mut closed = false;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |message: String| PresentationError::Syntax { line: line_no, message };
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match keyword {
                "group" => {
                    if rest.is_empty() {
                        return Err(syntax("`group` needs a name".into()));
                    }
                    name = rest.to_string();
                }
                "gens" => {
                    if gens.is_some() {
                        return Err(syntax("duplicate `gens` line".into()));
                    }
                    let names: Vec<&str> = rest.split_whitespace().collect();
                    if names.is_empty() {
                        return Err(PresentationError::NoGenerators);
                    }
                    for (i, n) in names.iter().enumerate() {
                        let expected = (b'a' + i as u8) as char;
                        let mut chars = n.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) if c.is_ascii_lowercase() => {
                                if c != expected {
                                    return Err(syntax(format!(
                                        "generators must be listed as consecutive letters from `a`; expected `{expected}`, found `{c}`"
                                    )));
                                }
                            }
                            _ => return Err(PresentationError::BadGenerator(n.to_string())),
                        }
                    }
                    if names.len() > MAX_GENERATORS {
                        return Err(syntax("at most 26 generators".into()));
                    }
                    gens = Some(names.len());
                }
                "rel" => {
                    let word = Word::parse(rest).ok_or_else(|| syntax(format!("bad relator `{rest}`")))?;
                    relators.push(word);
                }
                "phi" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    let [gen_name, value] = parts.as_slice() else {
                        return Err(syntax("expected `phi <generator> <integer>`".into()));
                    };
                    let letter = match Letter::from_char(gen_name.chars().next().unwrap_or('?')) {
                        Some(l) if !l.inverse && gen_name.len() == 1 => l,
                        _ => return Err(PresentationError::BadGenerator(gen_name.to_string())),
                    };
                    let value: i64 = value.parse().map_err(|_| syntax(format!("bad integer `{value}`")))?;
                    phi_entries.push((line_no, letter.generator, value));
                }
                "norm" => {
                    let v: u64 = rest.parse().map_err(|_| syntax(format!("bad norm `{rest}`")))?;
                    norm = Some(v);
                }
                "closed" => {
                    closed = match rest {
                        "0" => false,
                        "1" => true,
                        _ => return Err(syntax("expected `closed 0` or `closed 1`".into())),
                    };
                }
                other => return Err(syntax(format!("unknown keyword `{other}`"))),
            }
        }

        let gen_count = gens.ok_or(PresentationError::NoGenerators)?;
        let mut phi = vec![0i64; gen_count];
        for (line, g, v) in phi_entries {
            if g >= gen_count {
                return Err(PresentationError::Syntax {
                    line,
                    message: format!("phi given for unknown generator `{}`", Letter::new(g, false).to_char()),
                });
            }
            phi[g] = v;
        }
        GroupPresentation::new(name, gen_count, relators, phi, closed, norm)
    }

    /// Renders in the presentation file format; `parse` inverts this.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("group {}\n", self.name));
        let names: Vec<String> = (0..self.gen_count).map(|i| self.generator_name(i).to_string()).collect();
        out.push_str(&format!("gens {}\n", names.join(" ")));
        for r in &self.relators {
            out.push_str(&format!("rel {r}\n"));
        }
        for (i, v) in self.phi.iter().enumerate() {
            out.push_str(&format!("phi {} {v}\n", self.generator_name(i)));
        }
        if let Some(n) = self.thurston_norm {
            out.push_str(&format!("norm {n}\n"));
        }
        out.push_str(&format!("closed {}\n", u8::from(self.closed)));
        out
    }
}
