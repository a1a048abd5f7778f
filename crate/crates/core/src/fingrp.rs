//! Finite permutation groups with full element tables, homomorphisms from a
//! presentation, the regular representation, and the divisibility of `phi`
//! restricted to a kernel.
//!
//! Permutations act on `0..degree` internally and are written with 1-based
//! cycles, e.g. `(1 2 3)(4 5)`. The product `g * h` applies `g` first.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::polymat::PolyMatrix;
use crate::presentation::{GroupPresentation, Word};

pub const MAX_GROUP_ORDER: usize = 360;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("malformed permutation `{0}`")]
    MalformedPermutation(String),
    #[error("point {point} is outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("group order exceeds the cap of {MAX_GROUP_ORDER} elements")]
    TooLarge,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("permutation {0} is not an element of the group")]
    NotInGroup(String),
    #[error("hom spec: {0}")]
    HomSpec(String),
    #[error("relator {index} (`{relator}`) is not sent to the identity")]
    RelatorViolated { index: usize, relator: String },
    #[error("phi is identically zero")]
    PhiTrivial,
}

/// A permutation of `0..degree`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Apply `self` then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Parses disjoint 1-based cycles such as `(1 2)(3 4 5)`; `()` is the identity.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Perm, GroupError> {
        let bad = || GroupError::MalformedPermutation(s.to_string());
        let mut images: Vec<Option<u32>> = vec![None; degree];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body_end = rest.find(')').ok_or_else(bad)?;
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let body = &body[..body_end - 1];
            let points: Vec<usize> = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            for &pt in &points {
                if pt == 0 || pt > degree {
                    return Err(GroupError::PointOutOfRange { point: pt, degree });
                }
            }
            for (k, &pt) in points.iter().enumerate() {
                let next = points[(k + 1) % points.len()];
                if images[pt - 1].is_some() {
                    return Err(bad());
                }
                images[pt - 1] = Some(next as u32 - 1);
            }
            rest = rest[body_end + 1..].trim_start();
        }
        let perm = Perm(images.iter().enumerate().map(|(i, x)| x.unwrap_or(i as u32)).collect());
        let mut seen = vec![false; degree];
        for &x in &perm.0 {
            if std::mem::replace(&mut seen[x as usize], true) {
                return Err(bad());
            }
        }
        Ok(perm)
    }
}

/// 1-based disjoint cycle notation; the identity renders as `()`.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.0[x] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A finite permutation group with its full element and multiplication tables.
/// Element 0 is the identity; the rest follow breadth-first discovery order.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub solvable: bool,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    mult: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn close(name: impl Into<String>, degree: usize, generators: Vec<Perm>) -> Result<Self, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::MalformedPermutation(g.to_string()));
            }
        }
        let mut elements = vec![Perm::identity(degree)];
        let mut index: HashMap<Perm, usize> = HashMap::from([(elements[0].clone(), 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &generators {
                let next = elements[i].then(g);
                if !index.contains_key(&next) {
                    if elements.len() == MAX_GROUP_ORDER {
                        return Err(GroupError::TooLarge);
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let n = elements.len();
        let mut mult = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                mult[i * n + j] = index[&elements[i].then(&elements[j])];
            }
        }
        let inverse = elements.iter().map(|e| index[&e.inverse()]).collect();
        Ok(FiniteGroup { name: name.into(), degree, generators, solvable: true, elements, index, mult, inverse })
    }

    pub fn trivial() -> Self {
        FiniteGroup::close("trivial", 1, Vec::new()).expect("trivial group")
    }

    /// Parses a group file: `group`, `degree`, `solvable`, and `gen` lines.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut name = String::from("unnamed");
        let mut degree: Option<usize> = None;
        let mut solvable = true;
        let mut gens: Vec<(usize, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let syntax = |message: String| GroupError::Syntax { line, message };
            let (keyword, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
            let rest = rest.trim();
            match keyword {
                "group" => name = rest.to_string(),
                "degree" => degree = Some(rest.parse().map_err(|_| syntax(format!("bad degree `{rest}`")))?),
                "solvable" => {
                    solvable = match rest {
                        "0" => false,
                        "1" => true,
                        _ => return Err(syntax("expected `solvable 0` or `solvable 1`".into())),
                    }
                }
                "gen" => gens.push((line, rest.to_string())),
                other => return Err(syntax(format!("unknown keyword `{other}`"))),
            }
        }
        let degree = degree.ok_or(GroupError::Syntax { line: 0, message: "missing `degree` line".into() })?;
        if degree == 0 {
            return Err(GroupError::Syntax { line: 0, message: "degree must be positive".into() });
        }
        let generators = gens.iter().map(|(_, s)| Perm::parse_cycles(s, degree)).collect::<Result<Vec<_>, _>>()?;
        let mut g = FiniteGroup::close(name, degree, generators)?;
        g.solvable = solvable;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Closure of a set of elements, as a sorted index list.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    /// `|G| x |G|` permutation matrix of left multiplication by `x`:
    /// the basis vector of `h` goes to the basis vector of `x * h`.
    pub fn regular_rep(&self, x: usize) -> PolyMatrix {
        let n = self.order();
        let mut m = PolyMatrix::zeros(n, n);
        for h in 0..n {
            m[(self.mul(x, h), h)] = LaurentPoly::one();
        }
        m
    }

    /// Column permutation of the regular representation: `h -> x * h`.
    pub fn left_mult_perm(&self, x: usize) -> Vec<usize> {
        (0..self.order()).map(|h| self.mul(x, h)).collect()
    }

    /// Evaluates a word under generator images.
    pub fn eval_word(&self, hom: &Homomorphism, w: &Word) -> usize {
        w.letters().iter().fold(self.identity(), |acc, l| {
            let img = hom.images[l.generator];
            self.mul(acc, if l.inverse { self.inv(img) } else { img })
        })
    }

    fn relators_hold(&self, pres: &GroupPresentation, images: &[usize]) -> Result<(), GroupError> {
        let hom = Homomorphism { images: images.to_vec(), surjective: false };
        for (index, r) in pres.relators().iter().enumerate() {
            if self.eval_word(&hom, r) != self.identity() {
                return Err(GroupError::RelatorViolated { index: index + 1, relator: r.to_string() });
            }
        }
        Ok(())
    }

    fn is_surjective(&self, images: &[usize]) -> bool {
        self.subgroup_generated(images).len() == self.order()
    }

    /// Builds a homomorphism from element indices, checking every relator.
    pub fn homomorphism(&self, pres: &GroupPresentation, images: Vec<usize>) -> Result<Homomorphism, GroupError> {
        if images.len() != pres.gen_count() {
            return Err(GroupError::HomSpec(format!("{} images for {} generators", images.len(), pres.gen_count())));
        }
        self.relators_hold(pres, &images)?;
        let surjective = self.is_surjective(&images);
        Ok(Homomorphism { images, surjective })
    }

    /// Parses `a=(1 2),b=(1 2 3)`; unlisted generators map to the identity.
    pub fn parse_hom_spec(&self, pres: &GroupPresentation, spec: &str) -> Result<Homomorphism, GroupError> {
        let mut images = vec![self.identity(); pres.gen_count()];
        let mut seen = vec![false; pres.gen_count()];
        for part in split_top_level(spec) {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (g, perm) = part
                .split_once('=')
                .ok_or_else(|| GroupError::HomSpec(format!("expected `<gen>=<permutation>`, got `{part}`")))?;
            let g = g.trim();
            let gi = match g.as_bytes() {
                [c] if c.is_ascii_lowercase() && ((c - b'a') as usize) < pres.gen_count() => (c - b'a') as usize,
                _ => return Err(GroupError::HomSpec(format!("unknown generator `{g}`"))),
            };
            if std::mem::replace(&mut seen[gi], true) {
                return Err(GroupError::HomSpec(format!("generator `{g}` given twice")));
            }
            let p = Perm::parse_cycles(perm.trim(), self.degree)?;
            images[gi] = self.index_of(&p).ok_or_else(|| GroupError::NotInGroup(p.to_string()))?;
        }
        self.homomorphism(pres, images)
    }

    /// All homomorphisms, in lexicographic order of image indices.
    pub fn enumerate_homs(&self, pres: &GroupPresentation, epi_only: bool) -> Vec<Homomorphism> {
        let g = pres.gen_count();
        // relators checked as soon as their largest generator is assigned
        let mut checks: Vec<Vec<&Word>> = vec![Vec::new(); g];
        for r in pres.relators() {
            if let Some(m) = r.max_generator() {
                checks[m].push(r);
            }
        }
        let mut out = Vec::new();
        let mut images = vec![0usize; g];
        self.backtrack(0, &checks, &mut images, epi_only, &mut out);
        out
    }

    fn backtrack(
        &self,
        depth: usize,
        checks: &[Vec<&Word>],
        images: &mut Vec<usize>,
        epi_only: bool,
        out: &mut Vec<Homomorphism>,
    ) {
        if depth == images.len() {
            let surjective = self.is_surjective(images);
            if surjective || !epi_only {
                out.push(Homomorphism { images: images.clone(), surjective });
            }
            return;
        }
        for x in 0..self.order() {
            images[depth] = x;
            let ok = checks[depth].iter().all(|r| {
                r.letters().iter().fold(self.identity(), |acc, l| {
                    let img = images[l.generator];
                    self.mul(acc, if l.inverse { self.inv(img) } else { img })
                }) == self.identity()
            });
            if ok {
                self.backtrack(depth + 1, checks, images, epi_only, out);
            }
        }
    }

    /// The hom conjugated by `c`: each image `x` becomes `c^-1 x c`.
    pub fn conjugate(&self, hom: &Homomorphism, c: usize) -> Homomorphism {
        let ci = self.inv(c);
        Homomorphism {
            images: hom.images.iter().map(|&x| self.mul(self.mul(ci, x), c)).collect(),
            surjective: hom.surjective,
        }
    }

    /// True iff `hom` is the lexicographically least member of its class
    /// under inner automorphisms.
    pub fn is_class_representative(&self, hom: &Homomorphism) -> bool {
        (0..self.order()).all(|c| self.conjugate(hom, c).images >= hom.images)
    }

    /// One representative per inner-automorphism class, order preserved.
    pub fn dedup_inner(&self, homs: Vec<Homomorphism>) -> Vec<Homomorphism> {
        homs.into_iter().filter(|h| self.is_class_representative(h)).collect()
    }

    /// The image subgroup as its own group, with `hom` re-targeted onto it.
    pub fn image_subgroup(&self, hom: &Homomorphism) -> (FiniteGroup, Homomorphism) {
        let mut gens: Vec<Perm> = Vec::new();
        for &x in &hom.images {
            let p = self.element(x).clone();
            if !p.is_identity() && !gens.contains(&p) {
                gens.push(p);
            }
        }
        let mut sub = FiniteGroup::close(format!("{}:image", self.name), self.degree, gens)
            .expect("subgroup of a capped group is capped");
        sub.solvable = self.solvable;
        let images =
            hom.images.iter().map(|&x| sub.index_of(self.element(x)).expect("image lies in subgroup")).collect();
        (sub, Homomorphism { images, surjective: true })
    }

    /// Positive generator of `phi(Ker alpha)`.
    ///
    /// Breadth-first search over the image of `alpha`, moving from `g` to
    /// `g * alpha(x_i)`, labels each reached element with the `phi`-value of
    /// the tree path to it. Every non-tree edge closes a Schreier generator of
    /// the kernel whose `phi`-value is `m_g + phi(x_i) - m_g'`; the gcd of
    /// these is the answer.
    pub fn divisibility(&self, pres: &GroupPresentation, hom: &Homomorphism) -> Result<u64, GroupError> {
        let phi = pres.phi();
        if phi.iter().all(|&v| v == 0) {
            return Err(GroupError::PhiTrivial);
        }
        let mut label: Vec<Option<i64>> = vec![None; self.order()];
        label[0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        let mut d: i64 = 0;
        while let Some(g) = queue.pop_front() {
            let mg = label[g].unwrap();
            for (i, &x) in hom.images.iter().enumerate() {
                let next = self.mul(g, x);
                let value = mg + phi[i];
                match label[next] {
                    None => {
                        label[next] = Some(value);
                        queue.push_back(next);
                    }
                    Some(mn) => d = d.gcd(&(value - mn)),
                }
            }
        }
        debug_assert!(d > 0, "kernel has finite index and phi is nontrivial");
        Ok(d as u64)
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' | ';' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Generator images (element indices into a [`FiniteGroup`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    pub images: Vec<usize>,
    pub surjective: bool,
}

impl Homomorphism {
    /// Renders as `a=(1 2),b=()`.
    pub fn describe(&self, group: &FiniteGroup) -> String {
        self.images
            .iter()
            .enumerate()
            .map(|(i, &x)| format!("{}={}", (b'a' + i as u8) as char, group.element(x)))
            .collect::<Vec<_>>()
            .join(",")
    }
}
