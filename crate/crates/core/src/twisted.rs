//! Fox calculus and twisted Alexander polynomials for the representation
//! `alpha (x) phi`, where `alpha` lands in a finite group acting on `Z[G]` by
//! left multiplication and `phi` contributes the power of `t`.
//!
//! For a deficiency-one presentation the first polynomial is assembled from
//! one determinant: deleting an admissible block column `j` from the Fox
//! Jacobian gives a square matrix `M_j`, and
//! `det(M_j) / det(rho(x_j) - I) = Delta_1 / Delta_0` up to units.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::fingrp::{FiniteGroup, GroupError, Homomorphism};
use crate::laurent::{LaurentError, LaurentPoly};
use crate::polymat::{MatrixError, PolyMatrix};
use crate::presentation::{GroupPresentation, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistedError {
    #[error("presentation has deficiency {0}; the quotient formula needs deficiency 1")]
    Deficiency(i64),
    #[error("no generator has nonzero phi, so no column can be deleted")]
    NoAdmissibleColumn,
    #[error("column {0} is not admissible (phi vanishes on that generator)")]
    NotAdmissible(usize),
    #[error("internal consistency failure: det(M_j) * Delta_0 is not divisible by det(rho(x_j) - I) at column {0}")]
    InconsistentDivision(usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// A finite integer combination of freely reduced words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(w, 1);
        e
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        let w = w.free_reduce();
        let entry = self.terms.entry(w).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                out.add_term(u.mul(v), a * b);
            }
        }
        out
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Fox derivative of `w` with respect to generator `j` (0-based).
pub fn fox_derivative(w: &Word, j: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::empty();
    for &l in w.letters() {
        if l.generator == j {
            if l.inverse {
                out.add_term(prefix.mul(&Word(vec![l])), -1);
            } else {
                out.add_term(prefix.clone(), 1);
            }
        }
        prefix = prefix.mul(&Word(vec![l]));
    }
    out
}

/// A permutation matrix times `t^power`; column `h` holds `t^power` in row `perm[h]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub perm: Vec<usize>,
    pub power: i64,
}

impl MonomialMatrix {
    pub fn identity(n: usize) -> Self {
        MonomialMatrix { perm: (0..n).collect(), power: 0 }
    }

    /// `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        MonomialMatrix { perm: other.perm.iter().map(|&h| self.perm[h]).collect(), power: self.power + other.power }
    }

    pub fn inverse(&self) -> Self {
        let mut perm = vec![0; self.perm.len()];
        for (h, &r) in self.perm.iter().enumerate() {
            perm[r] = h;
        }
        MonomialMatrix { perm, power: -self.power }
    }

    pub fn to_matrix(&self) -> PolyMatrix {
        let n = self.perm.len();
        let mut m = PolyMatrix::zeros(n, n);
        for (h, &r) in self.perm.iter().enumerate() {
            m[(r, h)] = LaurentPoly::t_pow(self.power);
        }
        m
    }
}

/// The representation `alpha (x) phi` of a presentation on `Z[G] (x) Z[t, t^-1]`.
#[derive(Debug, Clone)]
pub struct TwistedRep<'a> {
    pres: &'a GroupPresentation,
    group: &'a FiniteGroup,
    hom: &'a Homomorphism,
    generators: Vec<MonomialMatrix>,
}

impl<'a> TwistedRep<'a> {
    pub fn new(pres: &'a GroupPresentation, group: &'a FiniteGroup, hom: &'a Homomorphism) -> Self {
        let generators = hom
            .images
            .iter()
            .zip(pres.phi())
            .map(|(&x, &p)| MonomialMatrix { perm: group.left_mult_perm(x), power: p })
            .collect();
        TwistedRep { pres, group, hom, generators }
    }

    pub fn presentation(&self) -> &GroupPresentation {
        self.pres
    }

    pub fn group(&self) -> &FiniteGroup {
        self.group
    }

    pub fn hom(&self) -> &Homomorphism {
        self.hom
    }

    /// Block size `|G|`.
    pub fn block_size(&self) -> usize {
        self.group.order()
    }

    pub fn generator_matrix(&self, i: usize) -> &MonomialMatrix {
        &self.generators[i]
    }

    fn letter_matrix(&self, l: Letter) -> MonomialMatrix {
        let m = &self.generators[l.generator];
        if l.inverse {
            m.inverse()
        } else {
            m.clone()
        }
    }

    pub fn word_matrix(&self, w: &Word) -> MonomialMatrix {
        w.letters()
            .iter()
            .fold(MonomialMatrix::identity(self.block_size()), |acc, &l| acc.compose(&self.letter_matrix(l)))
    }

    /// Image of a group-ring element: an `n x n` matrix.
    pub fn apply(&self, e: &GroupRingElement) -> PolyMatrix {
        let n = self.block_size();
        let mut m = PolyMatrix::zeros(n, n);
        for (w, c) in e.terms() {
            let wm = self.word_matrix(w);
            let term = LaurentPoly::monomial(c, wm.power);
            for (h, &r) in wm.perm.iter().enumerate() {
                m[(r, h)] += &term;
            }
        }
        m
    }

    /// `(s n) x (g n)` matrix whose block `(i, j)` is the image of `d r_i / d x_j`.
    pub fn jacobian(&self) -> PolyMatrix {
        let n = self.block_size();
        let g = self.pres.gen_count();
        let relators = self.pres.relators();
        let mut jac = PolyMatrix::zeros(relators.len() * n, g * n);
        for (i, r) in relators.iter().enumerate() {
            for j in 0..g {
                let block = self.apply(&fox_derivative(r, j));
                jac.set_block(i * n, j * n, &block);
            }
        }
        jac
    }

    /// `rho(x_j) - I`.
    pub fn generator_minus_identity(&self, j: usize) -> PolyMatrix {
        let n = self.block_size();
        let mut m = self.generators[j].to_matrix();
        for i in 0..n {
            m[(i, i)] -= &LaurentPoly::one();
        }
        m
    }

    /// Columns with nonzero `phi`, ascending.
    pub fn admissible_columns(&self) -> Vec<usize> {
        (0..self.pres.gen_count()).filter(|&j| self.pres.phi()[j] != 0).collect()
    }

    /// Order of the degree-zero twisted module.
    ///
    /// The module is the coinvariants of the permutation module on `G x Z`,
    /// i.e. the free abelian group on the orbits. `t` permutes the orbits
    /// cyclically, one cycle of length `d_C` per component `C` of the
    /// left-multiplication graph on `G`, so the order is `prod_C (t^{d_C} - 1)`.
    pub fn delta0(&self) -> LaurentPoly {
        let n = self.block_size();
        let phi = self.pres.phi();
        let mut label: Vec<Option<i64>> = vec![None; n];
        let mut result = LaurentPoly::one();
        for root in 0..n {
            if label[root].is_some() {
                continue;
            }
            label[root] = Some(0);
            let mut queue = VecDeque::from([root]);
            let mut period: i64 = 0;
            while let Some(h) = queue.pop_front() {
                let mh = label[h].unwrap();
                for (gen, &p) in self.generators.iter().zip(phi) {
                    let next = gen.perm[h];
                    match label[next] {
                        None => {
                            label[next] = Some(mh + p);
                            queue.push_back(next);
                        }
                        Some(mn) => period = period.gcd(&(mh + p - mn)),
                    }
                }
            }
            let cycle = &LaurentPoly::t_pow(period) - &LaurentPoly::one();
            result = &result * &cycle;
        }
        result.canonical_form()
    }

    /// Gcd of all `n x n` minors of `[rho(x_1) - I | ... | rho(x_g) - I]`.
    /// Exponential in `n`; used to cross-check [`TwistedRep::delta0`].
    pub fn delta0_from_minors(&self) -> Result<LaurentPoly, TwistedError> {
        let n = self.block_size();
        let g = self.pres.gen_count();
        let mut m = PolyMatrix::zeros(n, g * n);
        for j in 0..g {
            m.set_block(0, j * n, &self.generator_minus_identity(j));
        }
        let minors = m.all_maximal_minors(n)?;
        Ok(LaurentPoly::gcd_set(&minors))
    }

    /// `Delta_1` computed by deleting block column `j`.
    pub fn delta1_at_column(&self, j: usize) -> Result<LaurentPoly, TwistedError> {
        if self.pres.deficiency() != 1 {
            return Err(TwistedError::Deficiency(self.pres.deficiency()));
        }
        if self.pres.phi().get(j).copied().unwrap_or(0) == 0 {
            return Err(TwistedError::NotAdmissible(j));
        }
        let n = self.block_size();
        let minor = self.jacobian().delete_block_column(j, n)?;
        let numerator = minor.determinant()?;
        if numerator.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        let denominator = self.generator_minus_identity(j).determinant()?;
        let product = &numerator * &self.delta0();
        product
            .exact_divide(&denominator)
            .map(|q| q.canonical_form())
            .map_err(|_| TwistedError::InconsistentDivision(j))
    }

    pub fn delta1(&self) -> Result<AlexanderResult, TwistedError> {
        let column = *self.admissible_columns().first().ok_or(TwistedError::NoAdmissibleColumn)?;
        let delta1 = self.delta1_at_column(column)?;
        let div = self.group.divisibility(self.pres, self.hom)?;
        Ok(AlexanderResult {
            delta0: self.delta0(),
            monic: delta1.is_monic(),
            span: delta1.span_degree().ok(),
            delta1,
            column_used: column,
            group_order: self.group.order(),
            div,
        })
    }
}

/// Twisted Alexander polynomials of one `(presentation, phi, alpha)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexanderResult {
    pub delta0: LaurentPoly,
    /// Canonical form; zero is a vanishing certificate.
    pub delta1: LaurentPoly,
    pub column_used: usize,
    pub group_order: usize,
    pub div: u64,
    pub monic: bool,
    pub span: Option<u64>,
}

/// Convenience wrapper: builds the representation and computes `Delta_1`.
pub fn twisted_alexander(
    pres: &GroupPresentation,
    group: &FiniteGroup,
    hom: &Homomorphism,
) -> Result<AlexanderResult, TwistedError> {
    TwistedRep::new(pres, group, hom).delta1()
}
