//! Mapping tori of free-group automorphisms.
//!
//! An automorphism is built as a composition of elementary Nielsen moves on
//! the tuple of images `(u_1, ..., u_k)`, starting from the basis. The mapping
//! torus `<x_1..x_k, s | s x_i s^-1 = h(x_i)>` is fibered with free fiber of
//! rank `k`, which gives a supply of presentations where every quotient must
//! pass the fibering test.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::polymat::PolyMatrix;
use crate::presentation::{GroupPresentation, Letter, Word, MAX_GENERATORS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("rank {0} is out of range 1..=25 (one letter is reserved for the stable generator)")]
    RankOutOfRange(usize),
    #[error("bad move `{0}`; expected `xI<-xIxJ`, `swap xI xJ` or `inv xI`")]
    BadMove(String),
}

/// Elementary Nielsen moves, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NielsenMove {
    /// `u_i <- u_i u_j`, `i != j`.
    Multiply { target: usize, by: usize },
    /// `u_i <-> u_j`.
    Swap(usize, usize),
    /// `u_i <- u_i^-1`.
    Invert(usize),
}

impl NielsenMove {
    fn indices(&self) -> Vec<usize> {
        match *self {
            NielsenMove::Multiply { target, by } => vec![target, by],
            NielsenMove::Swap(i, j) => vec![i, j],
            NielsenMove::Invert(i) => vec![i],
        }
    }

    /// Parses a `;`-separated move list. Blank input is the empty list.
    pub fn parse_list(s: &str) -> Result<Vec<NielsenMove>, TorusError> {
        s.split(';').map(str::trim).filter(|m| !m.is_empty()).map(str::parse).collect()
    }
}

fn parse_index(tok: &str) -> Option<usize> {
    let n: usize = tok.strip_prefix('x')?.parse().ok()?;
    n.checked_sub(1)
}

impl FromStr for NielsenMove {
    type Err = TorusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TorusError::BadMove(s.to_string());
        let parts: Vec<&str> = s.split_whitespace().collect();
        match parts.as_slice() {
            ["swap", a, b] => {
                let (i, j) = (parse_index(a).ok_or_else(bad)?, parse_index(b).ok_or_else(bad)?);
                if i == j {
                    return Err(bad());
                }
                Ok(NielsenMove::Swap(i, j))
            }
            ["inv", a] => Ok(NielsenMove::Invert(parse_index(a).ok_or_else(bad)?)),
            _ => {
                let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
                let (lhs, rhs) = compact.split_once("<-").ok_or_else(bad)?;
                let target = parse_index(lhs).ok_or_else(bad)?;
                let rest = rhs.strip_prefix(lhs).ok_or_else(bad)?;
                let by = parse_index(rest).ok_or_else(bad)?;
                if by == target {
                    return Err(bad());
                }
                Ok(NielsenMove::Multiply { target, by })
            }
        }
    }
}

impl fmt::Display for NielsenMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NielsenMove::Multiply { target, by } => write!(f, "x{}<-x{}x{}", target + 1, target + 1, by + 1),
            NielsenMove::Swap(i, j) => write!(f, "swap x{} x{}", i + 1, j + 1),
            NielsenMove::Invert(i) => write!(f, "inv x{}", i + 1),
        }
    }
}

/// An automorphism of the free group of rank `k`, given by generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeAutomorphism {
    rank: usize,
    images: Vec<Word>,
}

impl FreeAutomorphism {
    pub fn identity(rank: usize) -> Self {
        FreeAutomorphism { rank, images: (0..rank).map(Word::generator).collect() }
    }

    /// Applies `moves` in order to the image tuple, starting from the basis.
    pub fn compose_nielsen(moves: &[NielsenMove], rank: usize) -> Result<Self, TorusError> {
        let mut h = Self::identity(rank);
        for mv in moves {
            if let Some(&index) = mv.indices().iter().find(|&&i| i >= rank) {
                return Err(TorusError::IndexOutOfRange { index: index + 1, rank });
            }
            match *mv {
                NielsenMove::Multiply { target, by } => {
                    h.images[target] = h.images[target].mul(&h.images[by]);
                }
                NielsenMove::Swap(i, j) => h.images.swap(i, j),
                NielsenMove::Invert(i) => h.images[i] = h.images[i].inverse(),
            }
        }
        Ok(h)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Integer matrix of the induced map on `H_1`: column `j` holds the
    /// exponent sums of `h(x_j)`.
    pub fn abelianization(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.rank]; self.rank];
        for (j, w) in self.images.iter().enumerate() {
            for (i, e) in w.exponent_sums(self.rank).into_iter().enumerate() {
                m[i][j] = e;
            }
        }
        m
    }

    /// `det(tI - H)` for the abelianized monodromy `H`.
    pub fn untwisted_oracle(&self) -> LaurentPoly {
        let h = self.abelianization();
        let m = PolyMatrix::from_fn(self.rank, self.rank, |i, j| {
            let diag = if i == j { LaurentPoly::t_pow(1) } else { LaurentPoly::zero() };
            &diag - &LaurentPoly::constant(h[i][j])
        });
        m.determinant().expect("square")
    }

    /// `<x_1..x_k, s | s x_i s^-1 h(x_i)^-1>` with `phi(s) = 1`, `phi(x_i) = 0`
    /// and Thurston norm `max(k - 1, 0)`.
    pub fn mapping_torus(&self) -> Result<GroupPresentation, TorusError> {
        let k = self.rank;
        if k == 0 || k + 1 > MAX_GENERATORS {
            return Err(TorusError::RankOutOfRange(k));
        }
        let s = Letter::new(k, false);
        let relators = self
            .images
            .iter()
            .enumerate()
            .map(|(i, img)| {
                let mut letters = vec![s, Letter::new(i, false), s.inv()];
                letters.extend(img.inverse().0);
                Word(letters)
            })
            .collect();
        let mut phi = vec![0i64; k + 1];
        phi[k] = 1;
        let name = format!("torus-rank{k}");
        Ok(GroupPresentation::new(name, k + 1, relators, phi, false, Some(k.saturating_sub(1) as u64))
            .expect("mapping torus presentations are valid"))
    }
}
