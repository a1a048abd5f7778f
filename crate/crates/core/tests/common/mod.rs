//! Independent reference implementations used by the integration tests and
//! the acceptance harness. Nothing here calls the engine's own algorithms for
//! the quantity being checked.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use twistalex::fingrp::{FiniteGroup, Homomorphism};
use twistalex::laurent::LaurentPoly;
use twistalex::polymat::PolyMatrix;
use twistalex::presentation::{GroupPresentation, Letter, Word};
use twistalex::torus::{FreeAutomorphism, NielsenMove};

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &PolyMatrix) -> LaurentPoly {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let rows: Vec<Vec<LaurentPoly>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    cofactor_rec(&rows)
}

fn cofactor_rec(rows: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = rows.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut acc = LaurentPoly::zero();
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<LaurentPoly>> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &rows[0][j] * &cofactor_rec(&minor);
        if j % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

pub fn random_laurent(rng: &mut ChaCha8Rng) -> LaurentPoly {
    if rng.gen_bool(0.25) {
        return LaurentPoly::zero();
    }
    let min_exp = rng.gen_range(-2..=2);
    let len = rng.gen_range(1..=3);
    let coeffs: Vec<i64> = (0..len).map(|_| rng.gen_range(-3..=3)).collect();
    LaurentPoly::from_i64s(min_exp, &coeffs)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> PolyMatrix {
    PolyMatrix::from_fn(n, n, |_, _| random_laurent(rng))
}

// ---- polynomials over Q, dense, index = exponent ----

type QPoly = Vec<BigRational>;

fn q_trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn q_deg(p: &QPoly) -> usize {
    p.len() - 1
}

fn q_sub_scaled(a: &QPoly, b: &QPoly, c: &BigRational, shift: usize) -> QPoly {
    let mut out = a.clone();
    if out.len() < b.len() + shift {
        out.resize(b.len() + shift, BigRational::zero());
    }
    for (i, x) in b.iter().enumerate() {
        out[i + shift] -= c * x;
    }
    q_trim(out)
}

fn q_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    q_trim(out)
}

/// Quotient and remainder of `a` by nonzero `b`.
fn q_divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(b.len()) + 1];
    let lead = b.last().unwrap().clone();
    while !r.is_empty() && r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        q[shift] = c.clone();
        r = q_sub_scaled(&r, b, &c, shift);
    }
    (q_trim(q), r)
}

fn to_qpoly(p: &LaurentPoly, shift: i64) -> QPoly {
    if p.is_zero() {
        return Vec::new();
    }
    let lo = p.min_exp() + shift;
    assert!(lo >= 0);
    let mut out = vec![BigRational::zero(); lo as usize];
    out.extend(p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())));
    q_trim(out)
}

/// Clears denominators and content of a nonzero rational polynomial.
fn q_primitive(p: &QPoly) -> LaurentPoly {
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    LaurentPoly::new(0, ints).primitive_part()
}

/// Product of the nonzero diagonal entries of a diagonal form of `m` over
/// `Q[t]`, made primitive over `Z`. That product is the order of the torsion
/// submodule of the cokernel up to a rational scalar; the integer content is
/// not recoverable over a field, so comparisons use primitive parts.
#[allow(clippy::needless_range_loop)]
pub fn smith_torsion_order(m: &PolyMatrix) -> LaurentPoly {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<QPoly>> = (0..rows)
        .map(|i| {
            // multiply each row by a power of t so all entries are polynomials
            let lo = m.row(i).iter().filter(|p| !p.is_zero()).map(|p| p.min_exp()).min().unwrap_or(0);
            m.row(i).iter().map(|p| to_qpoly(p, -lo)).collect()
        })
        .collect();
    let mut product: QPoly = vec![BigRational::one()];
    let mut top = 0;
    while top < rows.min(cols) {
        // smallest-degree nonzero entry in the remaining block
        let pivot = (top..rows)
            .flat_map(|i| (top..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_empty())
            .min_by_key(|&(i, j)| q_deg(&a[i][j]));
        let Some((pi, pj)) = pivot else { break };
        a.swap(top, pi);
        for row in a.iter_mut() {
            row.swap(top, pj);
        }
        let mut clean = true;
        for i in top + 1..rows {
            if a[i][top].is_empty() {
                continue;
            }
            let (q, r) = q_divrem(&a[i][top], &a[top][top]);
            for j in top..cols {
                let sub = q_mul(&q, &a[top][j]);
                a[i][j] = q_sub_scaled(&a[i][j], &sub, &BigRational::one(), 0);
            }
            debug_assert_eq!(a[i][top], r);
            clean &= r.is_empty();
        }
        for j in top + 1..cols {
            if a[top][j].is_empty() {
                continue;
            }
            let (q, r) = q_divrem(&a[top][j], &a[top][top]);
            for i in top..rows {
                let sub = q_mul(&q, &a[i][top]);
                a[i][j] = q_sub_scaled(&a[i][j], &sub, &BigRational::one(), 0);
            }
            clean &= r.is_empty();
        }
        // a nonzero remainder has smaller degree; pivot again on it
        if clean {
            product = q_mul(&product, &a[top][top]);
            top += 1;
        }
    }
    q_primitive(&product)
}

// ---- words, homomorphisms, divisibility ----

/// All freely reduced words of length at most `max_len` on `gens` generators.
pub fn reduced_words(gens: usize, max_len: usize) -> Vec<Word> {
    let letters: Vec<Letter> = (0..gens).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect();
    let mut all = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.letters().last().is_some_and(|&last| last == l.inv()) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// gcd of `phi(w)` over words of length at most `max_len` with `alpha(w) = 1`.
pub fn brute_divisibility(pres: &GroupPresentation, group: &FiniteGroup, hom: &Homomorphism, max_len: usize) -> u64 {
    let mut g = 0i64;
    for w in reduced_words(pres.gen_count(), max_len) {
        let image = w.letters().iter().fold(group.identity(), |acc, l| {
            let x = hom.images[l.generator];
            group.mul(acc, if l.inverse { group.inv(x) } else { x })
        });
        if image == group.identity() {
            g = g.gcd(&pres.phi_of_word(&w));
        }
    }
    g.unsigned_abs()
}

/// Every tuple in `G^g`, filtered by the relators: `(all homs, surjective count)`.
pub fn exhaustive_homs(pres: &GroupPresentation, group: &FiniteGroup) -> (Vec<Vec<usize>>, usize) {
    let n = group.order();
    let g = pres.gen_count();
    let mut found = Vec::new();
    let mut epis = 0;
    let mut tuple = vec![0usize; g];
    loop {
        let eval = |w: &Word| {
            w.letters().iter().fold(group.identity(), |acc, l| {
                let x = tuple[l.generator];
                group.mul(acc, if l.inverse { group.inv(x) } else { x })
            })
        };
        if pres.relators().iter().all(|r| eval(r) == group.identity()) {
            if group.subgroup_generated(&tuple).len() == n {
                epis += 1;
            }
            found.push(tuple.clone());
        }
        // odometer
        let mut k = 0;
        while k < g {
            tuple[k] += 1;
            if tuple[k] < n {
                break;
            }
            tuple[k] = 0;
            k += 1;
        }
        if k == g {
            break;
        }
    }
    (found, epis)
}

// ---- mapping tori ----

pub fn random_moves(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Vec<NielsenMove> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let i = rng.gen_range(0..rank);
            let mut j = rng.gen_range(0..rank - 1);
            if j >= i {
                j += 1;
            }
            match rng.gen_range(0..4) {
                0 => NielsenMove::Swap(i, j),
                1 => NielsenMove::Invert(i),
                _ => NielsenMove::Multiply { target: i, by: j },
            }
        })
        .collect()
}

pub fn random_automorphism(rng: &mut ChaCha8Rng) -> FreeAutomorphism {
    let rank = rng.gen_range(2..=3);
    let moves = random_moves(rng, rank, 10);
    FreeAutomorphism::compose_nielsen(&moves, rank).unwrap()
}

/// Rewrites a mapping-torus presentation in generators `y_i = x_i s^e_i`,
/// `s`, where `s` is the last generator. The group and `phi` are unchanged
/// but every `y_i` with `e_i != 0` becomes an admissible column.
pub fn shear(pres: &GroupPresentation, exps: &[i64]) -> GroupPresentation {
    let k = pres.gen_count() - 1;
    assert_eq!(exps.len(), k);
    let s = Letter::new(k, false);
    let mut images: Vec<Word> = (0..k)
        .map(|i| {
            // x_i = y_i s^-e_i
            let mut v = vec![Letter::new(i, false)];
            let l = if exps[i] > 0 { s.inv() } else { s };
            v.extend(std::iter::repeat_n(l, exps[i].unsigned_abs() as usize));
            Word(v)
        })
        .collect();
    images.push(Word::generator(k));
    let relators = pres.relators().iter().map(|r| r.substitute(&images)).collect();
    let mut phi: Vec<i64> = exps.to_vec();
    phi.push(1);
    GroupPresentation::new(format!("{}-sheared", pres.name), k + 1, relators, phi, pres.closed, pres.thurston_norm)
        .unwrap()
}

pub fn random_word(rng: &mut ChaCha8Rng, gens: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word((0..len).map(|_| Letter::new(rng.gen_range(0..gens), rng.gen_bool(0.5))).collect())
}

pub fn is_unit_equal_up_to_inversion(a: &LaurentPoly, b: &LaurentPoly) -> bool {
    a.unit_equal(b) || a.unit_equal(&b.invert_variable())
}

pub fn content_free(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        p.clone()
    } else {
        let pp = p.primitive_part();
        if pp.top_coeff().is_some_and(|c| c.is_negative()) {
            -pp
        } else {
            pp
        }
    }
}
