//! Test-only oracles that do not go through the crate's word-action kernels.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use spinchain::{Letter, PauliString, PauliSum, PauliWord, Phase};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn sigma(letter: Letter) -> DMatrix<Complex64> {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let rows: [[Complex64; 2]; 2] = match letter {
        Letter::I => [[one, o], [o, one]],
        Letter::X => [[o, one], [one, o]],
        Letter::Y => [[o, -i], [i, o]],
        Letter::Z => [[one, o], [o, -one]],
    };
    DMatrix::from_fn(2, 2, |r, col| rows[r][col])
}

/// Left-to-right Kronecker product of the letters, times the phase.
pub fn kron_string(p: &PauliString) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for letter in p.letters() {
        m = m.kronecker(&sigma(letter));
    }
    m * p.phase().to_complex()
}

pub fn kron_sum(a: &PauliSum) -> DMatrix<Complex64> {
    let side = 1 << a.n();
    let mut m = DMatrix::from_element(side, side, c(0.0, 0.0));
    for (w, coeff) in a.iter() {
        m += kron_string(&PauliString::from(*w)) * *coeff;
    }
    m
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn random_word<R: Rng>(rng: &mut R, n: usize) -> PauliWord {
    let letters: Vec<Letter> = (0..n)
        .map(|_| [Letter::I, Letter::X, Letter::Y, Letter::Z][rng.random_range(0..4)])
        .collect();
    PauliWord::from_letters(&letters).unwrap()
}

pub fn random_non_identity_word<R: Rng>(rng: &mut R, n: usize) -> PauliWord {
    loop {
        let w = random_word(rng, n);
        if !w.is_identity() {
            return w;
        }
    }
}

pub fn random_string<R: Rng>(rng: &mut R, n: usize) -> PauliString {
    PauliString::new(
        Phase::from_exponent(rng.random_range(0..4)),
        random_word(rng, n),
    )
}

pub fn random_sum<R: Rng>(rng: &mut R, n: usize, terms: usize) -> PauliSum {
    PauliSum::from_terms(
        n,
        (0..terms).map(|_| {
            (
                random_word(rng, n),
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        }),
    )
    .unwrap()
}

/// Dimension of the real Lie algebra generated by `i * P` for the given
/// Hermitian matrices, by Gram-Schmidt over vectorized commutators.
pub fn dense_lie_rank(generators: &[DMatrix<Complex64>], tol: f64) -> usize {
    let vectorize =
        |m: &DMatrix<Complex64>| -> Vec<f64> { m.iter().flat_map(|z| [z.re, z.im]).collect() };
    let mut mats: Vec<DMatrix<Complex64>> = Vec::new();
    let mut vecs: Vec<Vec<f64>> = Vec::new();
    let push =
        |m: DMatrix<Complex64>, mats: &mut Vec<DMatrix<Complex64>>, vecs: &mut Vec<Vec<f64>>| {
            let mut v = vectorize(&m);
            for _ in 0..2 {
                for b in vecs.iter() {
                    let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                    v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
            if norm > tol * scale {
                v.iter_mut().for_each(|x| *x /= norm);
                vecs.push(v);
                mats.push(m);
                true
            } else {
                false
            }
        };
    for g in generators {
        push(g * c(0.0, 1.0), &mut mats, &mut vecs);
    }
    let mut a = 0;
    while a < mats.len() {
        for b in 0..a {
            let comm = &mats[a] * &mats[b] - &mats[b] * &mats[a];
            push(comm, &mut mats, &mut vecs);
        }
        a += 1;
    }
    mats.len()
}
