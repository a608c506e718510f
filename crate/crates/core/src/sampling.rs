//! Seeded random field elements and matrices.
//!
//! Draws come from one sequential SplitMix64 stream. A finite-field element
//! is `next % q` decoded; a rational is a numerator `next % (2b+1) − b`
//! followed by a denominator `next % b + 1`.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{partial_identity, Matrix};

pub const DEFAULT_BOUND: u64 = 5;

pub struct Sampler {
    rng: SplitMix64,
    spec: FieldSpec,
    bound: u64,
}

impl Sampler {
    pub fn new(spec: FieldSpec, seed: u64, bound: u64) -> Self {
        Sampler { rng: SplitMix64::seed_from_u64(seed), spec, bound: bound.max(1) }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn below(&mut self, m: u64) -> u64 {
        self.next_u64() % m
    }

    pub fn element(&mut self) -> FieldElement {
        match self.spec.order() {
            Some(q) => self.spec.element(self.below(q)).expect("code below q"),
            None => {
                let b = self.bound;
                let num = self.below(2 * b + 1) as i64 - b as i64;
                let den = self.below(b) as i64 + 1;
                self.spec.rational(num, den).expect("positive denominator")
            }
        }
    }

    pub fn nonzero_element(&mut self) -> FieldElement {
        loop {
            let e = self.element();
            if !e.is_zero() {
                return e;
            }
        }
    }

    pub fn vector(&mut self, n: usize) -> Vec<FieldElement> {
        (0..n).map(|_| self.element()).collect()
    }

    pub fn nonzero_vector(&mut self, n: usize) -> Vec<FieldElement> {
        loop {
            let v = self.vector(n);
            if v.iter().any(|e| !e.is_zero()) {
                return v;
            }
        }
    }

    /// Entries drawn row by row.
    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        let spec = self.spec;
        Matrix::from_fn(spec, rows, cols, |_, _| self.element())
    }

    /// Permutation · unit lower triangular · upper triangular with nonzero
    /// diagonal.
    pub fn invertible(&mut self, n: usize) -> Matrix {
        let spec = self.spec;
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i as u64 + 1) as usize;
            perm.swap(i, j);
        }
        let p = Matrix::from_fn(spec, n, n, |i, j| if perm[i] == j { spec.one() } else { spec.zero() });
        let l = Matrix::from_fn(spec, n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.element(),
            std::cmp::Ordering::Equal => spec.one(),
            std::cmp::Ordering::Less => spec.zero(),
        });
        let u = Matrix::from_fn(spec, n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => self.element(),
            std::cmp::Ordering::Equal => self.nonzero_element(),
            std::cmp::Ordering::Greater => spec.zero(),
        });
        p.matmul(&l).and_then(|pl| pl.matmul(&u)).expect("square factors")
    }

    /// S · I_n(r) · S′ with S, S′ invertible.
    pub fn rank_matrix(&mut self, n: usize, r: usize) -> Matrix {
        let s = self.invertible(n);
        let t = self.invertible(n);
        let ir = partial_identity(self.spec, n, r).expect("r ≤ n");
        s.matmul(&ir).and_then(|m| m.matmul(&t)).expect("square factors")
    }

    /// A matrix whose rank is uniform in 0..=n.
    pub fn any_rank_matrix(&mut self, n: usize) -> Matrix {
        let r = self.below(n as u64 + 1) as usize;
        self.rank_matrix(n, r)
    }

    /// xᵀ·v for nonzero x, v.
    pub fn rank1(&mut self, n: usize) -> Matrix {
        let x = self.nonzero_vector(n);
        let v = self.nonzero_vector(n);
        Matrix::from_fn(self.spec, n, n, |i, j| &x[i] * &v[j])
    }
}
