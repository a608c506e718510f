#![allow(dead_code)]

//! Property checks shared by the property suite and the acceptance target.
//! Each returns `Err` with a description of the first violation.

use greenpres::census::{census_with, CensusReport};
use greenpres::green::{count_rank_matrices, enumerate_matrices, pencil_lambda_set, rank_sum_decompose};
use greenpres::operator::{construct_botta, op_two_sided, petrovic_generators, rho_basis, vec};
use greenpres::verify::operator_from_index;
use greenpres::{FieldElement, FieldSpec, GreenRelation, LinearOperator, Matrix, Polynomial, Sampler};

pub type Check = Result<(), String>;

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Kronecker product by the textbook double loop.
fn kron_oracle(a: &Matrix, b: &Matrix) -> Matrix {
    let spec = a.spec();
    let (n, m) = (a.rows(), b.rows());
    let mut out = Matrix::zeros(spec, n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out.set(i * m + k, j * m + l, a.get(i, j) * b.get(k, l));
                }
            }
        }
    }
    out
}

pub fn kronecker_identity() -> Check {
    for spec in [FieldSpec::gf3(), FieldSpec::Rational] {
        for seed in 0..5 {
            let mut s = Sampler::new(spec, seed, 5);
            let (p, q) = (s.invertible(3), s.invertible(3));
            let t = op_two_sided(&p, &q, false).map_err(|e| e.to_string())?;
            ensure(t.matrix() == &kron_oracle(&q.transpose(), &p), || format!("Kronecker identity fails over {} seed {}", spec, seed))?;
        }
    }
    Ok(())
}

pub fn transpose_exchanges_l_and_r() -> Check {
    let k = FieldSpec::gf2();
    let all: Vec<Matrix> = enumerate_matrices(k, 2).unwrap().collect();
    for p in all.iter().filter(|m| m.rank() == 2) {
        for q in all.iter().filter(|m| m.rank() == 2) {
            let t = op_two_sided(p, q, true).unwrap();
            let imgs: Vec<Matrix> = all.iter().map(|a| t.apply(a).unwrap()).collect();
            for i in 0..all.len() {
                for j in 0..all.len() {
                    let l = GreenRelation::L.holds(&all[i], &all[j]).unwrap();
                    let r = GreenRelation::R.holds(&imgs[i], &imgs[j]).unwrap();
                    ensure(l == r, || format!("L/R exchange fails for P={:?} Q={:?}", p, q))?;
                }
            }
        }
    }
    Ok(())
}

pub fn gf2_census() -> CensusReport {
    census_with(FieldSpec::gf2(), 2, std::thread::available_parallelism().map_or(1, |p| p.get())).unwrap()
}

/// Some L-preserver over GF(2), n = 2 sends a rank-1 matrix to rank 2.
pub fn rank_raising_l_preserver(report: &CensusReport) -> Check {
    let all: Vec<Matrix> = enumerate_matrices(FieldSpec::gf2(), 2).unwrap().collect();
    let found = report.members["l"].iter().any(|&idx| {
        let t = operator_from_index(FieldSpec::gf2(), 2, idx).unwrap();
        all.iter().any(|a| a.rank() == 1 && t.apply(a).unwrap().rank() == 2)
    });
    ensure(found, || "no L-preserver raises the rank of a rank-1 matrix".into())
}

/// ρ(V_T) = ker T, and ker T = {A : Row(A) ⊆ V_T} by enumeration.
pub fn kernel_rho(report: &CensusReport) -> Check {
    let spec = FieldSpec::gf2();
    let all: Vec<Matrix> = enumerate_matrices(spec, 2).unwrap().collect();
    for &idx in &report.members["l"] {
        let t = operator_from_index(spec, 2, idx).unwrap();
        let v = t.kernel_row_space();
        ensure(rho_basis(&v) == t.kernel(), || format!("rho(V_T) != ker T for operator {}", idx))?;
        for a in &all {
            let in_kernel = t.apply(a).unwrap().is_zero();
            let rows_in_v = a.row_space().is_subspace_of(&v);
            ensure(in_kernel == rows_in_v, || format!("kernel description fails for operator {}", idx))?;
        }
    }
    Ok(())
}

pub fn linearity() -> Check {
    for spec in [FieldSpec::gf2(), FieldSpec::gf3(), FieldSpec::Gf4, FieldSpec::gf5(), FieldSpec::prime(7).unwrap(), FieldSpec::Rational] {
        for seed in 0..10 {
            let mut s = Sampler::new(spec, seed, 5);
            let t = LinearOperator::from_matrix(3, s.matrix(9, 9)).unwrap();
            let (a, b, lambda) = (s.matrix(3, 3), s.matrix(3, 3), s.element());
            let lhs = t.apply(&a.add(&b).unwrap()).unwrap();
            ensure(lhs == t.apply(&a).unwrap().add(&t.apply(&b).unwrap()).unwrap(), || format!("additivity fails over {}", spec))?;
            let scaled = t.apply(&a.scale(&lambda).unwrap()).unwrap();
            ensure(scaled == t.apply(&a).unwrap().scale(&lambda).unwrap(), || format!("homogeneity fails over {}", spec))?;
            for k in 0..9 {
                let col = t.matrix().column(k);
                let e = greenpres::operator::basis_matrix(spec, 3, k);
                ensure(vec(&t.apply(&e).unwrap()) == col, || "operator column is not the image of a basis matrix".into())?;
            }
        }
    }
    Ok(())
}

pub fn petrovic_rank_two() -> Check {
    let q = FieldSpec::Rational;
    for n in [2, 4] {
        let c = petrovic_generators(n, q).unwrap();
        let vecs: Vec<Vec<FieldElement>> = c.iter().map(vec).collect();
        ensure(greenpres::Subspace::span(q, n * n, &vecs).dim() == n, || format!("generators dependent for n = {}", n))?;
        let mut s = Sampler::new(q, n as u64, 5);
        for _ in 0..100 {
            let l = s.nonzero_vector(n);
            let m = c.iter().zip(&l).fold(Matrix::zeros(q, n, n), |acc, (ci, li)| acc.add(&ci.scale(li).unwrap()).unwrap());
            ensure(m.rank() == 2, || format!("combination of rank {} for n = {}", m.rank(), n))?;
        }
    }
    Ok(())
}

pub fn botta_gf2_invertible() -> Check {
    let k = FieldSpec::gf2();
    let t = construct_botta(&Polynomial::from_ints(k, &[1, 1, 1])).unwrap();
    let imgs = t.images();
    let (i, c) = (&imgs[0], &imgs[1]);
    for m in [i.clone(), c.clone(), i.add(c).unwrap()] {
        ensure(m.is_invertible().unwrap(), || "a nonzero combination of I and C is singular".into())?;
    }
    Ok(())
}

/// Rank-class counts agree with enumeration and sum to q^(n²).
pub fn counts_match_enumeration() -> Check {
    for (spec, n) in [(FieldSpec::gf2(), 2), (FieldSpec::gf2(), 3), (FieldSpec::gf2(), 4), (FieldSpec::gf3(), 2), (FieldSpec::Gf4, 2), (FieldSpec::gf5(), 2), (FieldSpec::prime(7).unwrap(), 2), (FieldSpec::prime(11).unwrap(), 2), (FieldSpec::prime(13).unwrap(), 2)] {
        let q = spec.order().unwrap();
        let mut tally = vec![0u64; n + 1];
        for m in enumerate_matrices(spec, n).unwrap() {
            tally[m.rank()] += 1;
        }
        for (r, &t) in tally.iter().enumerate() {
            let c = count_rank_matrices(n, q, r).unwrap();
            ensure(c == t.into(), || format!("{} n={} r={}: formula {} vs enumeration {}", spec, n, r, c, t))?;
        }
    }
    Ok(())
}

pub struct RankSumOutcome {
    pub cases: u64,
    pub failures: Vec<String>,
    /// Instances with no decomposition at all, confirmed by brute force.
    pub impossible: Vec<String>,
}

fn no_decomposition_exists(a: &Matrix, k: usize) -> bool {
    let all: Vec<Matrix> = enumerate_matrices(a.spec(), a.rows()).unwrap().filter(|m| m.rank() == k).collect();
    !all.iter().any(|b| all.iter().any(|c| &b.add(c).unwrap() == a))
}

pub fn rank_sum_exhaustive() -> RankSumOutcome {
    let mut out = RankSumOutcome { cases: 0, failures: Vec::new(), impossible: Vec::new() };
    for spec in [FieldSpec::gf2(), FieldSpec::gf3()] {
        for n in 1..=3 {
            for a in enumerate_matrices(spec, n).unwrap() {
                let r = a.rank();
                let mut ks: Vec<usize> = (r..=n).collect();
                if r >= 3 {
                    ks.push(r - 1);
                }
                for k in ks {
                    out.cases += 1;
                    match rank_sum_decompose(&a, k) {
                        Ok((b, c)) => {
                            if b.rank() != k || c.rank() != k || b.add(&c).unwrap() != a {
                                out.failures.push(format!("{} n={} k={} A={:?}", spec, n, k, a));
                            }
                        }
                        Err(e) => {
                            if no_decomposition_exists(&a, k) {
                                out.impossible.push(format!("{} n={} rank {} k={}", spec, n, r, k));
                            } else {
                                out.failures.push(format!("{} n={} k={}: {}", spec, n, k, e));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

pub struct PencilOutcome {
    pub anchor: Vec<u64>,
    pub pairs: u64,
    pub small_rank1_sets: u64,
    pub small_rank2_sets: u64,
}

pub fn pencil_exhaustive() -> PencilOutcome {
    let k = FieldSpec::gf5();
    let id = Matrix::identity(k, 2);
    let swap = Matrix::from_ints(k, &[[0, 1], [1, 0]]);
    let anchor = pencil_lambda_set(&id, &swap, 1).unwrap().iter().map(|e| e.code().unwrap()).collect();
    let all: Vec<Matrix> = enumerate_matrices(k, 2).unwrap().collect();
    let mut out = PencilOutcome { anchor, pairs: 0, small_rank1_sets: 0, small_rank2_sets: 0 };
    for a in &all {
        for b in &all {
            out.pairs += 1;
            let r2 = pencil_lambda_set(a, b, 2).unwrap().len();
            if r2 == 1 || r2 == 2 {
                out.small_rank2_sets += 1;
            }
            let r1 = pencil_lambda_set(a, b, 1).unwrap().len();
            if r1 == 1 || r1 == 2 {
                out.small_rank1_sets += 1;
            }
        }
    }
    out
}
