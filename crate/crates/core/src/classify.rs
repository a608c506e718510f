//! Decomposing preservers into canonical forms. Every non-exotic answer
//! is checked by rematerializing it and comparing operators exactly.

use crate::error::Result;
use crate::field::{FieldElement, FieldSpec};
use crate::form::{ExoticReason, PreserverForm};
use crate::matrix::{Matrix, Subspace};
use crate::operator::{op_column_functional, LinearOperator};
use crate::sampling::Sampler;

/// Evidence gathered by the L-classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LClassifyCertificate {
    pub v_t: Subspace,
    pub u_basis: Vec<Vec<FieldElement>>,
    pub w_basis: Vec<Vec<FieldElement>>,
    /// Φ_1 with φ_1(y) = y·Φ_1; P = Φ_1ᵀ.
    pub phi1: Matrix,
    pub scalars: Vec<FieldElement>,
}

fn exotic(r: ExoticReason) -> PreserverForm {
    PreserverForm::Exotic(r)
}

/// Keeps `form` only if it reproduces `t` exactly.
fn verified(t: &LinearOperator, form: PreserverForm) -> Result<PreserverForm> {
    let form = match form.normalized() {
        Ok(f) => f,
        Err(_) => return Ok(exotic(ExoticReason::VerificationFailed)),
    };
    match form.materialize(t.spec(), t.n()) {
        Ok(Some(m)) if m.equal(t)? => Ok(form),
        Ok(None) => Ok(form),
        _ => Ok(exotic(ExoticReason::VerificationFailed)),
    }
}

fn pivot(v: &[FieldElement]) -> Option<usize> {
    v.iter().position(|e| !e.is_zero())
}

/// Splits a rank-1 matrix as col·row with `row` its first nonzero row.
fn outer_factors(m: &Matrix) -> Option<(Vec<FieldElement>, Vec<FieldElement>)> {
    let i0 = (0..m.rows()).find(|&i| pivot(m.row(i)).is_some())?;
    let row = m.row(i0).to_vec();
    let k = pivot(&row)?;
    let inv = row[k].inv().ok()?;
    let col = (0..m.rows()).map(|i| m.get(i, k) * &inv).collect();
    Some((col, row))
}

fn conjugate_by_transpose(t: &LinearOperator) -> Result<LinearOperator> {
    let tr = LinearOperator::transpose_op(t.spec(), t.n());
    tr.compose(t)?.compose(&tr)
}

/// Bijective rank-1 preservers: A ↦ PAQ or A ↦ PAᵀQ.
pub fn classify_bijective_rank1(t: &LinearOperator) -> Result<PreserverForm> {
    let (spec, n) = (t.spec(), t.n());
    if !t.is_bijective() {
        return Ok(exotic(ExoticReason::VerificationFailed));
    }
    let images = t.images();
    if images.iter().any(|m| m.rank() != 1) {
        return Ok(exotic(ExoticReason::Rank1NotPreserved));
    }
    if n == 1 {
        let form = PreserverForm::TwoSided { p: Matrix::identity(spec, 1), q: images[0].clone() };
        return verified(t, form);
    }
    let (a, b) = (&images[0], &images[1]);
    if a.row_space() == b.row_space() {
        let (p, q) = recover_two_sided(&images, n)?;
        return verified(t, PreserverForm::TwoSided { p, q });
    }
    if a.col_space() == b.col_space() {
        let s = t.compose(&LinearOperator::transpose_op(spec, n))?;
        let (p, q) = recover_two_sided(&s.images(), n)?;
        return verified(t, PreserverForm::TwoSidedTranspose { p, q });
    }
    Ok(exotic(ExoticReason::BranchInconclusive))
}

/// From T(E_ij) = p_i·q_j: p_1 from the factorization of T(E_11), each q_j
/// from T(E_1j), each p_i from T(E_i1).
fn recover_two_sided(images: &[Matrix], n: usize) -> Result<(Matrix, Matrix)> {
    let spec = images[0].spec();
    let img = |i: usize, j: usize| &images[j * n + i];
    let zero = || (Matrix::zeros(spec, n, n), Matrix::zeros(spec, n, n));
    let Some((p1, _)) = outer_factors(img(0, 0)) else { return Ok(zero()) };
    let i0 = pivot(&p1).expect("nonzero factor");
    let inv_p = p1[i0].inv()?;
    let qs: Vec<Vec<FieldElement>> = (0..n).map(|j| img(0, j).row(i0).iter().map(|e| e * &inv_p).collect()).collect();
    let Some(k0) = pivot(&qs[0]) else { return Ok(zero()) };
    let inv_q = qs[0][k0].inv()?;
    let ps: Vec<Vec<FieldElement>> = (0..n).map(|i| (0..n).map(|r| img(i, 0).get(r, k0) * &inv_q).collect()).collect();
    let p = Matrix::from_fn(spec, n, n, |r, c| ps[c][r].clone());
    let q = Matrix::from_fn(spec, n, n, |r, c| qs[r][c].clone());
    Ok((p, q))
}

/// L-preservers: Zero, A ↦ PAX, or Exotic when a constructive step fails.
pub fn classify_l_preserver(t: &LinearOperator) -> Result<(PreserverForm, Option<LClassifyCertificate>)> {
    let (spec, n) = (t.spec(), t.n());
    let v_t = t.kernel_row_space();
    if v_t.dim() == n {
        let form = if t.is_zero() { PreserverForm::Zero } else { exotic(ExoticReason::VerificationFailed) };
        return Ok((form, None));
    }
    let u_basis = v_t.greedy_complement();
    let row_matrix = |j: usize, u: &[FieldElement]| Matrix::from_fn(spec, n, n, |r, c| if r == j { u[c].clone() } else { spec.zero() });

    let mut w_basis = Vec::with_capacity(u_basis.len());
    for u in &u_basis {
        let img = t.apply(&row_matrix(0, u))?;
        if img.rank() >= 2 {
            return Ok((exotic(ExoticReason::Rank1ImageViolated), None));
        }
        w_basis.push(img.row_space().basis().row(0).to_vec());
    }

    let mut phis = Vec::with_capacity(u_basis.len());
    for (u, w) in u_basis.iter().zip(&w_basis) {
        let k = pivot(w).expect("RREF generator is nonzero");
        let mut phi = Matrix::zeros(spec, n, n);
        for j in 0..n {
            let m = t.apply(&row_matrix(j, u))?;
            let y: Vec<FieldElement> = (0..n).map(|r| m.get(r, k).clone()).collect();
            if Matrix::from_fn(spec, n, n, |r, c| &y[r] * &w[c]) != m {
                return Ok((exotic(ExoticReason::ImageOutsideClass), None));
            }
            for (c, e) in y.into_iter().enumerate() {
                phi.set(j, c, e);
            }
        }
        if !phi.is_invertible()? {
            return Ok((exotic(ExoticReason::PhiNotInvertible), None));
        }
        phis.push(phi);
    }

    let phi1 = phis[0].clone();
    let k = pivot(phi1.entries()).expect("invertible");
    let mut scalars = Vec::with_capacity(phis.len());
    for phi in &phis {
        let c = phi1.entries()[k].try_div(&phi.entries()[k])?;
        if phi.scale(&c)? != phi1 {
            return Ok((exotic(ExoticReason::PhiScalarsInconsistent), None));
        }
        scalars.push(c);
    }

    // B·X = Target with B = [V_T basis; U], Target = [0; c_i⁻¹ w_i]
    let mut b_rows = v_t.basis_vectors();
    let mut target = vec![vec![spec.zero(); n]; v_t.dim()];
    for ((u, w), c) in u_basis.iter().zip(&w_basis).zip(&scalars) {
        b_rows.push(u.clone());
        let ci = c.inv()?;
        target.push(w.iter().map(|e| e * &ci).collect());
    }
    let b = Matrix::from_rows(spec, b_rows)?;
    let x = b.inverse()?.matmul(&Matrix::from_rows(spec, target)?)?;
    let form = verified(t, PreserverForm::LeftRegular { p: phi1.transpose(), x })?;
    let cert = (!form.is_exotic()).then(|| LClassifyCertificate { v_t, u_basis, w_basis, phi1, scalars });
    Ok((form, cert))
}

/// R-preservers: Zero, A ↦ XAP, or Exotic.
pub fn classify_r_preserver(t: &LinearOperator) -> Result<PreserverForm> {
    let conj = conjugate_by_transpose(t)?;
    let (form, _) = classify_l_preserver(&conj)?;
    match form {
        PreserverForm::LeftRegular { p, x } => verified(t, PreserverForm::RightRegular { x: x.transpose(), p: p.transpose() }),
        PreserverForm::Zero => Ok(PreserverForm::Zero),
        other => Ok(other),
    }
}

/// Joint right kernel {y : K·yᵀ = 0 for every K}.
fn joint_kernel(ms: &[Matrix]) -> Result<Subspace> {
    let mut stacked = ms[0].clone();
    for m in &ms[1..] {
        stacked = stacked.vstack(m)?;
    }
    Ok(stacked.kernel_basis())
}

const SPAN_ENUMERATION_LIMIT: u64 = 1 << 16;
const SPAN_SAMPLES: usize = 200;

/// Every nonzero combination of `c` invertible: enumerated over small
/// finite fields, otherwise sampled with a fixed seed.
fn span_all_invertible(c: &[Matrix], spec: FieldSpec) -> Result<bool> {
    let n = c.len();
    let combo = |coeffs: &[FieldElement]| -> Result<Matrix> {
        let mut acc = Matrix::zeros(spec, n, n);
        for (m, a) in c.iter().zip(coeffs) {
            if !a.is_zero() {
                acc = acc.add(&m.scale(a)?)?;
            }
        }
        Ok(acc)
    };
    match spec.order().and_then(|q| q.checked_pow(n as u32)).filter(|&t| t <= SPAN_ENUMERATION_LIMIT) {
        Some(total) => {
            let q = spec.order().unwrap();
            for mut idx in 1..total {
                let coeffs: Vec<FieldElement> = (0..n)
                    .map(|_| {
                        let e = spec.element(idx % q).expect("digit below q");
                        idx /= q;
                        e
                    })
                    .collect();
                if !combo(&coeffs)?.is_invertible()? {
                    return Ok(false);
                }
            }
        }
        None => {
            let mut s = Sampler::new(spec, 0, crate::sampling::DEFAULT_BOUND);
            for _ in 0..SPAN_SAMPLES {
                let coeffs = s.nonzero_vector(n);
                if !combo(&coeffs)?.is_invertible()? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn column_functional_branch(t: &LinearOperator, joint: &Subspace, transposed: bool) -> Result<Option<PreserverForm>> {
    if joint.dim() != 1 {
        return Ok(None);
    }
    let (spec, n) = (t.spec(), t.n());
    let x = joint.basis().row(0).to_vec();
    let j0 = pivot(&x).expect("nonzero");
    let c: Vec<Matrix> = (0..n)
        .map(|i| {
            let m = if transposed { Matrix::unit(spec, n, j0, i) } else { Matrix::unit(spec, n, i, j0) };
            t.apply(&m)
        })
        .collect::<Result<_>>()?;
    let op = op_column_functional(&x, &c, transposed)?;
    if !op.equal(t)? {
        return Ok(None);
    }
    if !span_all_invertible(&c, spec)? {
        return Ok(Some(exotic(ExoticReason::SpanNotInvertible)));
    }
    Ok(Some(verified(t, PreserverForm::ColumnFunctional { x, c, transposed })?))
}

/// H-preservers: Zero, the two-sided forms, the column-functional forms,
/// or Exotic.
pub fn classify_h_preserver(t: &LinearOperator) -> Result<PreserverForm> {
    if t.is_zero() {
        return Ok(PreserverForm::Zero);
    }
    if t.is_bijective() {
        return classify_bijective_rank1(t);
    }
    let kernel = t.kernel_matrices();
    let right = joint_kernel(&kernel)?;
    if let Some(form) = column_functional_branch(t, &right, false)? {
        return Ok(form);
    }
    let transposed: Vec<Matrix> = kernel.iter().map(Matrix::transpose).collect();
    let left = joint_kernel(&transposed)?;
    if let Some(form) = column_functional_branch(t, &left, true)? {
        return Ok(form);
    }
    Ok(exotic(ExoticReason::KernelShapeMismatch))
}

/// J-preservers: Zero or a bijective two-sided form.
pub fn classify_j_preserver(t: &LinearOperator) -> Result<PreserverForm> {
    if t.is_zero() {
        return Ok(PreserverForm::Zero);
    }
    if !t.is_bijective() {
        return Ok(exotic(ExoticReason::NonzeroNonBijectiveJClaimRefuted));
    }
    classify_bijective_rank1(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Polynomial;
    use crate::operator::{construct_botta, construct_division_algebra, construct_petrovic, first_column_operator, op_regular, op_two_sided, Side};

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn column_example() -> LinearOperator {
        let c1 = Matrix::from_ints(q(), &[[1, 1], [0, 1]]);
        let c2 = Matrix::from_ints(q(), &[[0, -1], [1, 1]]);
        first_column_operator(&[c1, c2]).unwrap()
    }

    #[test]
    fn bijective_rank1_examples() {
        for spec in [FieldSpec::gf2(), q()] {
            let id = Matrix::identity(spec, 3);
            let tr = LinearOperator::transpose_op(spec, 3);
            assert_eq!(classify_bijective_rank1(&tr).unwrap(), PreserverForm::TwoSidedTranspose { p: id.clone(), q: id.clone() });
            let ident = LinearOperator::identity(spec, 3);
            assert_eq!(classify_bijective_rank1(&ident).unwrap(), PreserverForm::TwoSided { p: id.clone(), q: id });
        }
    }

    #[test]
    fn two_sided_round_trips() {
        let k = FieldSpec::gf5();
        for seed in 0..20 {
            let mut s = Sampler::new(k, seed, 5);
            let (p, qm) = (s.invertible(3), s.invertible(3));
            for flag in [false, true] {
                let t = op_two_sided(&p, &qm, flag).unwrap();
                let f = classify_bijective_rank1(&t).unwrap();
                assert!(f.reproduces(&t).unwrap(), "seed {} {}", seed, flag);
                assert_eq!(matches!(f, PreserverForm::TwoSidedTranspose { .. }), flag);
            }
        }
    }

    #[test]
    fn l_round_trips_over_q() {
        for seed in 0..20 {
            let mut s = Sampler::new(q(), seed, 5);
            let p = s.invertible(2);
            let x = s.matrix(2, 2);
            let t = op_regular(Side::Left, &p, &x).unwrap();
            let (f, cert) = classify_l_preserver(&t).unwrap();
            if x.is_zero() {
                assert_eq!(f, PreserverForm::Zero);
                continue;
            }
            assert!(matches!(f, PreserverForm::LeftRegular { .. }), "seed {}", seed);
            assert!(f.reproduces(&t).unwrap());
            let cert = cert.unwrap();
            let mut all = cert.v_t.basis_vectors();
            all.extend(cert.u_basis.clone());
            assert_eq!(Subspace::span(q(), 2, &all).dim(), 2);
        }
    }

    #[test]
    fn l_with_singular_x() {
        let k = FieldSpec::gf3();
        let p = Matrix::from_ints(k, &[[1, 2], [1, 1]]);
        let x = Matrix::from_ints(k, &[[0, 0], [2, 1]]);
        let t = op_regular(Side::Left, &p, &x).unwrap();
        let (f, cert) = classify_l_preserver(&t).unwrap();
        assert!(f.reproduces(&t).unwrap());
        let cert = cert.unwrap();
        assert_eq!(cert.v_t.dim(), 1);
        assert_eq!(cert.u_basis.len(), 1);
    }

    #[test]
    fn exotic_l_examples() {
        let botta = construct_botta(&Polynomial::from_ints(q(), &[1, 1, 1])).unwrap();
        assert_eq!(classify_l_preserver(&botta).unwrap().0, PreserverForm::Exotic(ExoticReason::Rank1ImageViolated));
        let petrovic = construct_petrovic(4, q()).unwrap();
        assert!(classify_l_preserver(&petrovic).unwrap().0.is_exotic());
        assert!(classify_l_preserver(&column_example()).unwrap().0.is_exotic());
        assert_eq!(classify_l_preserver(&LinearOperator::zero(q(), 2)).unwrap().0, PreserverForm::Zero);
    }

    #[test]
    fn r_round_trips_over_gf5() {
        let k = FieldSpec::gf5();
        for seed in 0..20 {
            let mut s = Sampler::new(k, seed, 5);
            let p = s.invertible(2);
            let x = s.any_rank_matrix(2);
            let t = op_regular(Side::Right, &p, &x).unwrap();
            let f = classify_r_preserver(&t).unwrap();
            assert!(f.reproduces(&t).unwrap(), "seed {}", seed);
            assert_eq!(x.is_zero(), f == PreserverForm::Zero);
        }
        assert_eq!(classify_r_preserver(&LinearOperator::zero(k, 2)).unwrap(), PreserverForm::Zero);
        let botta = construct_botta(&Polynomial::from_ints(q(), &[1, 1, 1])).unwrap();
        assert!(classify_r_preserver(&conjugate_by_transpose(&botta).unwrap()).unwrap().is_exotic());
    }

    #[test]
    fn h_examples() {
        let c = construct_division_algebra(2, q()).unwrap();
        let t = first_column_operator(&c).unwrap();
        let f = classify_h_preserver(&t).unwrap();
        assert!(matches!(f, PreserverForm::ColumnFunctional { transposed: false, .. }));
        assert!(f.reproduces(&t).unwrap());

        let k = FieldSpec::gf3();
        let p = Matrix::from_ints(k, &[[1, 2], [0, 1]]);
        let qm = Matrix::from_ints(k, &[[2, 1], [1, 1]]);
        let t = op_two_sided(&p, &qm, true).unwrap();
        let f = classify_h_preserver(&t).unwrap();
        assert!(matches!(f, PreserverForm::TwoSidedTranspose { .. }));
        assert!(f.reproduces(&t).unwrap());
        assert_eq!(classify_h_preserver(&LinearOperator::zero(k, 2)).unwrap(), PreserverForm::Zero);
    }

    #[test]
    fn h_transposed_column_functional() {
        let c = construct_division_algebra(4, q()).unwrap();
        let x: Vec<FieldElement> = [0, 2, -1, 3].iter().map(|&v| q().from_i64(v)).collect();
        let t = op_column_functional(&x, &c, true).unwrap();
        let f = classify_h_preserver(&t).unwrap();
        assert!(matches!(f, PreserverForm::ColumnFunctional { transposed: true, .. }));
        assert!(f.reproduces(&t).unwrap());
    }

    #[test]
    fn h_rejects_singular_span() {
        let k = FieldSpec::gf5();
        let c = vec![Matrix::identity(k, 2), Matrix::unit(k, 2, 0, 0)];
        let t = first_column_operator(&c).unwrap();
        assert_eq!(classify_h_preserver(&t).unwrap(), PreserverForm::Exotic(ExoticReason::SpanNotInvertible));
    }

    #[test]
    fn j_examples() {
        let k = FieldSpec::gf5();
        let mut s = Sampler::new(k, 3, 5);
        let t = op_two_sided(&s.invertible(2), &s.invertible(2), true).unwrap();
        let f = classify_j_preserver(&t).unwrap();
        assert!(matches!(f, PreserverForm::TwoSidedTranspose { .. }) && f.reproduces(&t).unwrap());
        assert_eq!(classify_j_preserver(&LinearOperator::zero(k, 2)).unwrap(), PreserverForm::Zero);
        assert_eq!(
            classify_j_preserver(&column_example()).unwrap(),
            PreserverForm::Exotic(ExoticReason::NonzeroNonBijectiveJClaimRefuted)
        );
    }

    #[test]
    fn scalar_multiples() {
        let k = FieldSpec::gf5();
        let mut s = Sampler::new(k, 8, 5);
        let t = op_regular(Side::Left, &s.invertible(2), &s.matrix(2, 2)).unwrap();
        for c in 1..5 {
            let ct = t.scale(&k.from_i64(c)).unwrap();
            assert!(classify_l_preserver(&ct).unwrap().0.reproduces(&ct).unwrap());
        }
    }
}
