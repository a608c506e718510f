//! Green's relations on M_n(K), rank-class counting, finite enumeration,
//! rank-sum decompositions and pencil rank sets.
//!
//! Over a field, `A L B` iff the row spaces agree, `A R B` iff the column
//! spaces agree, `H = L ∧ R`, and `A J B` iff the ranks agree. The
//! pre-orders are the corresponding containments.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{partial_identity, Matrix, Subspace};

/// Enumeration guard: at most 2^20 matrices.
pub const MATRIX_ENUMERATION_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GreenRelation {
    L,
    R,
    H,
    J,
    LeqL,
    LeqR,
    LeqH,
    LeqJ,
}

impl GreenRelation {
    pub const ALL: [GreenRelation; 8] = [
        GreenRelation::L,
        GreenRelation::R,
        GreenRelation::H,
        GreenRelation::J,
        GreenRelation::LeqL,
        GreenRelation::LeqR,
        GreenRelation::LeqH,
        GreenRelation::LeqJ,
    ];

    pub const EQUIVALENCES: [GreenRelation; 4] = [GreenRelation::L, GreenRelation::R, GreenRelation::H, GreenRelation::J];

    pub fn is_equivalence(self) -> bool {
        matches!(self, GreenRelation::L | GreenRelation::R | GreenRelation::H | GreenRelation::J)
    }

    /// The pre-order whose symmetric part is this equivalence, and back.
    pub fn preorder(self) -> GreenRelation {
        match self {
            GreenRelation::L => GreenRelation::LeqL,
            GreenRelation::R => GreenRelation::LeqR,
            GreenRelation::H => GreenRelation::LeqH,
            GreenRelation::J => GreenRelation::LeqJ,
            other => other,
        }
    }

    pub fn equivalence(self) -> GreenRelation {
        match self {
            GreenRelation::LeqL => GreenRelation::L,
            GreenRelation::LeqR => GreenRelation::R,
            GreenRelation::LeqH => GreenRelation::H,
            GreenRelation::LeqJ => GreenRelation::J,
            other => other,
        }
    }

    /// Evaluates the relation on a pair of matrices.
    pub fn holds(self, a: &Matrix, b: &Matrix) -> Result<bool> {
        if self.is_equivalence() {
            green_related(self, a, b)
        } else {
            green_leq(self, a, b)
        }
    }
}

impl fmt::Display for GreenRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GreenRelation::L => "L",
            GreenRelation::R => "R",
            GreenRelation::H => "H",
            GreenRelation::J => "J",
            GreenRelation::LeqL => "leqL",
            GreenRelation::LeqR => "leqR",
            GreenRelation::LeqH => "leqH",
            GreenRelation::LeqJ => "leqJ",
        };
        f.write_str(s)
    }
}

impl FromStr for GreenRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "L" => GreenRelation::L,
            "R" => GreenRelation::R,
            "H" => GreenRelation::H,
            "J" => GreenRelation::J,
            "leqL" | "<=L" => GreenRelation::LeqL,
            "leqR" | "<=R" => GreenRelation::LeqR,
            "leqH" | "<=H" => GreenRelation::LeqH,
            "leqJ" | "<=J" => GreenRelation::LeqJ,
            _ => return Err(Error::Parse(format!("unknown relation `{}`", s))),
        })
    }
}

/// Canonical datum of a Green class: equal labels ⟺ related matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    L(Subspace),
    R(Subspace),
    H(Subspace, Subspace),
    J(usize),
}

fn check_pair(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.spec() != b.spec() {
        return Err(Error::FieldMismatch(a.spec(), b.spec()));
    }
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::Dimension("Green's relations need square matrices of one size".into()));
    }
    Ok(())
}

pub fn green_related(rel: GreenRelation, a: &Matrix, b: &Matrix) -> Result<bool> {
    check_pair(a, b)?;
    Ok(match rel {
        GreenRelation::L => a.row_space() == b.row_space(),
        GreenRelation::R => a.col_space() == b.col_space(),
        GreenRelation::H => a.row_space() == b.row_space() && a.col_space() == b.col_space(),
        GreenRelation::J => a.rank() == b.rank(),
        _ => return Err(Error::InvalidArgument(format!("{} is a pre-order", rel))),
    })
}

pub fn green_leq(rel: GreenRelation, a: &Matrix, b: &Matrix) -> Result<bool> {
    check_pair(a, b)?;
    let leq_l = || a.row_space().is_subspace_of(&b.row_space());
    let leq_r = || a.col_space().is_subspace_of(&b.col_space());
    Ok(match rel {
        GreenRelation::LeqL => leq_l(),
        GreenRelation::LeqR => leq_r(),
        GreenRelation::LeqH => leq_l() && leq_r(),
        GreenRelation::LeqJ => a.rank() <= b.rank(),
        _ => return Err(Error::InvalidArgument(format!("{} is an equivalence", rel))),
    })
}

pub fn class_label(rel: GreenRelation, a: &Matrix) -> Result<ClassLabel> {
    if !a.is_square() {
        return Err(Error::Dimension("class labels need square matrices".into()));
    }
    Ok(match rel {
        GreenRelation::L => ClassLabel::L(a.row_space()),
        GreenRelation::R => ClassLabel::R(a.col_space()),
        GreenRelation::H => ClassLabel::H(a.row_space(), a.col_space()),
        GreenRelation::J => ClassLabel::J(a.rank()),
        _ => return Err(Error::InvalidArgument(format!("{} has no classes", rel))),
    })
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let mut m = q;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// Number of n×n matrices of rank r over GF(q):
/// ∏_{i<r} (qⁿ − qⁱ)² / (qʳ − qⁱ).
pub fn count_rank_matrices(n: usize, q: u64, r: usize) -> Result<BigUint> {
    if r > n {
        return Err(Error::InvalidArgument(format!("rank {} exceeds size {}", r, n)));
    }
    if !is_prime_power(q) {
        return Err(Error::InvalidArgument(format!("{} is not a prime power", q)));
    }
    let q = BigUint::from(q);
    let pow = |e: usize| num_traits::pow(q.clone(), e);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..r {
        let f = pow(n) - pow(i);
        num *= &f * &f;
        den *= pow(r) - pow(i);
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// Number of matrices in the enumeration of M_n(K), checked against the guard.
pub fn enumeration_size(spec: FieldSpec, n: usize) -> Result<u64> {
    let q = spec.order().ok_or(Error::InfiniteField("matrix enumeration"))?;
    q.checked_pow((n * n) as u32)
        .filter(|&c| c <= MATRIX_ENUMERATION_LIMIT)
        .ok_or_else(|| Error::Infeasible(format!("{}^{} matrices exceeds 2^20", q, n * n)))
}

/// The matrix at position `index` of the canonical order: the base-q digits
/// of `index`, least significant first, fill the column-major vectorization.
pub fn matrix_from_index(spec: FieldSpec, n: usize, mut index: u64) -> Result<Matrix> {
    let q = spec.order().ok_or(Error::InfiniteField("matrix enumeration"))?;
    let mut m = Matrix::zeros(spec, n, n);
    for k in 0..n * n {
        m.set(k % n, k / n, spec.element(index % q)?);
        index /= q;
    }
    if index != 0 {
        return Err(Error::InvalidArgument("index out of range".into()));
    }
    Ok(m)
}

/// Inverse of [`matrix_from_index`].
pub fn matrix_index(m: &Matrix) -> Result<u64> {
    let q = m.spec().order().ok_or(Error::InfiniteField("matrix enumeration"))?;
    let n = m.rows();
    let mut index = 0u64;
    for k in (0..n * m.cols()).rev() {
        index = index * q + m.get(k % n, k / n).code().unwrap();
    }
    Ok(index)
}

/// All q^(n²) matrices in canonical order.
pub fn enumerate_matrices(spec: FieldSpec, n: usize) -> Result<impl Iterator<Item = Matrix>> {
    let total = enumeration_size(spec, n)?;
    Ok((0..total).map(move |i| matrix_from_index(spec, n, i).expect("index in range")))
}

/// Invertible P, Q with A = P · I_n(r) · Q, from the row reduction of A and
/// of the transpose of its reduced form.
pub fn rank_factorization(a: &Matrix) -> Result<(Matrix, Matrix, usize)> {
    if !a.is_square() {
        return Err(Error::Dimension("rank factorization of a non-square matrix".into()));
    }
    let r = a.rref();
    // E·A = R, G·Rᵀ = I_n(r)  ⟹  E·A·Gᵀ = I_n(r)
    let g = r.rref.transpose().rref().transform;
    let p = r.transform.inverse()?;
    let q = g.transpose().inverse()?;
    Ok((p, q, r.rank))
}

fn diag(spec: FieldSpec, entries: &[FieldElement]) -> Matrix {
    let n = entries.len();
    Matrix::from_fn(spec, n, n, |i, j| if i == j { entries[i].clone() } else { spec.zero() })
}

/// h ∈ K \ {0, 1}: the element encoded 2, or 2 in the rationals.
fn third_element(spec: FieldSpec) -> Option<FieldElement> {
    match spec.order() {
        Some(q) if q <= 2 => None,
        Some(_) => spec.element(2).ok(),
        None => Some(spec.from_i64(2)),
    }
}

fn superdiagonal(spec: FieldSpec, n: usize, count: usize) -> Matrix {
    // Σ_{i=1}^{count} E_{i,i+1}
    let mut m = Matrix::zeros(spec, n, n);
    for i in 0..count {
        m.set(i, i + 1, spec.one());
    }
    m
}

/// Splits I_n(r) into two rank-k summands, r ≤ k ≤ n.
fn split_partial_identity_up(spec: FieldSpec, n: usize, r: usize, k: usize) -> Result<(Matrix, Matrix)> {
    let ir = partial_identity(spec, n, r)?;
    if let Some(h) = third_element(spec) {
        let one = spec.one();
        let mut b = vec![spec.zero(); n];
        let mut c = vec![spec.zero(); n];
        for i in 0..r {
            b[i] = &one - &h;
            c[i] = h.clone();
        }
        for i in r..k {
            b[i] = one.clone();
            c[i] = -&one;
        }
        return Ok((diag(spec, &b), diag(spec, &c)));
    }
    // GF(2)
    if k < n {
        let s = superdiagonal(spec, n, k);
        return Ok((ir.add(&s)?, s));
    }
    if n == 1 {
        // 0 = 1 + 1; the unit [1] has no splitting into two rank-1 summands.
        return if r == 0 {
            Ok((Matrix::identity(spec, 1), Matrix::identity(spec, 1)))
        } else {
            Err(Error::Infeasible("over GF(2) the 1x1 identity is not a sum of two rank-1 matrices".into()))
        };
    }
    // k = n: C = I_n(1) + E_{n,1} + Σ_{i<n} E_{i,i+1}, B = I_n(r) + C
    let mut c = partial_identity(spec, n, 1)?.add(&superdiagonal(spec, n, n - 1))?;
    c.set(n - 1, 0, spec.one());
    Ok((ir.add(&c)?, c))
}

/// Splits I_n(r), r ≥ 3, into two rank-(r−1) summands.
fn split_partial_identity_down(spec: FieldSpec, n: usize, r: usize) -> Result<(Matrix, Matrix)> {
    if let Some(h) = third_element(spec) {
        let one = spec.one();
        let mut b = vec![spec.zero(); n];
        let mut c = vec![spec.zero(); n];
        for i in 0..r - 2 {
            b[i] = &one - &h;
            c[i] = h.clone();
        }
        b[r - 2] = one.clone();
        c[r - 1] = one;
        return Ok((diag(spec, &b), diag(spec, &c)));
    }
    // GF(2): A_1 ⊕ B_1 + A_2 ⊕ B_2 with B_1 + B_2 = I_{n-3}(r-3) of rank r-3
    let a1 = Matrix::from_ints(spec, &[[1, 1, 0], [1, 1, 0], [0, 0, 1]]);
    let a2 = Matrix::from_ints(spec, &[[0, 1, 0], [1, 0, 0], [0, 0, 0]]);
    let block = |a: &Matrix, b: Option<&Matrix>| {
        Matrix::from_fn(spec, n, n, |i, j| match (i < 3, j < 3) {
            (true, true) => a.get(i, j).clone(),
            (false, false) => b.map_or(spec.zero(), |b| b.get(i - 3, j - 3).clone()),
            _ => spec.zero(),
        })
    };
    if n == 3 {
        return Ok((block(&a1, None), block(&a2, None)));
    }
    match split_partial_identity_up(spec, n - 3, r - 3, r - 3) {
        Ok((b1, b2)) => Ok((block(&a1, Some(&b1)), block(&a2, Some(&b2)))),
        Err(_) => {
            // Only I_1 has no rank-1 splitting over GF(2). Fall back to
            // I_n(r) = (I_n(r) + N) + N with N = E_11 ⊕ (nilpotent shift on
            // coordinates 2..r): both summands have rank r − 1.
            let mut nmat = Matrix::zeros(spec, n, n);
            nmat.set(0, 0, spec.one());
            for i in 1..r - 1 {
                nmat.set(i, i + 1, spec.one());
            }
            Ok((partial_identity(spec, n, r)?.add(&nmat)?, nmat))
        }
    }
}

/// Writes A = B + C with rank(B) = rank(C) = k, for rk(A) ≤ k ≤ n, or for
/// k = rk(A) − 1 when rk(A) ≥ 3. Every output is rank-checked.
pub fn rank_sum_decompose(a: &Matrix, k: usize) -> Result<(Matrix, Matrix)> {
    let n = a.rows();
    let (p, q, r) = rank_factorization(a)?;
    let spec = a.spec();
    let (b0, c0) = if r <= k && k <= n {
        split_partial_identity_up(spec, n, r, k)?
    } else if r >= 3 && k + 1 == r {
        split_partial_identity_down(spec, n, r)?
    } else {
        return Err(Error::InvalidArgument(format!("no rank-sum decomposition into rank {} for rank {}", k, r)));
    };
    let b = p.matmul(&b0)?.matmul(&q)?;
    let c = p.matmul(&c0)?.matmul(&q)?;
    if b.rank() != k || c.rank() != k || &b.add(&c)? != a {
        return Err(Error::Infeasible(format!("rank-sum construction failed for rank {} into {}", r, k)));
    }
    Ok((b, c))
}

/// {λ ∈ K : rank(A + λB) = r}, in ascending encoding order.
pub fn pencil_lambda_set(a: &Matrix, b: &Matrix, r: usize) -> Result<Vec<FieldElement>> {
    check_pair(a, b)?;
    if r > a.rows() {
        return Err(Error::InvalidArgument(format!("rank {} exceeds size {}", r, a.rows())));
    }
    let mut out = Vec::new();
    for lambda in a.spec().elements()? {
        if a.add(&b.scale(&lambda)?)?.rank() == r {
            out.push(lambda);
        }
    }
    Ok(out)
}
