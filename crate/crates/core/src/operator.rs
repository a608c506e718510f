//! Linear operators on M_n(K), stored as n²×n² matrices acting on
//! column-major vectorizations, and constructors for the preserver families.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{companion, Matrix, Polynomial, Subspace};

/// Column-major vectorization: entry (i, j) sits at index j·n + i.
pub fn vec(a: &Matrix) -> Vec<FieldElement> {
    let (r, c) = (a.rows(), a.cols());
    (0..r * c).map(|k| a.get(k % r, k / r).clone()).collect()
}

/// Inverse of [`vec`] for n×n matrices.
pub fn unvec(spec: FieldSpec, n: usize, v: &[FieldElement]) -> Matrix {
    assert_eq!(v.len(), n * n);
    Matrix::from_fn(spec, n, n, |i, j| v[j * n + i].clone())
}

/// E_{ij} for the vec index k = j·n + i.
pub fn basis_matrix(spec: FieldSpec, n: usize, k: usize) -> Matrix {
    Matrix::unit(spec, n, k % n, k / n)
}

/// Kronecker product A ⊗ B.
pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let (br, bc) = (b.rows(), b.cols());
    Matrix::from_fn(a.spec(), a.rows() * br, a.cols() * bc, |i, j| a.get(i / br, j / bc) * b.get(i % br, j % bc))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearOperator {
    n: usize,
    mat: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(Error::Parse(format!("unknown side `{}`", s))),
        }
    }
}

impl LinearOperator {
    pub fn from_matrix(n: usize, mat: Matrix) -> Result<Self> {
        if mat.rows() != n * n || mat.cols() != n * n {
            return Err(Error::Dimension(format!("operator on M_{} needs a {}x{} matrix", n, n * n, n * n)));
        }
        Ok(LinearOperator { n, mat })
    }

    /// The operator with T(E_k) = images[k], k in column-major order.
    pub fn from_images(spec: FieldSpec, n: usize, images: &[Matrix]) -> Result<Self> {
        if images.len() != n * n {
            return Err(Error::Dimension(format!("expected {} images, got {}", n * n, images.len())));
        }
        let mut mat = Matrix::zeros(spec, n * n, n * n);
        for (k, img) in images.iter().enumerate() {
            if img.spec() != spec {
                return Err(Error::FieldMismatch(spec, img.spec()));
            }
            if img.rows() != n || img.cols() != n {
                return Err(Error::Dimension("image has the wrong size".into()));
            }
            for (row, e) in vec(img).into_iter().enumerate() {
                mat.set(row, k, e);
            }
        }
        Ok(LinearOperator { n, mat })
    }

    /// Builds the operator from a function evaluated on the basis E_{ij}.
    pub fn from_fn(spec: FieldSpec, n: usize, f: impl Fn(&Matrix) -> Result<Matrix>) -> Result<Self> {
        let images = (0..n * n).map(|k| f(&basis_matrix(spec, n, k))).collect::<Result<Vec<_>>>()?;
        LinearOperator::from_images(spec, n, &images)
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        LinearOperator { n, mat: Matrix::identity(spec, n * n) }
    }

    pub fn zero(spec: FieldSpec, n: usize) -> Self {
        LinearOperator { n, mat: Matrix::zeros(spec, n * n, n * n) }
    }

    /// A ↦ Aᵀ.
    pub fn transpose_op(spec: FieldSpec, n: usize) -> Self {
        LinearOperator::from_fn(spec, n, |a| Ok(a.transpose())).expect("transpose is well-formed")
    }

    pub fn spec(&self) -> FieldSpec {
        self.mat.spec()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn apply(&self, a: &Matrix) -> Result<Matrix> {
        if a.spec() != self.spec() {
            return Err(Error::FieldMismatch(self.spec(), a.spec()));
        }
        if a.rows() != self.n || a.cols() != self.n {
            return Err(Error::Dimension(format!("operator acts on {}x{} matrices", self.n, self.n)));
        }
        let v = vec(a);
        let out: Vec<FieldElement> = (0..self.n * self.n)
            .map(|r| {
                let mut acc = self.spec().zero();
                for (m, x) in self.mat.row(r).iter().zip(&v) {
                    if !m.is_zero() && !x.is_zero() {
                        acc = &acc + &(m * x);
                    }
                }
                acc
            })
            .collect();
        Ok(unvec(self.spec(), self.n, &out))
    }

    /// T(E_k) for k in column-major order.
    pub fn images(&self) -> Vec<Matrix> {
        let nn = self.n * self.n;
        (0..nn).map(|k| unvec(self.spec(), self.n, &self.mat.column(k))).collect()
    }

    fn check(&self, other: &LinearOperator) -> Result<()> {
        if self.spec() != other.spec() {
            return Err(Error::FieldMismatch(self.spec(), other.spec()));
        }
        if self.n != other.n {
            return Err(Error::Dimension("operators act on different sizes".into()));
        }
        Ok(())
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.check(other)?;
        Ok(LinearOperator { n: self.n, mat: self.mat.matmul(&other.mat)? })
    }

    pub fn add(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.check(other)?;
        Ok(LinearOperator { n: self.n, mat: self.mat.add(&other.mat)? })
    }

    pub fn scale(&self, c: &FieldElement) -> Result<LinearOperator> {
        Ok(LinearOperator { n: self.n, mat: self.mat.scale(c)? })
    }

    pub fn equal(&self, other: &LinearOperator) -> Result<bool> {
        self.check(other)?;
        Ok(self.mat == other.mat)
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn is_bijective(&self) -> bool {
        self.mat.rank() == self.n * self.n
    }

    /// ker T as a subspace of the vec-space K^{n²}.
    pub fn kernel(&self) -> Subspace {
        self.mat.kernel_basis()
    }

    /// Kernel basis as matrices.
    pub fn kernel_matrices(&self) -> Vec<Matrix> {
        self.kernel().basis_vectors().iter().map(|v| unvec(self.spec(), self.n, v)).collect()
    }

    /// V_T: the span of all rows of all matrices in ker T.
    pub fn kernel_row_space(&self) -> Subspace {
        let rows: Vec<Vec<FieldElement>> =
            self.kernel_matrices().iter().flat_map(|m| (0..self.n).map(|i| m.row(i).to_vec()).collect::<Vec<_>>()).collect();
        Subspace::span(self.spec(), self.n, &rows)
    }
}

/// ρ(V) = {A : Row(A) ⊆ V}, spanned by e_iᵀv_j, as a subspace of K^{n²}.
pub fn rho_basis(v: &Subspace) -> Subspace {
    let spec = v.spec();
    let n = v.ambient_dim();
    let mut gens = Vec::new();
    for i in 0..n {
        for b in v.basis_vectors() {
            let m = Matrix::from_fn(spec, n, n, |r, c| if r == i { b[c].clone() } else { spec.zero() });
            gens.push(vec(&m));
        }
    }
    Subspace::span(spec, n * n, &gens)
}

fn require_invertible(m: &Matrix, name: &str) -> Result<()> {
    if !m.is_invertible()? {
        return Err(Error::InvalidArgument(format!("{} must be invertible", name)));
    }
    Ok(())
}

/// A ↦ PAQ, or A ↦ PAᵀQ when `transposed`.
pub fn op_two_sided(p: &Matrix, q: &Matrix, transposed: bool) -> Result<LinearOperator> {
    require_invertible(p, "P")?;
    require_invertible(q, "Q")?;
    if p.spec() != q.spec() {
        return Err(Error::FieldMismatch(p.spec(), q.spec()));
    }
    if p.rows() != q.rows() {
        return Err(Error::Dimension("P and Q differ in size".into()));
    }
    let base = LinearOperator { n: p.rows(), mat: kronecker(&q.transpose(), p) };
    if transposed {
        base.compose(&LinearOperator::transpose_op(p.spec(), p.rows()))
    } else {
        Ok(base)
    }
}

/// Left: A ↦ PAX. Right: A ↦ XAP.
pub fn op_regular(side: Side, p: &Matrix, x: &Matrix) -> Result<LinearOperator> {
    require_invertible(p, "P")?;
    if p.spec() != x.spec() {
        return Err(Error::FieldMismatch(p.spec(), x.spec()));
    }
    if !x.is_square() || x.rows() != p.rows() {
        return Err(Error::Dimension("X must match P in size".into()));
    }
    let mat = match side {
        Side::Left => kronecker(&x.transpose(), p),
        Side::Right => kronecker(&p.transpose(), x),
    };
    Ok(LinearOperator { n: p.rows(), mat })
}

/// M ↦ Σ_i (M·xᵀ)_i C_i, or the same with Mᵀ when `transposed`.
pub fn op_column_functional(x: &[FieldElement], c: &[Matrix], transposed: bool) -> Result<LinearOperator> {
    let n = x.len();
    if n == 0 || x.iter().all(FieldElement::is_zero) {
        return Err(Error::InvalidArgument("x must be nonzero".into()));
    }
    if c.len() != n {
        return Err(Error::Dimension(format!("expected {} matrices C_i, got {}", n, c.len())));
    }
    let spec = x[0].spec();
    for ci in c {
        if ci.spec() != spec {
            return Err(Error::FieldMismatch(spec, ci.spec()));
        }
        if ci.rows() != n || ci.cols() != n {
            return Err(Error::Dimension("C_i has the wrong size".into()));
        }
    }
    LinearOperator::from_fn(spec, n, |m| {
        let m = if transposed { m.transpose() } else { m.clone() };
        let mut acc = Matrix::zeros(spec, n, n);
        for (i, ci) in c.iter().enumerate() {
            let coeff = (0..n).fold(spec.zero(), |s, j| &s + &(m.get(i, j) * &x[j]));
            if !coeff.is_zero() {
                acc = acc.add(&ci.scale(&coeff)?)?;
            }
        }
        Ok(acc)
    })
}

fn e1(spec: FieldSpec, n: usize) -> Vec<FieldElement> {
    (0..n).map(|i| if i == 0 { spec.one() } else { spec.zero() }).collect()
}

/// A ↦ Σ a_{i1} C_i.
pub fn first_column_operator(c: &[Matrix]) -> Result<LinearOperator> {
    let spec = c.first().ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?.spec();
    op_column_functional(&e1(spec, c.len()), c, false)
}

/// C_{2k−1} = E_{2k−1,1} + E_{2k,2}, C_{2k} = E_{2k,1} − E_{2k−1,2} over Q.
pub fn petrovic_generators(n: usize, spec: FieldSpec) -> Result<Vec<Matrix>> {
    if spec.is_finite() {
        return Err(Error::InvalidArgument("this construction needs an ordered field".into()));
    }
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("n = {} must be even and at least 2", n)));
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n / 2 {
        let (a, b) = (2 * k, 2 * k + 1);
        let mut odd = Matrix::zeros(spec, n, n);
        odd.set(a, 0, spec.one());
        odd.set(b, 1, spec.one());
        let mut even = Matrix::zeros(spec, n, n);
        even.set(b, 0, spec.one());
        even.set(a, 1, -spec.one());
        out.push(odd);
        out.push(even);
    }
    Ok(out)
}

pub fn construct_petrovic(n: usize, spec: FieldSpec) -> Result<LinearOperator> {
    first_column_operator(&petrovic_generators(n, spec)?)
}

/// I, C, …, C^{n−1} for C the companion matrix of f.
pub fn botta_generators(f: &Polynomial) -> Result<Vec<Matrix>> {
    let n = f.degree().unwrap_or(0);
    if n < 2 || !f.is_monic() {
        return Err(Error::InvalidArgument("f must be monic of degree at least 2".into()));
    }
    if f.spec().is_finite() && !f.is_irreducible()? {
        return Err(Error::InvalidArgument("f is reducible".into()));
    }
    let c = companion(f)?;
    let mut out = vec![Matrix::identity(f.spec(), n)];
    for i in 1..n {
        let next = out[i - 1].matmul(&c)?;
        out.push(next);
    }
    Ok(out)
}

pub fn construct_botta(f: &Polynomial) -> Result<LinearOperator> {
    first_column_operator(&botta_generators(f)?)
}

const QUATERNION: [[(usize, i64); 4]; 4] = [
    [(0, 1), (1, 1), (2, 1), (3, 1)],
    [(1, 1), (0, -1), (3, 1), (2, -1)],
    [(2, 1), (3, -1), (0, -1), (1, 1)],
    [(3, 1), (2, 1), (1, -1), (0, -1)],
];

const FANO: [[usize; 3]; 7] = [[1, 2, 3], [1, 4, 5], [1, 7, 6], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 6, 5]];

/// e_a·e_b = sign·e_c for the algebra of dimension d.
fn basis_product(d: usize, a: usize, b: usize) -> (usize, i64) {
    match d {
        2 => match (a, b) {
            (1, 1) => (0, -1),
            _ => (a + b, 1),
        },
        4 => QUATERNION[a][b],
        _ => {
            if a == 0 {
                return (b, 1);
            }
            if b == 0 {
                return (a, 1);
            }
            if a == b {
                return (0, -1);
            }
            for t in FANO {
                for r in 0..3 {
                    let (x, y, z) = (t[r], t[(r + 1) % 3], t[(r + 2) % 3]);
                    if (x, y) == (a, b) {
                        return (z, 1);
                    }
                    if (y, x) == (a, b) {
                        return (z, -1);
                    }
                }
            }
            unreachable!("every pair of imaginary units lies on one line")
        }
    }
}

/// Left-multiplication matrices of the basis of C, H or O (d = 2, 4, 8) over Q.
pub fn construct_division_algebra(d: usize, spec: FieldSpec) -> Result<Vec<Matrix>> {
    if ![2, 4, 8].contains(&d) {
        return Err(Error::InvalidArgument(format!("no real division algebra of dimension {}", d)));
    }
    if spec.is_finite() {
        return Err(Error::InvalidArgument("division-algebra matrices are built over Q".into()));
    }
    Ok((0..d)
        .map(|a| {
            let mut m = Matrix::zeros(spec, d, d);
            for b in 0..d {
                let (c, s) = basis_product(d, a, b);
                m.set(c, b, spec.from_i64(s));
            }
            m
        })
        .collect())
}

/// ```text
/// operator
/// field <token>
/// n <n>
/// <n² lines of n² entries>
/// ```
impl fmt::Display for LinearOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "operator")?;
        writeln!(f, "field {}", self.spec())?;
        writeln!(f, "n {}", self.n)?;
        for i in 0..self.mat.rows() {
            let line: Vec<String> = self.mat.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl LinearOperator {
    /// The `operator-images` form: the images of E_11, E_21, …, E_nn.
    pub fn to_images_string(&self) -> String {
        let mut s = format!("operator-images\nfield {}\nn {}\n", self.spec(), self.n);
        for m in self.images() {
            s.push_str(&m.to_string());
        }
        s
    }
}

fn header<'a>(lines: &mut impl Iterator<Item = &'a str>, key: &str) -> Result<&'a str> {
    let line = lines.find(|l| !l.trim().is_empty()).ok_or_else(|| Error::Parse(format!("missing `{}` line", key)))?;
    line.trim()
        .strip_prefix(key)
        .map(str::trim)
        .ok_or_else(|| Error::Parse(format!("expected `{} ...`, found `{}`", key, line.trim())))
}

impl FromStr for LinearOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().peekable();
        let kind = lines.by_ref().find(|l| !l.trim().is_empty()).map(str::trim);
        let images = match kind {
            Some("operator") => false,
            Some("operator-images") => true,
            _ => return Err(Error::Parse("expected `operator` or `operator-images`".into())),
        };
        let spec: FieldSpec = header(&mut lines, "field ")?.parse()?;
        let n: usize = header(&mut lines, "n ")?.parse().map_err(|_| Error::Parse("bad size".into()))?;
        if n == 0 {
            return Err(Error::Parse("n must be positive".into()));
        }
        let op = if images {
            let mut ms = Vec::with_capacity(n * n);
            for _ in 0..n * n {
                ms.push(Matrix::parse_lines(&mut lines)?);
            }
            LinearOperator::from_images(spec, n, &ms)?
        } else {
            let mut rows = Vec::with_capacity(n * n);
            for _ in 0..n * n {
                let line = lines.by_ref().find(|l| !l.trim().is_empty()).ok_or_else(|| Error::Parse("operator matrix truncated".into()))?;
                let row = line.split_whitespace().map(|t| spec.parse_element(t)).collect::<Result<Vec<_>>>()?;
                if row.len() != n * n {
                    return Err(Error::Parse(format!("expected {} entries, found {}", n * n, row.len())));
                }
                rows.push(row);
            }
            LinearOperator::from_matrix(n, Matrix::from_rows(spec, rows)?)?
        };
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after operator".into()));
        }
        Ok(op)
    }
}
