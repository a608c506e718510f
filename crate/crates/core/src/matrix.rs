//! Dense exact matrices, Gauss-Jordan elimination and canonical subspaces.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// A dense rectangular matrix over a [`FieldSpec`], stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { spec, rows, cols, data: vec![spec.zero(); rows * cols] }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(spec, n, n);
        for i in 0..n {
            m.data[i * n + i] = spec.one();
        }
        m
    }

    /// The matrix unit E_{ij} (0-based indices).
    pub fn unit(spec: FieldSpec, n: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(spec, n, n);
        m.data[i * n + j] = spec.one();
        m
    }

    pub fn from_rows(spec: FieldSpec, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for e in row {
                if e.spec() != spec {
                    return Err(Error::FieldMismatch(spec, e.spec()));
                }
                data.push(e);
            }
        }
        Ok(Matrix { spec, rows: r, cols: c, data })
    }

    /// Builds a matrix from integer literals mapped into `spec`.
    pub fn from_ints<R: AsRef<[i64]>>(spec: FieldSpec, rows: &[R]) -> Self {
        let rows: Vec<Vec<FieldElement>> =
            rows.iter().map(|r| r.as_ref().iter().map(|&v| spec.from_i64(v)).collect()).collect();
        Matrix::from_rows(spec, rows).expect("rectangular literal")
    }

    pub fn from_fn(spec: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { spec, rows, cols, data }
    }

    /// 1×n matrix holding a row vector.
    pub fn row_vector(spec: FieldSpec, v: &[FieldElement]) -> Self {
        Matrix { spec, rows: 1, cols: v.len(), data: v.to_vec() }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        assert_eq!(v.spec(), self.spec, "field mismatch");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch(self.spec, other.spec));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(self.with_data(data))
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Matrix> {
        if c.spec() != self.spec {
            return Err(Error::FieldMismatch(self.spec, c.spec()));
        }
        let data = self.data.iter().map(|a| a * c).collect();
        Ok(self.with_data(data))
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|a| -a).collect();
        self.with_data(data)
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch(self.spec, other.spec));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.spec, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.spec, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn with_data(&self, data: Vec<FieldElement>) -> Matrix {
        Matrix { spec: self.spec, rows: self.rows, cols: self.cols, data }
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols || self.spec != other.spec {
            return Err(Error::Dimension("vstack needs equal column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { spec: self.spec, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Gauss-Jordan elimination. The pivot of each column is the first
    /// nonzero entry at or below the current row.
    pub fn rref(&self) -> RrefResult {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut t = Matrix::identity(self.spec, m);
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == m {
                break;
            }
            let Some(p) = (row..m).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            a.swap_rows(row, p);
            t.swap_rows(row, p);
            let inv = a.get(row, col).inv().expect("nonzero pivot");
            a.scale_row(row, &inv);
            t.scale_row(row, &inv);
            for i in 0..m {
                if i != row && !a.get(i, col).is_zero() {
                    let f = -a.get(i, col);
                    a.add_row_multiple(i, row, &f);
                    t.add_row_multiple(i, row, &f);
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        RrefResult { rank: pivot_cols.len(), rref: a, pivot_cols, transform: t }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: &FieldElement) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = &self.data[idx] * c;
        }
    }

    // row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &FieldElement) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = &self.data[dst * self.cols + j] + &(s * c);
                self.data[dst * self.cols + j] = v;
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::from_rref(&self.rref().rref)
    }

    pub fn col_space(&self) -> Subspace {
        self.transpose().row_space()
    }

    /// Right null space {x : M·xᵀ = 0} as a subspace of K^cols.
    pub fn kernel_basis(&self) -> Subspace {
        let r = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !r.pivot_cols.contains(c)).collect();
        let vectors: Vec<Vec<FieldElement>> = free
            .iter()
            .map(|&f| {
                let mut x = vec![self.spec.zero(); self.cols];
                x[f] = self.spec.one();
                for (k, &p) in r.pivot_cols.iter().enumerate() {
                    x[p] = -r.rref.get(k, f);
                }
                x
            })
            .collect();
        Subspace::span(self.spec, self.cols, &vectors)
    }

    /// Some x with M·x = b, free variables set to zero; `None` if the
    /// system is inconsistent.
    pub fn solve_right(&self, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(b.len(), self.rows);
        let r = self.rref();
        let eb: Vec<FieldElement> = (0..self.rows)
            .map(|i| {
                r.transform
                    .row(i)
                    .iter()
                    .zip(b)
                    .fold(self.spec.zero(), |acc, (t, v)| &acc + &(t * v))
            })
            .collect();
        if eb[r.rank..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![self.spec.zero(); self.cols];
        for (k, &p) in r.pivot_cols.iter().enumerate() {
            x[p] = eb[k].clone();
        }
        Some(x)
    }

    pub fn is_invertible(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::Dimension("invertibility of a non-square matrix".into()));
        }
        Ok(self.rank() == self.rows)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_invertible()? {
            return Err(Error::Singular);
        }
        Ok(self.rref().transform)
    }

    /// Determinant by elimination.
    pub fn determinant(&self) -> Result<FieldElement> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.spec.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a.get(i, col).is_zero()) else {
                return Ok(self.spec.zero());
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let piv = a.get(col, col).clone();
            det = &det * &piv;
            let inv = piv.inv()?;
            for i in col + 1..n {
                if !a.get(i, col).is_zero() {
                    let f = -(a.get(i, col) * &inv);
                    a.add_row_multiple(i, col, &f);
                }
            }
        }
        Ok(det)
    }

    /// First nonzero entry in row-major order.
    pub fn leading_entry(&self) -> Option<&FieldElement> {
        self.data.iter().find(|e| !e.is_zero())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElement;

    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        self.get(i, j)
    }
}

/// Some S with S·B = A (free variables zero), or `None` when
/// Row(A) ⊄ Row(B).
pub fn solve_left(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    if a.spec != b.spec {
        return Err(Error::FieldMismatch(a.spec, b.spec));
    }
    if a.cols != b.cols {
        return Err(Error::Dimension("solve_left needs equal column counts".into()));
    }
    // S·B = A  ⟺  Bᵀ·(row i of S)ᵀ = (row i of A)ᵀ
    let bt = b.transpose();
    let mut rows = Vec::with_capacity(a.rows);
    for i in 0..a.rows {
        match bt.solve_right(a.row(i)) {
            Some(s) => rows.push(s),
            None => return Ok(None),
        }
    }
    if a.rows == 0 {
        return Ok(Some(Matrix::zeros(a.spec, 0, b.rows)));
    }
    Matrix::from_rows(a.spec, rows).map(Some)
}

/// Partial identity diag(1,…,1,0,…,0) with r ones.
pub fn partial_identity(spec: FieldSpec, n: usize, r: usize) -> Result<Matrix> {
    if r > n {
        return Err(Error::InvalidArgument(format!("partial identity rank {} exceeds {}", r, n)));
    }
    let mut m = Matrix::zeros(spec, n, n);
    for i in 0..r {
        m.set(i, i, spec.one());
    }
    Ok(m)
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug)]
pub struct RrefResult {
    pub rref: Matrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    /// Invertible, with `transform · input = rref`.
    pub transform: Matrix,
}

/// A subspace of K^m held by its reduced row-echelon basis, so equal
/// subspaces have identical bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    fn from_rref(rref: &Matrix) -> Subspace {
        let nonzero = (0..rref.rows).take_while(|&i| rref.row(i).iter().any(|e| !e.is_zero())).count();
        let basis = Matrix {
            spec: rref.spec,
            rows: nonzero,
            cols: rref.cols,
            data: rref.data[..nonzero * rref.cols].to_vec(),
        };
        Subspace { ambient: rref.cols, basis }
    }

    pub fn span(spec: FieldSpec, ambient: usize, vectors: &[Vec<FieldElement>]) -> Subspace {
        if vectors.is_empty() {
            return Subspace::zero(spec, ambient);
        }
        let data: Vec<FieldElement> = vectors.iter().flat_map(|v| v.iter().cloned()).collect();
        let m = Matrix { spec, rows: vectors.len(), cols: ambient, data };
        assert_eq!(m.data.len(), m.rows * m.cols, "vector length must equal ambient dimension");
        m.row_space()
    }

    pub fn zero(spec: FieldSpec, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::zeros(spec, 0, ambient) }
    }

    pub fn full(spec: FieldSpec, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::identity(spec, ambient) }
    }

    pub fn spec(&self) -> FieldSpec {
        self.basis.spec
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    /// Basis rows as a `dim × ambient` matrix.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<FieldElement>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut vs = self.basis_vectors();
        vs.push(v.to_vec());
        Subspace::span(self.spec(), self.ambient, &vs).dim() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::span(self.spec(), self.ambient, &vs)
    }

    /// Extends to the whole space by greedily adding standard basis vectors
    /// in index order; returns the added vectors.
    pub fn greedy_complement(&self) -> Vec<Vec<FieldElement>> {
        let spec = self.spec();
        let mut current = self.clone();
        let mut added = Vec::new();
        for i in 0..self.ambient {
            let mut e = vec![spec.zero(); self.ambient];
            e[i] = spec.one();
            if !current.contains(&e) {
                current = current.sum(&Subspace::span(spec, self.ambient, &[e.clone()]));
                added.push(e);
            }
        }
        added
    }
}

/// Polynomial over a field, coefficients listed from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn new(spec: FieldSpec, mut coeffs: Vec<FieldElement>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| c.spec() != spec) {
            return Err(Error::FieldMismatch(spec, c.spec()));
        }
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Ok(Polynomial { spec, coeffs })
    }

    pub fn from_ints(spec: FieldSpec, coeffs: &[i64]) -> Self {
        Polynomial::new(spec, coeffs.iter().map(|&c| spec.from_i64(c)).collect()).unwrap()
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(FieldElement::is_one)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(self.spec.zero(), |acc, c| &(&acc * x) + c)
    }

    /// Evaluates at a square matrix (Horner).
    pub fn eval_matrix(&self, m: &Matrix) -> Result<Matrix> {
        let n = m.rows;
        let mut acc = Matrix::zeros(self.spec, n, n);
        let id = Matrix::identity(self.spec, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.matmul(m)?.add(&id.scale(c)?)?;
        }
        Ok(acc)
    }

    /// Remainder of division by a monic divisor.
    pub fn rem_monic(&self, divisor: &Polynomial) -> Polynomial {
        assert!(divisor.is_monic());
        let d = divisor.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let lead = r.pop().unwrap();
            if !lead.is_zero() {
                let shift = r.len() - d;
                for (k, c) in divisor.coeffs[..d].iter().enumerate() {
                    r[shift + k] = &r[shift + k] - &(&lead * c);
                }
            }
        }
        Polynomial::new(self.spec, r).unwrap()
    }

    /// Irreducibility over a finite field by trial division with every
    /// monic polynomial of degree up to half the degree.
    pub fn is_irreducible(&self) -> Result<bool> {
        let q = self.spec.order().ok_or(Error::InfiniteField("irreducibility test"))?;
        let Some(deg) = self.degree() else { return Ok(false) };
        if deg == 0 {
            return Ok(false);
        }
        let elems = self.spec.elements()?;
        for d in 1..=deg / 2 {
            let count = q.checked_pow(d as u32).filter(|&c| c <= 1 << 24).ok_or_else(|| {
                Error::Infeasible(format!("trial division by {}^{} polynomials", q, d))
            })?;
            for idx in 0..count {
                let mut coeffs = Vec::with_capacity(d + 1);
                let mut rest = idx;
                for _ in 0..d {
                    coeffs.push(elems[(rest % q) as usize].clone());
                    rest /= q;
                }
                coeffs.push(self.spec.one());
                let divisor = Polynomial::new(self.spec, coeffs)?;
                if self.rem_monic(&divisor).degree().is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Companion matrix: ones on the subdiagonal, last column the negated
/// low-order coefficients. Its characteristic and minimal polynomial is `f`.
pub fn companion(f: &Polynomial) -> Result<Matrix> {
    let deg = f.degree().unwrap_or(0);
    if deg < 1 {
        return Err(Error::InvalidArgument("companion needs degree at least 1".into()));
    }
    if !f.is_monic() {
        return Err(Error::InvalidArgument("companion needs a monic polynomial".into()));
    }
    let spec = f.spec;
    let mut c = Matrix::zeros(spec, deg, deg);
    for i in 1..deg {
        c.set(i, i - 1, spec.one());
    }
    for i in 0..deg {
        c.set(i, deg - 1, -&f.coeffs[i]);
    }
    Ok(c)
}

/// Matrix text format:
/// ```text
/// field <token>
/// rows <r> cols <c>
/// <entries separated by single spaces, one line per row>
/// ```
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {}", self.spec)?;
        writeln!(f, "rows {} cols {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    /// Parses one matrix from the front of `lines`, consuming its lines.
    pub fn parse_lines<'a, I: Iterator<Item = &'a str>>(lines: &mut std::iter::Peekable<I>) -> Result<Matrix> {
        let mut next = || {
            lines
                .by_ref()
                .find(|l| !l.trim().is_empty())
                .ok_or_else(|| Error::Parse("unexpected end of matrix".into()))
        };
        let spec: FieldSpec = next()?
            .trim()
            .strip_prefix("field ")
            .ok_or_else(|| Error::Parse("expected `field <token>`".into()))?
            .trim()
            .parse()?;
        let dims: Vec<&str> = next()?.split_whitespace().collect();
        let (rows, cols) = match dims.as_slice() {
            ["rows", r, "cols", c] => (
                r.parse::<usize>().map_err(|_| Error::Parse("bad row count".into()))?,
                c.parse::<usize>().map_err(|_| Error::Parse("bad column count".into()))?,
            ),
            _ => return Err(Error::Parse("expected `rows <r> cols <c>`".into())),
        };
        if rows == 0 || cols == 0 {
            return Err(Error::Parse("matrix dimensions must be positive".into()));
        }
        let mut out = Vec::with_capacity(rows);
        for _ in 0..rows {
            let row = next()?
                .split_whitespace()
                .map(|t| spec.parse_element(t))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != cols {
                return Err(Error::Parse(format!("expected {} entries, found {}", cols, row.len())));
            }
            out.push(row);
        }
        Matrix::from_rows(spec, out)
    }
}

impl std::str::FromStr for Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Matrix> {
        let mut lines = s.lines().peekable();
        let m = Matrix::parse_lines(&mut lines)?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after matrix".into()));
        }
        Ok(m)
    }
}
