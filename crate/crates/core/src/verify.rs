//! Deciding whether an operator preserves a Green relation or a set of
//! matrices, exhaustively over small finite fields or by seeded sampling.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::green::{enumerate_matrices, matrix_index, rank_factorization, GreenRelation};
use crate::matrix::{Matrix, Subspace};
use crate::operator::{unvec, LinearOperator};
use crate::sampling::{Sampler, DEFAULT_BOUND};

/// Enumeration guard for operators: at most 2^24.
pub const OPERATOR_ENUMERATION_LIMIT: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    Sampled { trials: usize, seed: u64, bound: u64 },
}

impl Strategy {
    pub fn sampled(trials: usize, seed: u64) -> Strategy {
        Strategy::Sampled { trials, seed, bound: DEFAULT_BOUND }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Exhaustive => f.write_str("exhaustive"),
            Strategy::Sampled { trials, seed, bound } => write!(f, "sampled trials {} seed {} bound {}", trials, seed, bound),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// For relations a pair (A, B); for sets (A, T(A)).
    pub witness: Option<(Matrix, Matrix)>,
    pub checked: u64,
    pub strategy: Strategy,
}

impl Verdict {
    fn pass(checked: u64, strategy: Strategy) -> Verdict {
        Verdict { holds: true, witness: None, checked, strategy }
    }

    fn fail(a: Matrix, b: Matrix, checked: u64, strategy: Strategy) -> Verdict {
        Verdict { holds: false, witness: Some((a, b)), checked, strategy }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixSet {
    Rank1,
    Invertible,
}

impl MatrixSet {
    pub fn contains(self, m: &Matrix) -> bool {
        match self {
            MatrixSet::Rank1 => m.rank() == 1,
            MatrixSet::Invertible => m.rank() == m.rows(),
        }
    }
}

impl std::str::FromStr for MatrixSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rank1" => Ok(MatrixSet::Rank1),
            "invertible" => Ok(MatrixSet::Invertible),
            _ => Err(Error::Parse(format!("unknown matrix set `{}`", s))),
        }
    }
}

/// Every matrix of M_n(K) over a small finite field with its row space,
/// column space and rank, interned as small integers.
pub struct Universe {
    spec: FieldSpec,
    n: usize,
    matrices: Vec<Matrix>,
    row_id: Vec<u32>,
    col_id: Vec<u32>,
    rank: Vec<u8>,
    row_leq: Vec<Vec<bool>>,
    col_leq: Vec<Vec<bool>>,
}

fn intern(spaces: &mut Vec<Subspace>, index: &mut HashMap<Subspace, u32>, s: Subspace) -> u32 {
    *index.entry(s.clone()).or_insert_with(|| {
        spaces.push(s);
        spaces.len() as u32 - 1
    })
}

fn containment(spaces: &[Subspace]) -> Vec<Vec<bool>> {
    spaces.iter().map(|a| spaces.iter().map(|b| a.is_subspace_of(b)).collect()).collect()
}

impl Universe {
    pub fn new(spec: FieldSpec, n: usize) -> Result<Universe> {
        let matrices: Vec<Matrix> = enumerate_matrices(spec, n)?.collect();
        let (mut rows, mut cols) = (Vec::new(), Vec::new());
        let (mut ri, mut ci) = (HashMap::new(), HashMap::new());
        let mut row_id = Vec::with_capacity(matrices.len());
        let mut col_id = Vec::with_capacity(matrices.len());
        let mut rank = Vec::with_capacity(matrices.len());
        for m in &matrices {
            let rs = m.row_space();
            rank.push(rs.dim() as u8);
            row_id.push(intern(&mut rows, &mut ri, rs));
            col_id.push(intern(&mut cols, &mut ci, m.col_space()));
        }
        Ok(Universe { spec, n, row_leq: containment(&rows), col_leq: containment(&cols), matrices, row_id, col_id, rank })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrix(&self, i: usize) -> &Matrix {
        &self.matrices[i]
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i] as usize
    }

    /// Whether matrices i and j stand in `rel`.
    pub fn related(&self, rel: GreenRelation, i: usize, j: usize) -> bool {
        use GreenRelation::*;
        match rel {
            L => self.row_id[i] == self.row_id[j],
            R => self.col_id[i] == self.col_id[j],
            H => self.row_id[i] == self.row_id[j] && self.col_id[i] == self.col_id[j],
            J => self.rank[i] == self.rank[j],
            LeqL => self.row_leq[self.row_id[i] as usize][self.row_id[j] as usize],
            LeqR => self.col_leq[self.col_id[i] as usize][self.col_id[j] as usize],
            LeqH => self.related(LeqL, i, j) && self.related(LeqR, i, j),
            LeqJ => self.rank[i] <= self.rank[j],
        }
    }

    /// Dense class ids for `rel` (for a pre-order, of its equivalence) with
    /// the relation between ids.
    pub fn labels(&self, rel: GreenRelation) -> Labels {
        let eq = rel.equivalence();
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut reps = Vec::new();
        let id: Vec<u32> = (0..self.len())
            .map(|i| {
                let key = match eq {
                    GreenRelation::L => (self.row_id[i], 0),
                    GreenRelation::R => (self.col_id[i], 0),
                    GreenRelation::H => (self.row_id[i], self.col_id[i]),
                    _ => (self.rank[i] as u32, 0),
                };
                *index.entry(key).or_insert_with(|| {
                    reps.push(i);
                    reps.len() as u32 - 1
                })
            })
            .collect();
        let m = reps.len();
        let table = (0..m).map(|a| (0..m).map(|b| self.related(rel, reps[a], reps[b])).collect()).collect();
        let mut members = vec![Vec::new(); m];
        for (i, &l) in id.iter().enumerate() {
            members[l as usize].push(i as u32);
        }
        Labels { id, table, members }
    }

    /// Indices of T(A) for every A.
    pub fn images(&self, t: &LinearOperator) -> Result<Vec<u32>> {
        if t.spec() != self.spec || t.n() != self.n {
            return Err(Error::InvalidArgument("operator does not act on this universe".into()));
        }
        self.matrices.iter().map(|m| Ok(matrix_index(&t.apply(m)?)? as u32)).collect()
    }
}

pub struct Labels {
    pub id: Vec<u32>,
    pub table: Vec<Vec<bool>>,
    pub members: Vec<Vec<u32>>,
}

impl Labels {
    fn related(&self, i: usize, j: usize) -> bool {
        self.table[self.id[i] as usize][self.id[j] as usize]
    }
}

fn exhaustive_weak(u: &Universe, img: &[u32], rel: GreenRelation) -> Verdict {
    let lab = u.labels(rel);
    let m = lab.members.len();
    // image labels reached from each class
    let mut reach = vec![vec![false; m]; m];
    for (b, &l) in lab.id.iter().enumerate() {
        reach[l as usize][lab.id[img[b] as usize] as usize] = true;
    }
    let mut checked = 0u64;
    for a in 0..u.len() {
        let la = lab.id[a] as usize;
        let lta = lab.id[img[a] as usize] as usize;
        let fails = (0..m).any(|kb| lab.table[la][kb] && (0..m).any(|x| reach[kb][x] && !lab.table[lta][x]));
        if !fails {
            checked += (0..m).filter(|&kb| lab.table[la][kb]).map(|kb| lab.members[kb].len() as u64).sum::<u64>();
            continue;
        }
        for b in 0..u.len() {
            if lab.related(a, b) {
                checked += 1;
                if !lab.related(img[a] as usize, img[b] as usize) {
                    return Verdict::fail(u.matrix(a).clone(), u.matrix(b).clone(), checked, Strategy::Exhaustive);
                }
            }
        }
        unreachable!("a failing class contains a failing partner");
    }
    Verdict::pass(checked, Strategy::Exhaustive)
}

fn exhaustive_strong(u: &Universe, img: &[u32], rel: GreenRelation) -> Verdict {
    let lab = u.labels(rel);
    let m = lab.members.len();
    // source labels meeting each image label
    let mut sources: Vec<Vec<u32>> = vec![Vec::new(); m];
    let mut targets: Vec<Vec<u32>> = vec![Vec::new(); m];
    for (b, &l) in lab.id.iter().enumerate() {
        let t = lab.id[img[b] as usize];
        if !sources[t as usize].contains(&l) {
            sources[t as usize].push(l);
        }
        if !targets[l as usize].contains(&t) {
            targets[l as usize].push(t);
        }
    }
    let n = u.len() as u64;
    for a in 0..u.len() {
        let la = lab.id[a];
        let lta = lab.id[img[a] as usize];
        if targets[la as usize].len() == 1 && sources[lta as usize].len() == 1 {
            continue;
        }
        for b in 0..u.len() {
            if lab.related(a, b) != lab.related(img[a] as usize, img[b] as usize) {
                return Verdict::fail(u.matrix(a).clone(), u.matrix(b).clone(), a as u64 * n + b as u64 + 1, Strategy::Exhaustive);
            }
        }
    }
    Verdict::pass(n * n, Strategy::Exhaustive)
}

/// Related pair generator: returns A with A rel `base`.
pub fn related_partner(rel: GreenRelation, base: &Matrix, s: &mut Sampler) -> Result<Matrix> {
    use GreenRelation::*;
    let n = base.rows();
    Ok(match rel {
        L => s.invertible(n).matmul(base)?,
        LeqL => s.matrix(n, n).matmul(base)?,
        R => base.matmul(&s.invertible(n))?,
        LeqR => base.matmul(&s.matrix(n, n))?,
        J => s.invertible(n).matmul(base)?.matmul(&s.invertible(n))?,
        LeqJ => s.matrix(n, n).matmul(base)?.matmul(&s.matrix(n, n))?,
        H | LeqH => {
            let (p, q, r) = rank_factorization(base)?;
            let g = if r == 0 {
                Matrix::zeros(s.spec(), 1, 1)
            } else if rel == H {
                s.invertible(r)
            } else {
                s.matrix(r, r)
            };
            let core = Matrix::from_fn(s.spec(), n, n, |i, j| if i < r && j < r { g.get(i, j).clone() } else { s.spec().zero() });
            p.matmul(&core)?.matmul(&q)?
        }
    })
}

fn sampled_weak(t: &LinearOperator, rel: GreenRelation, strategy: Strategy, trials: usize, seed: u64, bound: u64) -> Result<Verdict> {
    let mut s = Sampler::new(t.spec(), seed, bound);
    let n = t.n();
    for k in 0..trials {
        let b = s.any_rank_matrix(n);
        let a = related_partner(rel, &b, &mut s)?;
        if !rel.holds(&t.apply(&a)?, &t.apply(&b)?)? {
            return Ok(Verdict::fail(a, b, k as u64 + 1, strategy));
        }
    }
    Ok(Verdict::pass(trials as u64, strategy))
}

/// Backward direction: pairs (A, B) with T(A) rel T(B), built by pulling a
/// partner of T(A) back through T and adding a random kernel element.
fn sampled_backward(t: &LinearOperator, rel: GreenRelation, strategy: Strategy, trials: usize, seed: u64, bound: u64) -> Result<Verdict> {
    let mut s = Sampler::new(t.spec(), seed ^ 0x9e37_79b9_7f4a_7c15, bound);
    let n = t.n();
    let kernel = t.kernel().basis_vectors();
    for k in 0..trials {
        let a = s.any_rank_matrix(n);
        let ta = t.apply(&a)?;
        let c = related_partner(rel, &ta, &mut s)?;
        let pre = match t.matrix().solve_right(&crate::operator::vec(&c)) {
            Some(v) => unvec(t.spec(), n, &v),
            None => a.clone(),
        };
        let mut b = pre;
        for kv in &kernel {
            let coeff = s.element();
            b = b.add(&unvec(t.spec(), n, kv).scale(&coeff)?)?;
        }
        if !rel.holds(&t.apply(&a)?, &t.apply(&b)?)? {
            continue;
        }
        if !rel.holds(&a, &b)? {
            return Ok(Verdict::fail(a, b, k as u64 + 1, strategy));
        }
    }
    Ok(Verdict::pass(trials as u64, strategy))
}

/// A rel B ⟹ T(A) rel T(B).
pub fn preserves(t: &LinearOperator, rel: GreenRelation, strategy: Strategy) -> Result<Verdict> {
    match strategy {
        Strategy::Exhaustive => {
            let u = Universe::new(t.spec(), t.n())?;
            let img = u.images(t)?;
            Ok(exhaustive_weak(&u, &img, rel))
        }
        Strategy::Sampled { trials, seed, bound } => sampled_weak(t, rel, strategy, trials, seed, bound),
    }
}

/// Exhaustive check against a prebuilt universe.
pub fn preserves_in(u: &Universe, t: &LinearOperator, rel: GreenRelation) -> Result<Verdict> {
    Ok(exhaustive_weak(u, &u.images(t)?, rel))
}

/// A rel B ⟺ T(A) rel T(B), for an equivalence.
pub fn strongly_preserves(t: &LinearOperator, rel: GreenRelation, strategy: Strategy) -> Result<Verdict> {
    if !rel.is_equivalence() {
        return Err(Error::InvalidArgument(format!("strong preservation needs an equivalence, got {}", rel)));
    }
    match strategy {
        Strategy::Exhaustive => {
            let u = Universe::new(t.spec(), t.n())?;
            let img = u.images(t)?;
            Ok(exhaustive_strong(&u, &img, rel))
        }
        Strategy::Sampled { trials, seed, bound } => {
            let fwd = sampled_weak(t, rel, strategy, trials, seed, bound)?;
            if !fwd.holds {
                return Ok(fwd);
            }
            let mut back = sampled_backward(t, rel, strategy, trials, seed, bound)?;
            back.checked += fwd.checked;
            Ok(back)
        }
    }
}

/// A ∈ set ⟹ T(A) ∈ set.
pub fn preserves_set(t: &LinearOperator, which: MatrixSet, strategy: Strategy) -> Result<Verdict> {
    let mut checked = 0;
    let mut check = |a: Matrix| -> Result<Option<Verdict>> {
        checked += 1;
        let ta = t.apply(&a)?;
        Ok((!which.contains(&ta)).then(|| Verdict::fail(a, ta, checked, strategy)))
    };
    match strategy {
        Strategy::Exhaustive => {
            for a in enumerate_matrices(t.spec(), t.n())? {
                if which.contains(&a) {
                    if let Some(v) = check(a)? {
                        return Ok(v);
                    }
                }
            }
        }
        Strategy::Sampled { trials, seed, bound } => {
            let mut s = Sampler::new(t.spec(), seed, bound);
            for _ in 0..trials {
                let a = match which {
                    MatrixSet::Rank1 => s.rank1(t.n()),
                    MatrixSet::Invertible => s.invertible(t.n()),
                };
                if let Some(v) = check(a)? {
                    return Ok(v);
                }
            }
        }
    }
    Ok(Verdict::pass(checked, strategy))
}

/// Number of operators on M_n(K), checked against the guard.
pub fn operator_count(spec: FieldSpec, n: usize) -> Result<u64> {
    let q = spec.order().ok_or(Error::InfiniteField("operator enumeration"))?;
    q.checked_pow((n * n * n * n) as u32)
        .filter(|&c| c <= OPERATOR_ENUMERATION_LIMIT)
        .ok_or_else(|| Error::Infeasible(format!("{}^{} operators exceeds 2^24", q, n * n * n * n)))
}

/// The operator whose n²×n² matrix has the base-q digits of `index`,
/// least significant first, in column-major order.
pub fn operator_from_index(spec: FieldSpec, n: usize, mut index: u64) -> Result<LinearOperator> {
    let q = spec.order().ok_or(Error::InfiniteField("operator enumeration"))?;
    let nn = n * n;
    let mut m = Matrix::zeros(spec, nn, nn);
    for k in 0..nn * nn {
        m.set(k % nn, k / nn, spec.element(index % q)?);
        index /= q;
    }
    if index != 0 {
        return Err(Error::InvalidArgument("operator index out of range".into()));
    }
    LinearOperator::from_matrix(n, m)
}

pub fn operator_index(t: &LinearOperator) -> Result<u64> {
    let q = t.spec().order().ok_or(Error::InfiniteField("operator enumeration"))?;
    let nn = t.n() * t.n();
    let mut index = 0u64;
    for k in (0..nn * nn).rev() {
        index = index * q + t.matrix().get(k % nn, k / nn).code().unwrap();
    }
    Ok(index)
}

pub fn enumerate_operators(spec: FieldSpec, n: usize) -> Result<impl Iterator<Item = LinearOperator>> {
    let total = operator_count(spec, n)?;
    Ok((0..total).map(move |i| operator_from_index(spec, n, i).expect("index in range")))
}
