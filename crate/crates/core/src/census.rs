//! Exhaustive census of every operator on M_n(K) over a tiny finite field,
//! tallying preserver properties and checking the structure theorems.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use crate::error::Result;
use crate::field::FieldSpec;
use crate::green::GreenRelation;
use crate::operator::{op_two_sided, rho_basis};
use crate::verify::{operator_count, operator_from_index, operator_index, Universe};

pub const PROPERTIES: [&str; 15] = [
    "zero",
    "bijective",
    "l",
    "strong-l",
    "bijective-l",
    "r",
    "strong-r",
    "bijective-r",
    "h",
    "strong-h",
    "j",
    "strong-j",
    "invertibility",
    "rank1",
    "l-raising-rank1",
];

pub const CHECKS: [&str; 6] = [
    "strong-l-bijective",
    "bijective-l-two-sided",
    "h-zero-or-invertibility",
    "nonzero-j-bijective",
    "bijective-j-rank1",
    "l-kernel-rho",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub field: FieldSpec,
    pub n: usize,
    pub total: u64,
    pub counts: Vec<(&'static str, u64)>,
    pub checks: Vec<(&'static str, bool)>,
    /// Operator indices having each property, ascending.
    pub members: BTreeMap<&'static str, Vec<u64>>,
}

impl CensusReport {
    pub fn count(&self, name: &str) -> Option<u64> {
        self.counts.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|&(_, ok)| ok)
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "census field {} n {} operators {}", self.field, self.n, self.total)?;
        for (name, c) in &self.counts {
            writeln!(f, "property {} count {}", name, c)?;
        }
        for (name, ok) in &self.checks {
            writeln!(f, "check {} {}", name, if *ok { "pass" } else { "fail" })?;
        }
        Ok(())
    }
}

/// Precomputed tables shared by all operators.
struct Tables {
    q: u64,
    nn: usize,
    size: usize,
    rank: Vec<u8>,
    full: u8,
    labels: [Vec<u32>; 4],
    digits: Vec<Vec<u8>>,
    add: Vec<Vec<u8>>,
    mul: Vec<Vec<u8>>,
}

impl Tables {
    fn new(u: &Universe) -> Result<Tables> {
        let t = u.spec().tables()?;
        let q = t.q as u64;
        let nn = u.n() * u.n();
        let size = u.len();
        let digits = (0..size as u64)
            .map(|mut a| {
                (0..nn)
                    .map(|_| {
                        let d = (a % q) as u8;
                        a /= q;
                        d
                    })
                    .collect()
            })
            .collect();
        let qs = q as u8;
        Ok(Tables {
            q,
            nn,
            size,
            rank: (0..size).map(|i| u.rank(i) as u8).collect(),
            full: u.n() as u8,
            labels: GreenRelation::EQUIVALENCES.map(|r| u.labels(r).id),
            digits,
            add: (0..qs).map(|a| (0..qs).map(|b| t.add(a, b)).collect()).collect(),
            mul: (0..qs).map(|a| (0..qs).map(|b| t.mul(a, b)).collect()).collect(),
        })
    }

    fn encode(&self, d: &[u8]) -> u32 {
        d.iter().rev().fold(0u64, |acc, &x| acc * self.q + x as u64) as u32
    }

    /// Indices of T(A) for every A, by linearity from the basis images.
    fn images(&self, index: u64, img: &mut [u32]) {
        let size = self.size as u64;
        let basis: Vec<&Vec<u8>> = (0..self.nn).map(|k| &self.digits[((index / size.pow(k as u32)) % size) as usize]).collect();
        let mut acc = vec![0u8; self.nn];
        for (a, slot) in img.iter_mut().enumerate() {
            acc.iter_mut().for_each(|x| *x = 0);
            for (k, &c) in self.digits[a].iter().enumerate() {
                if c != 0 {
                    for (x, &b) in acc.iter_mut().zip(basis[k]) {
                        *x = self.add[*x as usize][self.mul[c as usize][b as usize] as usize];
                    }
                }
            }
            *slot = self.encode(&acc);
        }
    }
}

fn weak(labels: &[u32], img: &[u32], scratch: &mut [u32]) -> bool {
    scratch.iter_mut().for_each(|x| *x = u32::MAX);
    for (a, &l) in labels.iter().enumerate() {
        let t = labels[img[a] as usize];
        let slot = &mut scratch[l as usize];
        if *slot == u32::MAX {
            *slot = t;
        } else if *slot != t {
            return false;
        }
    }
    true
}

fn strong(labels: &[u32], img: &[u32], scratch: &mut [u32]) -> bool {
    if !weak(labels, img, scratch) {
        return false;
    }
    let mut back = vec![u32::MAX; scratch.len()];
    for (a, &l) in labels.iter().enumerate() {
        let slot = &mut back[labels[img[a] as usize] as usize];
        if *slot == u32::MAX {
            *slot = l;
        } else if *slot != l {
            return false;
        }
    }
    true
}

#[derive(Default)]
struct Partial {
    members: BTreeMap<&'static str, Vec<u64>>,
}

fn scan(tables: &Tables, range: Range<u64>) -> Partial {
    let mut out = Partial::default();
    for name in PROPERTIES {
        out.members.insert(name, Vec::new());
    }
    let mut img = vec![0u32; tables.size];
    let mut seen = vec![false; tables.size];
    let mut scratch = vec![0u32; tables.size];
    let maps_set = |img: &[u32], pred: &dyn Fn(u8) -> bool| (0..tables.size).all(|a| !pred(tables.rank[a]) || pred(tables.rank[img[a] as usize]));
    for index in range {
        tables.images(index, &mut img);
        seen.iter_mut().for_each(|x| *x = false);
        let mut bijective = true;
        for &i in &img {
            if std::mem::replace(&mut seen[i as usize], true) {
                bijective = false;
                break;
            }
        }
        let [ll, rl, hl, jl] = &tables.labels;
        let l = weak(ll, &img, &mut scratch);
        let r = weak(rl, &img, &mut scratch);
        let mut push = |name: &'static str, cond: bool| {
            if cond {
                out.members.get_mut(name).unwrap().push(index);
            }
        };
        push("zero", index == 0);
        push("bijective", bijective);
        push("l", l);
        push("strong-l", l && strong(ll, &img, &mut scratch));
        push("bijective-l", l && bijective);
        push("r", r);
        push("strong-r", r && strong(rl, &img, &mut scratch));
        push("bijective-r", r && bijective);
        let h = weak(hl, &img, &mut scratch);
        push("h", h);
        push("strong-h", h && strong(hl, &img, &mut scratch));
        let j = weak(jl, &img, &mut scratch);
        push("j", j);
        push("strong-j", j && strong(jl, &img, &mut scratch));
        push("invertibility", maps_set(&img, &|r| r == tables.full));
        push("rank1", maps_set(&img, &|r| r == 1));
        push("l-raising-rank1", l && (0..tables.size).any(|a| tables.rank[a] == 1 && tables.rank[img[a] as usize] >= 2));
    }
    out
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Runs the census over `workers` contiguous ranges of the operator order.
pub fn census_with(spec: FieldSpec, n: usize, workers: usize) -> Result<CensusReport> {
    let total = operator_count(spec, n)?;
    let u = Universe::new(spec, n)?;
    let tables = Tables::new(&u)?;
    let workers = workers.clamp(1, total as usize);
    let chunk = total.div_ceil(workers as u64);
    let ranges: Vec<Range<u64>> = (0..workers as u64).map(|w| (w * chunk).min(total)..((w + 1) * chunk).min(total)).collect();
    let partials: Vec<Partial> = std::thread::scope(|s| {
        let handles: Vec<_> = ranges.into_iter().map(|r| s.spawn(|| scan(&tables, r))).collect();
        handles.into_iter().map(|h| h.join().expect("census worker panicked")).collect()
    });
    let mut members: BTreeMap<&'static str, Vec<u64>> = BTreeMap::new();
    for p in partials {
        for (k, v) in p.members {
            members.entry(k).or_default().extend(v);
        }
    }
    let m = |k: &str| members[k].as_slice();

    let gl: Vec<usize> = (0..u.len()).filter(|&i| u.rank(i) == n).collect();
    let mut two_sided = Vec::new();
    for &p in &gl {
        for &q in &gl {
            two_sided.push(operator_index(&op_two_sided(u.matrix(p), u.matrix(q), false)?)?);
        }
    }
    two_sided.sort_unstable();
    two_sided.dedup();

    let mut zero_or_inv: Vec<u64> = m("invertibility").to_vec();
    if !zero_or_inv.contains(&0) {
        zero_or_inv.insert(0, 0);
    }
    let nonzero_j: Vec<u64> = m("j").iter().copied().filter(|&i| i != 0).collect();
    let bijective_j: Vec<u64> = m("j").iter().copied().filter(|i| m("bijective").binary_search(i).is_ok()).collect();
    let mut kernel_rho = true;
    for &i in m("l") {
        let t = operator_from_index(spec, n, i)?;
        if rho_basis(&t.kernel_row_space()) != t.kernel() {
            kernel_rho = false;
            break;
        }
    }
    let checks = vec![
        ("strong-l-bijective", subset(m("strong-l"), m("bijective"))),
        ("bijective-l-two-sided", m("bijective-l") == two_sided.as_slice()),
        ("h-zero-or-invertibility", m("h") == zero_or_inv.as_slice()),
        ("nonzero-j-bijective", subset(&nonzero_j, m("bijective"))),
        ("bijective-j-rank1", subset(&bijective_j, m("rank1"))),
        ("l-kernel-rho", kernel_rho),
    ];
    let counts = PROPERTIES.iter().map(|&k| (k, members[k].len() as u64)).collect();
    Ok(CensusReport { field: spec, n, total, counts, checks, members })
}

pub fn census(spec: FieldSpec, n: usize) -> Result<CensusReport> {
    let workers = std::thread::available_parallelism().map_or(1, |p| p.get());
    census_with(spec, n, workers)
}
