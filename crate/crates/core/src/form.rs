//! Canonical forms of preservers and their text serialization.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::Matrix;
use crate::operator::{op_column_functional, op_regular, op_two_sided, LinearOperator, Side};

/// Why a classification step gave up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExoticReason {
    Rank1ImageViolated,
    ImageOutsideClass,
    PhiNotInvertible,
    PhiScalarsInconsistent,
    VerificationFailed,
    NonzeroNonBijectiveJClaimRefuted,
    BranchInconclusive,
    Rank1NotPreserved,
    KernelShapeMismatch,
    SpanNotInvertible,
}

impl ExoticReason {
    pub const ALL: [ExoticReason; 10] = [
        ExoticReason::Rank1ImageViolated,
        ExoticReason::ImageOutsideClass,
        ExoticReason::PhiNotInvertible,
        ExoticReason::PhiScalarsInconsistent,
        ExoticReason::VerificationFailed,
        ExoticReason::NonzeroNonBijectiveJClaimRefuted,
        ExoticReason::BranchInconclusive,
        ExoticReason::Rank1NotPreserved,
        ExoticReason::KernelShapeMismatch,
        ExoticReason::SpanNotInvertible,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ExoticReason::Rank1ImageViolated => "rank-1-image-violated",
            ExoticReason::ImageOutsideClass => "image-outside-class",
            ExoticReason::PhiNotInvertible => "phi-not-invertible",
            ExoticReason::PhiScalarsInconsistent => "phi-scalars-inconsistent",
            ExoticReason::VerificationFailed => "verification-failed",
            ExoticReason::NonzeroNonBijectiveJClaimRefuted => "nonzero-non-bijective-j-claim-refuted",
            ExoticReason::BranchInconclusive => "branch-inconclusive",
            ExoticReason::Rank1NotPreserved => "rank-1-not-preserved",
            ExoticReason::KernelShapeMismatch => "kernel-shape-mismatch",
            ExoticReason::SpanNotInvertible => "span-not-invertible",
        }
    }
}

impl fmt::Display for ExoticReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ExoticReason {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExoticReason::ALL
            .into_iter()
            .find(|r| r.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown exotic reason `{}`", s)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreserverForm {
    Zero,
    /// A ↦ PAQ.
    TwoSided { p: Matrix, q: Matrix },
    /// A ↦ PAᵀQ.
    TwoSidedTranspose { p: Matrix, q: Matrix },
    /// A ↦ PAX.
    LeftRegular { p: Matrix, x: Matrix },
    /// A ↦ XAP.
    RightRegular { x: Matrix, p: Matrix },
    /// M ↦ Σ (Mxᵀ)_i C_i, with Mᵀ in place of M when `transposed`.
    ColumnFunctional { x: Vec<FieldElement>, c: Vec<Matrix>, transposed: bool },
    Exotic(ExoticReason),
}

fn first_nonzero<'a>(it: impl IntoIterator<Item = &'a FieldElement>) -> Option<FieldElement> {
    it.into_iter().find(|e| !e.is_zero()).cloned()
}

fn rescale(p: &Matrix, other: &Matrix) -> Result<(Matrix, Matrix)> {
    let c = first_nonzero(p.entries()).ok_or(Error::Singular)?;
    Ok((p.scale(&c.inv()?)?, other.scale(&c)?))
}

impl PreserverForm {
    pub fn variant_name(&self) -> &'static str {
        match self {
            PreserverForm::Zero => "zero",
            PreserverForm::TwoSided { .. } => "two-sided",
            PreserverForm::TwoSidedTranspose { .. } => "two-sided-transpose",
            PreserverForm::LeftRegular { .. } => "left-regular",
            PreserverForm::RightRegular { .. } => "right-regular",
            PreserverForm::ColumnFunctional { transposed: false, .. } => "column-functional",
            PreserverForm::ColumnFunctional { transposed: true, .. } => "column-functional-transpose",
            PreserverForm::Exotic(_) => "exotic",
        }
    }

    pub fn is_exotic(&self) -> bool {
        matches!(self, PreserverForm::Exotic(_))
    }

    /// Moves scalars so that the first nonzero entry (row-major) of P, or
    /// of x, is 1. The materialized operator is unchanged.
    pub fn normalized(self) -> Result<PreserverForm> {
        Ok(match self {
            PreserverForm::TwoSided { p, q } => {
                let (p, q) = rescale(&p, &q)?;
                PreserverForm::TwoSided { p, q }
            }
            PreserverForm::TwoSidedTranspose { p, q } => {
                let (p, q) = rescale(&p, &q)?;
                PreserverForm::TwoSidedTranspose { p, q }
            }
            PreserverForm::LeftRegular { p, x } => {
                let (p, x) = rescale(&p, &x)?;
                PreserverForm::LeftRegular { p, x }
            }
            PreserverForm::RightRegular { x, p } => {
                let (p, x) = rescale(&p, &x)?;
                PreserverForm::RightRegular { x, p }
            }
            PreserverForm::ColumnFunctional { x, c, transposed } => {
                let s = first_nonzero(&x).ok_or_else(|| Error::InvalidArgument("x must be nonzero".into()))?;
                let inv = s.inv()?;
                let x = x.iter().map(|e| e * &inv).collect();
                let c = c.iter().map(|m| m.scale(&s)).collect::<Result<Vec<_>>>()?;
                PreserverForm::ColumnFunctional { x, c, transposed }
            }
            other => other,
        })
    }

    /// The operator this form describes; `None` for Exotic.
    pub fn materialize(&self, spec: FieldSpec, n: usize) -> Result<Option<LinearOperator>> {
        Ok(Some(match self {
            PreserverForm::Zero => LinearOperator::zero(spec, n),
            PreserverForm::TwoSided { p, q } => op_two_sided(p, q, false)?,
            PreserverForm::TwoSidedTranspose { p, q } => op_two_sided(p, q, true)?,
            PreserverForm::LeftRegular { p, x } => op_regular(Side::Left, p, x)?,
            PreserverForm::RightRegular { x, p } => op_regular(Side::Right, p, x)?,
            PreserverForm::ColumnFunctional { x, c, transposed } => op_column_functional(x, c, *transposed)?,
            PreserverForm::Exotic(_) => return Ok(None),
        }))
    }

    /// Whether the form materializes to exactly `t`.
    pub fn reproduces(&self, t: &LinearOperator) -> Result<bool> {
        match self.materialize(t.spec(), t.n())? {
            Some(m) => m.equal(t),
            None => Ok(false),
        }
    }
}

/// ```text
/// form <variant>
/// <constituent matrices in matrix format>
/// ```
/// or `form exotic reason <tag>`.
impl fmt::Display for PreserverForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreserverForm::Exotic(r) => return writeln!(f, "form exotic reason {}", r),
            _ => writeln!(f, "form {}", self.variant_name())?,
        }
        match self {
            PreserverForm::TwoSided { p, q } | PreserverForm::TwoSidedTranspose { p, q } => write!(f, "{}{}", p, q),
            PreserverForm::LeftRegular { p, x } => write!(f, "{}{}", p, x),
            PreserverForm::RightRegular { x, p } => write!(f, "{}{}", x, p),
            PreserverForm::ColumnFunctional { x, c, .. } => {
                write!(f, "{}", Matrix::row_vector(x[0].spec(), x))?;
                c.iter().try_for_each(|m| write!(f, "{}", m))
            }
            _ => Ok(()),
        }
    }
}

impl FromStr for PreserverForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().peekable();
        let head = lines.by_ref().find(|l| !l.trim().is_empty()).map(str::trim).unwrap_or("");
        let variant = head.strip_prefix("form ").ok_or_else(|| Error::Parse("expected `form <variant>`".into()))?.trim();
        let pair = |lines: &mut std::iter::Peekable<std::str::Lines<'_>>| -> Result<(Matrix, Matrix)> {
            Ok((Matrix::parse_lines(lines)?, Matrix::parse_lines(lines)?))
        };
        let form = if let Some(tag) = variant.strip_prefix("exotic reason ") {
            PreserverForm::Exotic(tag.trim().parse()?)
        } else {
            match variant {
                "zero" => PreserverForm::Zero,
                "two-sided" => {
                    let (p, q) = pair(&mut lines)?;
                    PreserverForm::TwoSided { p, q }
                }
                "two-sided-transpose" => {
                    let (p, q) = pair(&mut lines)?;
                    PreserverForm::TwoSidedTranspose { p, q }
                }
                "left-regular" => {
                    let (p, x) = pair(&mut lines)?;
                    PreserverForm::LeftRegular { p, x }
                }
                "right-regular" => {
                    let (x, p) = pair(&mut lines)?;
                    PreserverForm::RightRegular { x, p }
                }
                "column-functional" | "column-functional-transpose" => {
                    let xm = Matrix::parse_lines(&mut lines)?;
                    if xm.rows() != 1 {
                        return Err(Error::Parse("x must be a row vector".into()));
                    }
                    let c = (0..xm.cols()).map(|_| Matrix::parse_lines(&mut lines)).collect::<Result<Vec<_>>>()?;
                    PreserverForm::ColumnFunctional {
                        x: xm.row(0).to_vec(),
                        c,
                        transposed: variant.ends_with("transpose"),
                    }
                }
                other => return Err(Error::Parse(format!("unknown form variant `{}`", other))),
            }
        };
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after form".into()));
        }
        Ok(form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_keeps_operator() {
        let k = FieldSpec::gf5();
        let p = Matrix::from_ints(k, &[[0, 3], [2, 1]]);
        let q = Matrix::from_ints(k, &[[1, 1], [0, 4]]);
        for form in [
            PreserverForm::TwoSided { p: p.clone(), q: q.clone() },
            PreserverForm::TwoSidedTranspose { p: p.clone(), q: q.clone() },
            PreserverForm::LeftRegular { p: p.clone(), x: q.clone() },
            PreserverForm::RightRegular { x: q.clone(), p: p.clone() },
            PreserverForm::ColumnFunctional { x: vec![k.zero(), k.from_i64(3)], c: vec![p.clone(), q.clone()], transposed: true },
        ] {
            let before = form.materialize(k, 2).unwrap().unwrap();
            let norm = form.normalized().unwrap();
            assert!(norm.reproduces(&before).unwrap());
            match &norm {
                PreserverForm::ColumnFunctional { x, .. } => assert!(x[1].is_one()),
                PreserverForm::TwoSided { p, .. }
                | PreserverForm::TwoSidedTranspose { p, .. }
                | PreserverForm::LeftRegular { p, .. }
                | PreserverForm::RightRegular { p, .. } => assert!(p.get(0, 1).is_one()),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let k = FieldSpec::Rational;
        let p = Matrix::from_ints(k, &[[1, 2], [0, 1]]);
        let x = Matrix::from_ints(k, &[[0, 0], [3, -1]]);
        let forms = [
            PreserverForm::Zero,
            PreserverForm::LeftRegular { p: p.clone(), x: x.clone() },
            PreserverForm::RightRegular { x: x.clone(), p: p.clone() },
            PreserverForm::TwoSidedTranspose { p: p.clone(), q: p.clone() },
            PreserverForm::ColumnFunctional { x: vec![k.one(), k.zero()], c: vec![p.clone(), x.clone()], transposed: false },
            PreserverForm::Exotic(ExoticReason::Rank1ImageViolated),
        ];
        for f in forms {
            assert_eq!(f.to_string().parse::<PreserverForm>().unwrap(), f);
        }
        assert_eq!(PreserverForm::Exotic(ExoticReason::Rank1ImageViolated).to_string(), "form exotic reason rank-1-image-violated\n");
        assert!("form sideways".parse::<PreserverForm>().is_err());
    }

    #[test]
    fn exotic_has_no_operator() {
        let f = PreserverForm::Exotic(ExoticReason::VerificationFailed);
        assert!(f.materialize(FieldSpec::gf2(), 2).unwrap().is_none());
        assert!(!f.reproduces(&LinearOperator::zero(FieldSpec::gf2(), 2)).unwrap());
    }
}
