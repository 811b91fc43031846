//! Coefficient and evaluation dimension, the word-indexed matrix `M_w`,
//! relative rank and the set-multilinear projection `Π_w`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ff::{Elem, FfError, Field, FieldKind};
use crate::linalg::{rank, span_dim, symbolic_rank};
use crate::mpoly::{Monomial, Poly, PolyError, VarId};
use crate::wordspec::{derive_blocks, is_set_multilinear, sml_monomials, Word};

/// Largest number of evaluation points `eval_dim` will enumerate.
pub const EVAL_POINT_CAP: u64 = 1 << 20;
/// Largest number of matrix cells built densely.
pub const MATRIX_CELL_CAP: usize = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimError {
    #[error("split does not partition the variables of f: {0}")]
    BadSplit(String),
    #[error("{points} evaluation points exceed the cap {EVAL_POINT_CAP}")]
    EnumerationTooLarge { points: u128 },
    #[error("matrix of {rows}×{cols} exceeds the cell cap")]
    MatrixTooLarge { rows: usize, cols: usize },
    #[error("monomial {0} is not set-multilinear over the word")]
    NotSetMultilinear(String),
    #[error("sample space of size {size} does not exceed the degree bound {bound}")]
    FieldTooSmallForSz { size: String, bound: u64 },
    #[error("empty evaluation set")]
    EmptySet,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FfError),
}

/// Coefficient matrix of `f` with respect to an (x̄, ȳ) split. Entries are
/// polynomials in the remaining variables, constants when there are none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffMatrix {
    pub field: Field,
    pub rows: Vec<Monomial>,
    pub cols: Vec<Monomial>,
    pub entries: Vec<Vec<Poly>>,
}

impl CoeffMatrix {
    /// Whether every entry is a constant.
    pub fn is_constant(&self) -> bool {
        self.entries.iter().flatten().all(Poly::is_constant)
    }

    pub fn constant_entries(&self) -> Vec<Vec<Elem>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(Poly::constant_term).collect())
            .collect()
    }

    /// Rank over `F`, or over `F(z̄)` when entries are polynomials.
    pub fn rank(&self) -> usize {
        if self.is_constant() {
            rank(&self.field, &self.constant_entries())
        } else {
            symbolic_rank(&self.field, &self.entries)
        }
    }

    /// CSV dump: a header row of column monomials, then one row per row
    /// monomial.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("\"\"");
        for c in &self.cols {
            let _ = write!(out, ",\"{c}\"");
        }
        out.push('\n');
        for (m, row) in self.rows.iter().zip(&self.entries) {
            let _ = write!(out, "\"{m}\"");
            for e in row {
                let _ = write!(out, ",\"{e}\"");
            }
            out.push('\n');
        }
        out
    }
}

fn check_split(f: &Poly, xs: &BTreeSet<VarId>, ys: &BTreeSet<VarId>) -> Result<(), DimError> {
    if let Some(v) = xs.intersection(ys).next() {
        return Err(DimError::BadSplit(format!("{v} is on both sides")));
    }
    match f.vars().iter().find(|v| !xs.contains(v) && !ys.contains(v)) {
        Some(v) => Err(DimError::BadSplit(format!("{v} is on neither side"))),
        None => Ok(()),
    }
}

/// Coefficient matrix over the split `(xs, ys)`; variables outside both
/// sides are kept in the entries.
pub fn coeff_matrix(f: &Poly, xs: &BTreeSet<VarId>, ys: &BTreeSet<VarId>) -> Result<CoeffMatrix, DimError> {
    if let Some(v) = xs.intersection(ys).next() {
        return Err(DimError::BadSplit(format!("{v} is on both sides")));
    }
    let field = f.field().clone();
    let mut cells: BTreeMap<(Monomial, Monomial), Poly> = BTreeMap::new();
    for (m, c) in f.terms() {
        let (mx, rest) = m.split(|v| xs.contains(&v));
        let (my, mz) = rest.split(|v| ys.contains(&v));
        cells
            .entry((mx, my))
            .or_insert_with(|| Poly::zero(&field))
            .add_term(mz, c.clone());
    }
    let rows: Vec<Monomial> = cells.keys().map(|(a, _)| a.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let cols: Vec<Monomial> = cells.keys().map(|(_, b)| b.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    if rows.len().saturating_mul(cols.len()) > MATRIX_CELL_CAP {
        return Err(DimError::MatrixTooLarge {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    let col_ix: BTreeMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let row_ix: BTreeMap<&Monomial, usize> = rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut entries = vec![vec![Poly::zero(&field); cols.len()]; rows.len()];
    for ((a, b), p) in &cells {
        entries[row_ix[a]][col_ix[b]] = p.clone();
    }
    Ok(CoeffMatrix {
        field,
        rows,
        cols,
        entries,
    })
}

/// `dim coeff_{x̄|ȳ}(f)`: the rank of the coefficient matrix.
pub fn coeff_dim(f: &Poly, xs: &BTreeSet<VarId>, ys: &BTreeSet<VarId>) -> Result<usize, DimError> {
    check_split(f, xs, ys)?;
    Ok(coeff_matrix(f, xs, ys)?.rank())
}

/// Dimension of `span{f(x̄, β̄) : β̄ ∈ S^{|ȳ|}}`.
pub fn eval_dim(f: &Poly, xs: &BTreeSet<VarId>, ys: &BTreeSet<VarId>, s: &[Elem]) -> Result<usize, DimError> {
    check_split(f, xs, ys)?;
    if s.is_empty() {
        return Err(DimError::EmptySet);
    }
    let yv: Vec<VarId> = ys.iter().copied().filter(|v| f.vars().contains(v)).collect();
    let points = (s.len() as u128).checked_pow(yv.len() as u32).unwrap_or(u128::MAX);
    if points > u128::from(EVAL_POINT_CAP) {
        return Err(DimError::EnumerationTooLarge { points });
    }
    let field = f.field();
    let evals: Vec<Poly> = (0..points as u64)
        .into_par_iter()
        .map(|mut idx| {
            let mut asg = BTreeMap::new();
            for &v in &yv {
                asg.insert(v, s[(idx % s.len() as u64) as usize].clone());
                idx /= s.len() as u64;
            }
            f.subst_consts(&asg)
        })
        .collect();
    Ok(span_dim(field, &evals))
}

/// Exact relative rank data: `relrk = rank / √(rows · cols)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelRank {
    pub rank: usize,
    pub rows: u64,
    pub cols: u64,
}

impl RelRank {
    /// `relrk²` as an exact rational.
    pub fn squared(&self) -> BigRational {
        let r = BigInt::from(self.rank);
        BigRational::new(&r * &r, BigInt::from(self.rows) * BigInt::from(self.cols))
    }

    pub fn at_most_one(&self) -> bool {
        let r = self.rank as u128;
        r * r <= u128::from(self.rows) * u128::from(self.cols)
    }

    /// `relrk ≥ 2^{−b/2}`, decided as `rank² · 2^b ≥ rows · cols`.
    pub fn at_least_pow2_neg_half(&self, b: u32) -> bool {
        let r = BigInt::from(self.rank);
        &r * &r * (BigInt::from(1) << b) >= BigInt::from(self.rows) * BigInt::from(self.cols)
    }
}

/// `M_w(f)`: rows indexed by the set-multilinear monomials over the positive
/// blocks, columns by those over the negative blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordMatrix {
    pub field: Field,
    pub rows: Vec<Monomial>,
    pub cols: Vec<Monomial>,
    pub entries: Vec<Vec<Elem>>,
}

impl WordMatrix {
    pub fn rank(&self) -> usize {
        rank(&self.field, &self.entries)
    }

    pub fn relrank(&self) -> RelRank {
        RelRank {
            rank: self.rank(),
            rows: self.rows.len() as u64,
            cols: self.cols.len() as u64,
        }
    }
}

/// Builds `M_w(f)`; `f` must be set-multilinear over the word.
pub fn word_matrix(f: &Poly, w: &Word) -> Result<WordMatrix, DimError> {
    let layout = derive_blocks(w);
    if let Some((m, _)) = f.terms().find(|(m, _)| !is_set_multilinear(&layout, m)) {
        return Err(DimError::NotSetMultilinear(m.to_string()));
    }
    build_word_matrix(f, w)
}

/// `M_w(Π_w(f))`.
pub fn word_matrix_projected(f: &Poly, w: &Word) -> Result<WordMatrix, DimError> {
    build_word_matrix(&sml_project(f, w), w)
}

fn build_word_matrix(f: &Poly, w: &Word) -> Result<WordMatrix, DimError> {
    let layout = derive_blocks(w);
    let nrows: u64 = layout.pos.iter().map(|&i| 1u64 << w.width(i)).product();
    let ncols: u64 = layout.neg.iter().map(|&i| 1u64 << w.width(i)).product();
    if nrows.saturating_mul(ncols) > MATRIX_CELL_CAP as u64 {
        return Err(DimError::MatrixTooLarge {
            rows: nrows as usize,
            cols: ncols as usize,
        });
    }
    let rows = sml_monomials(&layout, &layout.pos);
    let cols = sml_monomials(&layout, &layout.neg);
    let field = f.field().clone();
    let entries = rows
        .iter()
        .map(|m| cols.iter().map(|m2| f.coeff(&m.mul(m2))).collect())
        .collect();
    Ok(WordMatrix {
        field,
        rows,
        cols,
        entries,
    })
}

pub fn relrank(f: &Poly, w: &Word) -> Result<RelRank, DimError> {
    Ok(word_matrix(f, w)?.relrank())
}

/// `Π_w(f)`: keeps exactly the set-multilinear monomials over `w`.
pub fn sml_project(f: &Poly, w: &Word) -> Poly {
    let layout = derive_blocks(w);
    f.filter_terms(|m| is_set_multilinear(&layout, m))
}

/// How `poly_entry_rank` computed its answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RankMode {
    Symbolic,
    Random {
        trials: u32,
        seed: u64,
        sample_field: String,
        degree_bound: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub mode: RankMode,
    /// Rank observed in each random trial.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trial_ranks: Vec<usize>,
}

/// Options for [`poly_entry_rank`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankStrategy {
    Symbolic,
    /// `trials` evaluations at points of `F_{p^ext}` (or integers in
    /// `[0, 4·bound)` over `ℚ`).
    Random { trials: u32, ext: u32, seed: u64 },
}

/// Rank over `F(z̄)` of a matrix of polynomial entries.
///
/// The randomized strategy returns the largest rank seen at random points.
/// It never exceeds the true rank, and a nonzero maximal minor of degree at
/// most `min(rows, cols) · max entry degree` survives a random point with
/// probability at least `1 − bound/|S|`.
pub fn poly_entry_rank(field: &Field, m: &[Vec<Poly>], strategy: RankStrategy) -> Result<RankReport, DimError> {
    let (trials, ext, seed) = match strategy {
        RankStrategy::Symbolic => {
            return Ok(RankReport {
                rank: symbolic_rank(field, m),
                mode: RankMode::Symbolic,
                trial_ranks: Vec::new(),
            })
        }
        RankStrategy::Random { trials, ext, seed } => (trials, ext, seed),
    };
    let dims = m.len().min(m.first().map_or(0, Vec::len)) as u64;
    let max_deg = m.iter().flatten().filter_map(Poly::degree).max().unwrap_or(0);
    let bound = dims * max_deg;
    let zs: BTreeSet<VarId> = m.iter().flatten().flat_map(Poly::vars).collect();
    let (sample, rat_bound) = match field.kind() {
        FieldKind::Rational => (field.clone(), 4 * bound.max(1)),
        FieldKind::Prime if ext > 1 => (Field::extension(field.characteristic(), ext)?, 0),
        _ => (field.clone(), 0),
    };
    if let Some(q) = sample.size() {
        if q <= bound {
            return Err(DimError::FieldTooSmallForSz {
                size: q.to_string(),
                bound,
            });
        }
    }
    let trial_ranks: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed ^ u64::from(t).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let point: BTreeMap<VarId, Elem> = zs.iter().map(|&v| (v, sample.random(&mut rng, rat_bound))).collect();
            let rows: Vec<Vec<Elem>> = m
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| {
                            e.eval_in(&sample, |v| point.get(&v).cloned())
                                .expect("every entry variable is assigned")
                        })
                        .collect()
                })
                .collect();
            rank(&sample, &rows)
        })
        .collect();
    Ok(RankReport {
        rank: trial_ranks.iter().copied().max().unwrap_or(0),
        mode: RankMode::Random {
            trials,
            seed,
            sample_field: sample.spec(),
            degree_bound: bound,
        },
        trial_ranks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;

    fn set(vs: &[&str]) -> BTreeSet<VarId> {
        vs.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn small_coeff_dims() {
        let q = Field::rationals();
        let p = |s: &str| parse_poly(&q, s).unwrap();
        let xs = set(&["x_1", "x_2"]);
        let ys = set(&["x_3", "x_4"]);
        assert_eq!(coeff_dim(&p("x_1*x_3 + x_2*x_4"), &xs, &ys).unwrap(), 2);
        assert_eq!(coeff_dim(&p("x_1*x_3 + x_1*x_4 + x_2*x_3 + x_2*x_4"), &xs, &ys).unwrap(), 1);
        assert!(matches!(coeff_dim(&p("x_5"), &xs, &ys), Err(DimError::BadSplit(_))));
        let s = [q.zero(), q.one()];
        let f = p("x_1*x_3");
        assert_eq!(eval_dim(&f, &set(&["x_1"]), &set(&["x_3"]), &s).unwrap(), 1);
    }

    #[test]
    fn word_matrices() {
        let f = Field::prime(5).unwrap();
        let w = Word::parse("1,-1").unwrap();
        let g = parse_poly(&f, "x^(1)_0*y^(2)_0 + x^(1)_1*y^(2)_1 + x^(1)_0").unwrap();
        assert!(word_matrix(&g, &w).is_err());
        let pg = sml_project(&g, &w);
        assert_eq!(sml_project(&pg, &w), pg);
        let rr = relrank(&pg, &w).unwrap();
        assert_eq!(rr, RelRank { rank: 2, rows: 2, cols: 2 });
        assert!(rr.at_most_one() && rr.at_least_pow2_neg_half(1));
        assert_eq!(rr.squared(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn entry_ranks() {
        let f = Field::prime(5).unwrap();
        let p = |s: &str| parse_poly(&f, s).unwrap();
        let m = vec![vec![p("z_{1,2}"), p("0")], vec![p("0"), p("z_{1,2}")]];
        let r = poly_entry_rank(&f, &m, RankStrategy::Random { trials: 4, ext: 2, seed: 7 }).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(poly_entry_rank(&f, &m, RankStrategy::Symbolic).unwrap().rank, 2);
        let cm = coeff_matrix(&p("x_1*x_2*z_{1,2} + x_1"), &set(&["x_1"]), &set(&["x_2"])).unwrap();
        assert!(cm.to_csv().starts_with("\"\",\"1\",\"x_2\""));
        assert_eq!(cm.rank(), 1);
    }
}
