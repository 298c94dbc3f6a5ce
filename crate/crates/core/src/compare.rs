//! Comparing loading matrices whose column order and signs are arbitrary.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// How the columns of a matrix line up with a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnMatch {
    /// `permutation[j]` is the column of the candidate matched to reference column `j`.
    pub permutation: Vec<usize>,
    /// `±1` applied to the matched candidate column.
    pub signs: Vec<f64>,
    pub max_abs_diff: f64,
}

impl ColumnMatch {
    /// The candidate with columns reordered and re-signed to follow the reference.
    pub fn apply(&self, candidate: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(candidate.nrows(), self.permutation.len(), |r, c| {
            self.signs[c] * candidate[(r, self.permutation[c])]
        })
    }
}

/// Column permutation and per-column signs minimizing the largest entrywise
/// difference to `reference`. Exhaustive over permutations, so meant for a
/// handful of columns.
pub fn best_column_match(
    candidate: &DMatrix<f64>,
    reference: &DMatrix<f64>,
) -> Result<ColumnMatch> {
    if candidate.shape() != reference.shape() {
        return Err(Error::Shape(format!(
            "cannot match {:?} against {:?}",
            candidate.shape(),
            reference.shape()
        )));
    }
    let k = candidate.ncols();
    // cost[(j, c)]: best max-abs difference of candidate column c (either sign) to reference column j
    let mut cost = DMatrix::zeros(k, k);
    let mut sign = DMatrix::from_element(k, k, 1.0);
    for j in 0..k {
        for c in 0..k {
            let plus = (candidate.column(c) - reference.column(j)).amax();
            let minus = (candidate.column(c) + reference.column(j)).amax();
            if minus < plus {
                cost[(j, c)] = minus;
                sign[(j, c)] = -1.0;
            } else {
                cost[(j, c)] = plus;
            }
        }
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut perm: Vec<usize> = (0..k).collect();
    permute(&mut perm, 0, &mut |p| {
        let worst = p
            .iter()
            .enumerate()
            .map(|(j, &c)| cost[(j, c)])
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(b, _)| worst < *b) {
            best = Some((worst, p.to_vec()));
        }
    });
    let (max_abs_diff, permutation) = best.expect("at least one permutation");
    let signs = permutation
        .iter()
        .enumerate()
        .map(|(j, &c)| sign[(j, c)])
        .collect();
    Ok(ColumnMatch {
        permutation,
        signs,
        max_abs_diff,
    })
}

fn permute(items: &mut [usize], start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, visit);
        items.swap(start, i);
    }
}
