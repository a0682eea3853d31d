//! Clique-complex invariants: clique counts, Euler characteristic and Betti
//! numbers over the rationals or the two-element field.
//!
//! Ranks are exact. Boundary matrices are reduced column by column with the
//! usual "lowest nonzero row" pivoting. Over the rationals the reduction is
//! fraction-free on integer columns (each combined column is divided by its
//! content), first in `i64` with overflow checks and, if that overflows,
//! again in arbitrary precision.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};
use serde::Serialize;

use crate::cliques::{clique_counts, cliques_by_size};
use crate::space::DigitalSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Field {
    Rationals,
    TwoElement,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Rationals => "rationals",
            Field::TwoElement => "two-element",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub clique_counts: Vec<u64>,
    pub euler: i64,
    pub betti: Vec<usize>,
    pub coefficient_field: Field,
}

impl InvariantReport {
    pub fn compute(g: &DigitalSpace, field: Field) -> Self {
        let counts = clique_counts(g, None);
        Self {
            euler: euler_from_counts(&counts),
            clique_counts: counts,
            betti: betti_numbers(g, field),
            coefficient_field: field,
        }
    }

    /// Alternating Betti sum; equals `euler` whenever the ranks are right.
    pub fn betti_euler(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Flat `key: value` block.
    pub fn to_text(&self) -> String {
        let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(" ");
        format!(
            "clique_counts: {}\neuler: {}\nbetti: {}\nfield: {}\n",
            join(&mut self.clique_counts.iter().map(u64::to_string)),
            self.euler,
            join(&mut self.betti.iter().map(usize::to_string)),
            self.coefficient_field
        )
    }
}

fn euler_from_counts(counts: &[u64]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

pub fn euler_characteristic(g: &DigitalSpace) -> i64 {
    euler_from_counts(&clique_counts(g, None))
}

/// Betti numbers `b_0..b_m`, trimmed after the top nonzero one.
pub fn betti_numbers(g: &DigitalSpace, field: Field) -> Vec<usize> {
    let simplices = cliques_by_size(g);
    let dims = simplices.len();
    // ranks[k] = rank of the boundary map from k-simplices to (k-1)-simplices.
    let mut ranks = vec![0usize; dims + 1];
    for k in 1..dims {
        let faces: HashMap<&[u32], u32> = simplices[k - 1]
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i as u32))
            .collect();
        ranks[k] = match field {
            Field::TwoElement => rank_gf2(boundary_columns(&simplices[k], &faces, |_| ())),
            Field::Rationals => {
                let cols = boundary_columns(&simplices[k], &faces, |i| if i % 2 == 0 { 1i64 } else { -1 });
                match rank_integer(cols.clone()) {
                    Some(r) => r,
                    None => {
                        let big = cols
                            .into_iter()
                            .map(|c| c.into_iter().map(|(r, v)| (r, BigInt::from(v))).collect())
                            .collect();
                        rank_integer(big).expect("arbitrary precision cannot overflow")
                    }
                }
            }
        };
    }
    let mut betti: Vec<usize> = (0..dims)
        .map(|k| simplices[k].len() - ranks[k] - ranks[k + 1])
        .collect();
    while betti.last() == Some(&0) {
        betti.pop();
    }
    betti
}

fn boundary_columns<T, F: Fn(usize) -> T>(
    simplices: &[Vec<u32>],
    faces: &HashMap<&[u32], u32>,
    coef: F,
) -> Vec<Vec<(u32, T)>> {
    let mut face = Vec::new();
    simplices
        .iter()
        .map(|s| {
            let mut col: Vec<(u32, T)> = (0..s.len())
                .map(|drop| {
                    face.clear();
                    face.extend(s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v));
                    (faces[face.as_slice()], coef(drop))
                })
                .collect();
            col.sort_unstable_by_key(|&(r, _)| r);
            col
        })
        .collect()
}

fn rank_gf2(columns: Vec<Vec<(u32, ())>>) -> usize {
    let mut pivots: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut rank = 0;
    for col in columns {
        let mut col: Vec<u32> = col.into_iter().map(|(r, _)| r).collect();
        while let Some(&low) = col.last() {
            match pivots.get(&low) {
                Some(other) => col = xor_sorted(&col, other),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivots.insert(low, col);
            rank += 1;
        }
    }
    rank
}

fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Rank over the rationals of an integer matrix given by sparse columns.
/// `None` if an intermediate value overflows `T`.
fn rank_integer<T>(columns: Vec<Vec<(u32, T)>>) -> Option<usize>
where
    T: Integer + Signed + Clone + CheckedMul + CheckedSub,
{
    let mut pivots: HashMap<u32, Vec<(u32, T)>> = HashMap::new();
    let mut rank = 0;
    for mut col in columns {
        while let Some((low, q)) = col.last().cloned() {
            let Some(other) = pivots.get(&low) else { break };
            let p = other.last().expect("pivot columns are nonzero").1.clone();
            let g = p.gcd(&q);
            let (p, q) = (p / g.clone(), q / g);
            col = combine(&col, &p, other, &q)?;
        }
        if !col.is_empty() {
            pivots.insert(col.last().unwrap().0, col);
            rank += 1;
        }
    }
    Some(rank)
}

/// `p * a - q * b`, divided by the content of the result.
fn combine<T>(a: &[(u32, T)], p: &T, b: &[(u32, T)], q: &T) -> Option<Vec<(u32, T)>>
where
    T: Integer + Signed + Clone + CheckedMul + CheckedSub,
{
    let mut out: Vec<(u32, T)> = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        let (row, val) = if take_a {
            i += 1;
            (a[i - 1].0, a[i - 1].1.checked_mul(p)?)
        } else if take_b {
            j += 1;
            (b[j - 1].0, T::zero().checked_sub(&b[j - 1].1.checked_mul(q)?)?)
        } else {
            i += 1;
            j += 1;
            let x = a[i - 1].1.checked_mul(p)?;
            let y = b[j - 1].1.checked_mul(q)?;
            (a[i - 1].0, x.checked_sub(&y)?)
        };
        if !val.is_zero() {
            out.push((row, val));
        }
    }
    let content = out
        .iter()
        .fold(T::zero(), |acc, (_, v)| acc.gcd(v));
    if !content.is_zero() && !content.is_one() {
        for (_, v) in &mut out {
            *v = v.clone() / content.clone();
        }
    }
    Some(out)
}
