//! Sparse row-echelon engine shared by rank, kernel and solve.
//!
//! Over Q every row is scaled to a primitive integer vector and elimination
//! is fraction-free: `t * P - p * T` followed by division by the row content.
//! Over `F_p` rows are kept monic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{FieldElement, FieldSpec};

use super::SparseVector;

type Row<S> = Vec<(usize, S)>;

trait Domain {
    type S: Clone;
    fn is_zero(s: &Self::S) -> bool;
    fn encode_row(&self, row: &[(usize, FieldElement)]) -> Row<Self::S>;
    fn to_field(&self, s: &Self::S) -> FieldElement;
    /// Combination of `target` and `pivot` whose entry at `col` vanishes.
    /// `pivot` has a nonzero entry at `col`.
    fn eliminate(&self, target: &Row<Self::S>, pivot: &Row<Self::S>, col: usize) -> Row<Self::S>;
    fn normalize(&self, row: &mut Row<Self::S>);
}

fn entry_at<S>(row: &Row<S>, col: usize) -> Option<&S> {
    row.binary_search_by_key(&col, |e| e.0)
        .ok()
        .map(|i| &row[i].1)
}

/// `a * x + b * y` over sorted sparse rows, dropping zeros.
fn combine<S: Clone>(
    x: &Row<S>,
    y: &Row<S>,
    scale_x: impl Fn(&S) -> S,
    scale_y: impl Fn(&S) -> S,
    add: impl Fn(S, S) -> S,
    is_zero: impl Fn(&S) -> bool,
) -> Row<S> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take = match (x.get(i), y.get(j)) {
            (Some(a), Some(b)) => a.0.cmp(&b.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => unreachable!(),
        };
        let (col, v) = match take {
            std::cmp::Ordering::Less => {
                i += 1;
                (x[i - 1].0, scale_x(&x[i - 1].1))
            }
            std::cmp::Ordering::Greater => {
                j += 1;
                (y[j - 1].0, scale_y(&y[j - 1].1))
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                (x[i - 1].0, add(scale_x(&x[i - 1].1), scale_y(&y[j - 1].1)))
            }
        };
        if !is_zero(&v) {
            out.push((col, v));
        }
    }
    out
}

struct ModP(u64);

impl ModP {
    fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.0 as u128) as u64
    }
    fn inv(&self, a: u64) -> u64 {
        crate::field::mod_pow(a, self.0 - 2, self.0)
    }
}

impl Domain for ModP {
    type S = u64;

    fn is_zero(s: &u64) -> bool {
        *s == 0
    }

    fn encode_row(&self, row: &[(usize, FieldElement)]) -> Row<u64> {
        row.iter()
            .map(|(c, v)| (*c, v.as_residue().expect("residue")))
            .filter(|e| e.1 != 0)
            .collect()
    }

    fn to_field(&self, s: &u64) -> FieldElement {
        FieldSpec::prime(self.0).expect("prime").from_i64(*s as i64)
    }

    fn eliminate(&self, target: &Row<u64>, pivot: &Row<u64>, col: usize) -> Row<u64> {
        let t = *entry_at(target, col).expect("target entry");
        let pv = *entry_at(pivot, col).expect("pivot entry");
        let factor = self.mul(t, self.inv(pv));
        let neg = (self.0 - factor) % self.0;
        let p = self.0;
        combine(
            target,
            pivot,
            |a| *a,
            |b| self.mul(*b, neg),
            |a, b| (a + b) % p,
            |v| *v == 0,
        )
    }

    fn normalize(&self, row: &mut Row<u64>) {
        if let Some(&(_, lead)) = row.first() {
            if lead != 1 {
                let inv = self.inv(lead);
                for e in row.iter_mut() {
                    e.1 = self.mul(e.1, inv);
                }
            }
        }
    }
}

struct Integers;

impl Domain for Integers {
    type S = BigInt;

    fn is_zero(s: &BigInt) -> bool {
        s.is_zero()
    }

    fn encode_row(&self, row: &[(usize, FieldElement)]) -> Row<BigInt> {
        let qs: Vec<(usize, &BigRational)> = row
            .iter()
            .map(|(c, v)| (*c, v.as_rational().expect("rational")))
            .filter(|e| !e.1.is_zero())
            .collect();
        let lcm = qs
            .iter()
            .fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
        qs.into_iter()
            .map(|(c, q)| (c, q.numer() * (&lcm / q.denom())))
            .collect()
    }

    fn to_field(&self, s: &BigInt) -> FieldElement {
        FieldSpec::RATIONALS.from_bigint(s)
    }

    fn eliminate(&self, target: &Row<BigInt>, pivot: &Row<BigInt>, col: usize) -> Row<BigInt> {
        let t = entry_at(target, col).expect("target entry");
        let pv = entry_at(pivot, col).expect("pivot entry");
        let g = t.gcd(pv);
        let st = pv / &g;
        let sp = -(t / &g);
        let mut row = combine(
            target,
            pivot,
            |a| a * &st,
            |b| b * &sp,
            |a, b| a + b,
            |v| v.is_zero(),
        );
        self.normalize(&mut row);
        row
    }

    fn normalize(&self, row: &mut Row<BigInt>) {
        let Some(first) = row.first() else { return };
        let mut g = first.1.abs();
        for e in row.iter().skip(1) {
            if g.is_one() {
                break;
            }
            g = g.gcd(&e.1);
        }
        let flip = first.1.is_negative();
        if !g.is_one() || flip {
            let g = if flip { -g } else { g };
            for e in row.iter_mut() {
                e.1 = &e.1 / &g;
            }
        }
    }
}

struct Echelon<'d, D: Domain> {
    domain: &'d D,
    pivots: BTreeMap<usize, Row<D::S>>,
}

impl<'d, D: Domain> Echelon<'d, D> {
    fn new(domain: &'d D) -> Self {
        Echelon {
            domain,
            pivots: BTreeMap::new(),
        }
    }

    /// Reduces `row` against the current pivots; returns true if it was independent.
    fn insert(&mut self, mut row: Row<D::S>) -> bool {
        loop {
            let Some(&(lead, _)) = row.first() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => row = self.domain.eliminate(&row, p, lead),
                None => {
                    self.domain.normalize(&mut row);
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Clears every pivot column above its pivot.
    fn back_substitute(&mut self) {
        let leads: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &c in &leads {
            let pivot = self.pivots[&c].clone();
            for (_, row) in self.pivots.range_mut(..c) {
                if entry_at(row, c).is_some_and(|v| !D::is_zero(v)) {
                    *row = self.domain.eliminate(row, &pivot, c);
                }
            }
        }
    }
}

/// Column order used during elimination: sparsest columns first, ties by index.
/// `keep_last` pins the final column in place (augmented right-hand sides).
fn column_order(ncols: usize, rows: &[SparseVector], keep_last: bool) -> Vec<usize> {
    let mut counts = vec![0usize; ncols];
    for r in rows {
        for (c, _) in r {
            counts[*c] += 1;
        }
    }
    let free = if keep_last && ncols > 0 {
        ncols - 1
    } else {
        ncols
    };
    let mut order: Vec<usize> = (0..free).collect();
    order.sort_by_key(|&c| (counts[c], c));
    if free < ncols {
        order.push(ncols - 1);
    }
    order
}

fn run<D: Domain>(
    domain: &D,
    ncols: usize,
    rows: &[SparseVector],
    keep_last: bool,
    reduced: bool,
) -> (usize, Vec<(usize, SparseVector)>) {
    let order = column_order(ncols, rows, keep_last);
    let mut position = vec![0usize; ncols];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let mut permuted: Vec<Row<D::S>> = rows
        .iter()
        .map(|r| {
            let mut row = domain.encode_row(r);
            for e in row.iter_mut() {
                e.0 = position[e.0];
            }
            row.sort_by_key(|e| e.0);
            row
        })
        .filter(|r| !r.is_empty())
        .collect();
    permuted.sort_by_key(|r| r.len());

    let mut ech = Echelon::new(domain);
    for row in permuted {
        ech.insert(row);
    }
    let rank = ech.pivots.len();
    if !reduced {
        return (rank, Vec::new());
    }
    ech.back_substitute();
    let out = ech
        .pivots
        .into_iter()
        .map(|(lead, row)| {
            let mut v: SparseVector = row
                .iter()
                .map(|(c, s)| (order[*c], domain.to_field(s)))
                .collect();
            v.sort_by_key(|e| e.0);
            (order[lead], v)
        })
        .collect();
    (rank, out)
}

/// Rank of the matrix with the given rows.
pub(crate) fn rank_of_rows(field: FieldSpec, ncols: usize, rows: &[SparseVector]) -> usize {
    match field.modulus() {
        Some(p) => run(&ModP(p), ncols, rows, false, false).0,
        None => run(&Integers, ncols, rows, false, false).0,
    }
}

/// Reduced row-echelon pivots `(pivot column, row)`; every row has exactly
/// one nonzero entry among the pivot columns.
pub(crate) fn reduced_echelon(
    field: FieldSpec,
    ncols: usize,
    rows: &[SparseVector],
    keep_last: bool,
) -> Vec<(usize, SparseVector)> {
    match field.modulus() {
        Some(p) => run(&ModP(p), ncols, rows, keep_last, true).1,
        None => run(&Integers, ncols, rows, keep_last, true).1,
    }
}
