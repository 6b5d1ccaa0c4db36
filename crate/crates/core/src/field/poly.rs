//! Linear-factor search for univariate polynomials, coefficients low to high.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{mod_pow, FieldElement, FieldError, FieldSpec};

/// Horner evaluation.
pub fn poly_eval(poly: &[FieldElement], x: &FieldElement) -> FieldElement {
    let mut acc = x.field().zero();
    for c in poly.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

fn check_monic(poly: &[FieldElement]) -> Result<FieldSpec, FieldError> {
    match poly.last() {
        Some(lead) if lead.is_one() => Ok(lead.field()),
        _ => Err(FieldError::NonMonic),
    }
}

/// Every value that could be a root of `poly` in its field.
///
/// Over Q this is the rational-root-theorem set (after clearing
/// denominators), both signs, plus zero. Over `F_p` it is the whole field.
pub fn rational_root_candidates(poly: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
    let field = check_monic(poly)?;
    if let Some(all) = field.residues() {
        return Ok(all.collect());
    }
    let ints = integer_coefficients(poly);
    let mut out = BTreeSet::new();
    out.insert(field.zero());
    let lowest = ints
        .iter()
        .find(|c| !c.is_zero())
        .expect("monic polynomial is nonzero");
    let lead = ints.last().expect("nonempty");
    let nums = divisors(&lowest.abs());
    let dens = divisors(&lead.abs());
    for n in &nums {
        for d in &dens {
            let r = BigRational::new(n.clone(), d.clone());
            out.insert(field.from_rational(&r)?);
            out.insert(field.from_rational(&-r)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// Roots of `poly` lying in its field, with multiplicities, in increasing order.
/// The multiplicities sum to the degree exactly when the polynomial splits.
pub fn poly_roots(poly: &[FieldElement]) -> Result<Vec<(FieldElement, usize)>, FieldError> {
    let field = check_monic(poly)?;
    let roots: Vec<FieldElement> = match field.modulus() {
        Some(p) if p > SMALL_PRIME => large_prime_roots(poly, p),
        _ => rational_root_candidates(poly)?
            .into_iter()
            .filter(|x| poly_eval(poly, x).is_zero())
            .collect(),
    };
    let mut out = Vec::with_capacity(roots.len());
    for r in roots {
        let mut mult = 0;
        let mut q = poly.to_vec();
        loop {
            let (quot, rem) = divide_linear(&q, &r);
            if !rem.is_zero() {
                break;
            }
            mult += 1;
            q = quot;
        }
        debug_assert!(mult > 0);
        out.push((r, mult));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

const SMALL_PRIME: u64 = 1 << 16;

/// Synthetic division by `(x - r)`: returns quotient and remainder.
fn divide_linear(poly: &[FieldElement], r: &FieldElement) -> (Vec<FieldElement>, FieldElement) {
    if poly.is_empty() {
        return (Vec::new(), r.field().zero());
    }
    let n = poly.len() - 1;
    let mut quot = vec![r.field().zero(); n];
    let mut carry = r.field().zero();
    for i in (0..=n).rev() {
        let cur = &poly[i] + &(&carry * r);
        if i == 0 {
            return (quot, cur);
        }
        quot[i - 1] = cur.clone();
        carry = cur;
    }
    unreachable!()
}

fn integer_coefficients(poly: &[FieldElement]) -> Vec<BigInt> {
    let qs: Vec<&BigRational> = poly
        .iter()
        .map(|c| c.as_rational().expect("rational"))
        .collect();
    let lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    qs.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    debug_assert!(n.is_positive());
    if let Some(small) = n.to_u64() {
        let mut out = Vec::new();
        let mut d = 1u64;
        while d * d <= small {
            if small % d == 0 {
                out.push(BigInt::from(d));
                if d != small / d {
                    out.push(BigInt::from(small / d));
                }
            }
            d += 1;
        }
        return out;
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1u32;
    }
    out
}

// Root finding in F_p for large p: isolate the product of distinct linear
// factors with gcd(f, x^p - x), then split it by gcd with (x + a)^((p-1)/2) - 1.

type ModPoly = Vec<u64>;

fn trim(mut a: ModPoly) -> ModPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> ModPoly {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv_lead = mod_pow(b[db], p - 2, p);
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let c = (*r.last().unwrap() as u128 * inv_lead as u128 % p as u128) as u64;
        if c != 0 {
            for (i, bi) in b.iter().enumerate() {
                let idx = k - db + i;
                let sub = (c as u128 * *bi as u128 % p as u128) as u64;
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + *x as u128 * *y as u128) % p as u128) as u64;
        }
    }
    poly_rem(&trim(out), m, p)
}

fn poly_pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> ModPoly {
    let mut acc = poly_rem(&[1], m, p);
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, m, p);
        }
        b = poly_mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> ModPoly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = mod_pow(lead, p - 2, p);
        for c in a.iter_mut() {
            *c = (*c as u128 * inv as u128 % p as u128) as u64;
        }
    }
    a
}

fn sub_poly(a: &[u64], b: &[u64], p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    trim(out)
}

fn split_linear(g: &[u64], p: u64, shift: &mut u64, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => {
            // x + c has root -c
            out.push((p - g[0]) % p);
        }
        _ => loop {
            let a = *shift;
            *shift += 1;
            let h = poly_pow_mod(&[a % p, 1], (p - 1) / 2, g, p);
            let d = poly_gcd(g, &sub_poly(&h, &[1], p), p);
            if d.len() > 1 && d.len() < g.len() {
                let q = poly_div_exact(g, &d, p);
                split_linear(&d, p, shift, out);
                split_linear(&q, p, shift, out);
                return;
            }
        },
    }
}

fn poly_div_exact(a: &[u64], b: &[u64], p: u64) -> ModPoly {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv_lead = mod_pow(b[db], p - 2, p);
    let mut q = vec![0u64; a.len() - db];
    for k in (db..r.len()).rev() {
        let c = (r[k] as u128 * inv_lead as u128 % p as u128) as u64;
        q[k - db] = c;
        for (i, bi) in b.iter().enumerate() {
            let idx = k - db + i;
            let sub = (c as u128 * *bi as u128 % p as u128) as u64;
            r[idx] = (r[idx] + p - sub) % p;
        }
    }
    trim(q)
}

fn large_prime_roots(poly: &[FieldElement], p: u64) -> Vec<FieldElement> {
    let f: ModPoly = trim(
        poly.iter()
            .map(|c| c.as_residue().expect("residue"))
            .collect(),
    );
    let mut roots = Vec::new();
    if f.first() == Some(&0) {
        roots.push(0);
    }
    let xp = poly_pow_mod(&[0, 1], p, &f, p);
    let g = poly_gcd(&f, &sub_poly(&xp, &[0, 1], p), p);
    // drop the factor x, already recorded
    let g = if g.first() == Some(&0) {
        poly_div_exact(&g, &[0, 1], p)
    } else {
        g
    };
    let mut shift = 1u64;
    split_linear(&g, p, &mut shift, &mut roots);
    roots.sort_unstable();
    roots.dedup();
    roots
        .into_iter()
        .map(|r| FieldElement::residue(r, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qpoly(cs: &[i64]) -> Vec<FieldElement> {
        cs.iter()
            .map(|&c| FieldSpec::RATIONALS.from_i64(c))
            .collect()
    }

    fn ints(v: &[FieldElement]) -> Vec<i64> {
        v.iter().map(|x| x.to_i64_symmetric().unwrap()).collect()
    }

    #[test]
    fn candidates_for_split_quadratic() {
        let f = qpoly(&[2, -3, 1]);
        let c = rational_root_candidates(&f).unwrap();
        assert_eq!(ints(&c), vec![-2, -1, 0, 1, 2]);
        let roots = poly_roots(&f).unwrap();
        assert_eq!(
            roots,
            vec![
                (FieldSpec::RATIONALS.from_i64(1), 1),
                (FieldSpec::RATIONALS.from_i64(2), 1)
            ]
        );
    }

    #[test]
    fn irrational_roots_are_not_found() {
        let f = qpoly(&[-2, 0, 1]);
        assert_eq!(
            ints(&rational_root_candidates(&f).unwrap()),
            vec![-2, -1, 0, 1, 2]
        );
        assert!(poly_roots(&f).unwrap().is_empty());
    }

    #[test]
    fn prime_field_candidates_are_exhaustive() {
        let f3 = FieldSpec::prime(3).unwrap();
        let poly = vec![f3.from_i64(1), f3.from_i64(1), f3.one()];
        let c = rational_root_candidates(&poly).unwrap();
        assert_eq!(c, vec![f3.zero(), f3.one(), f3.from_i64(2)]);
    }

    #[test]
    fn non_monic_rejected() {
        assert_eq!(
            rational_root_candidates(&qpoly(&[1, 2])),
            Err(FieldError::NonMonic)
        );
        assert_eq!(poly_roots(&[]), Err(FieldError::NonMonic));
    }

    #[test]
    fn multiplicities() {
        // x^3 (x - 2)^2 = x^5 - 4x^4 + 4x^3
        let f = qpoly(&[0, 0, 0, 4, -4, 1]);
        let r = poly_roots(&f).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!((ints(&[r[0].0.clone()])[0], r[0].1), (0, 3));
        assert_eq!((ints(&[r[1].0.clone()])[0], r[1].1), (2, 2));
    }

    #[test]
    fn large_prime_agrees_with_construction() {
        let p = 1_000_003u64;
        let f = FieldSpec::prime(p).unwrap();
        let roots = [0i64, 5, -7, 123_456, 5];
        let mut poly = vec![f.one()];
        for r in roots {
            // multiply by (x - r)
            let mut next = vec![f.zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= &(c * &f.from_i64(r));
            }
            poly = next;
        }
        // times (x^2 + 1), irreducible mod p since p = 3 mod 4
        let mut next = vec![f.zero(); poly.len() + 2];
        for (i, c) in poly.iter().enumerate() {
            next[i + 2] += c;
            next[i] += c;
        }
        let found = poly_roots(&next).unwrap();
        let got: Vec<(i64, usize)> = found
            .iter()
            .map(|(r, m)| (r.to_i64_symmetric().unwrap(), *m))
            .collect();
        assert_eq!(got, vec![(0, 1), (5, 2), (123_456, 1), (-7, 1)]);
    }
}
