//! Double description method over integer vectors.
//!
//! Computes the generators of the cone `{x : a_k . x >= 0 for all k}` as a
//! lineality basis plus extreme rays, using the combinatorial adjacency test.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub(crate) struct Ray {
    pub v: Vec<BigInt>,
    /// Indices of processed constraints tight on this ray.
    pub zero: FixedBitSet,
}

pub(crate) struct Cone {
    pub lineality: Vec<Vec<BigInt>>,
    pub rays: Vec<Ray>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// `s * u - t * w`, reduced by the gcd of its entries.
fn combine(s: &BigInt, u: &[BigInt], t: &BigInt, w: &[BigInt]) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = u.iter().zip(w).map(|(x, y)| s * x - t * y).collect();
    normalize(&mut v);
    v
}

pub(crate) fn normalize(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

pub(crate) fn double_description(constraints: &[Vec<BigInt>], d: usize) -> Cone {
    let m = constraints.len();
    let mut lineality: Vec<Vec<BigInt>> = (0..d)
        .map(|i| {
            let mut e = vec![BigInt::zero(); d];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, a) in constraints.iter().enumerate() {
        if let Some(idx) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lineality.swap_remove(idx);
            let mut al = dot(a, &l);
            if al.is_negative() {
                for x in l.iter_mut() {
                    *x = -&*x;
                }
                al = -al;
            }
            for other in lineality.iter_mut() {
                let c = dot(a, other);
                if !c.is_zero() {
                    *other = combine(&al, other, &c, &l);
                }
            }
            for r in rays.iter_mut() {
                let c = dot(a, &r.v);
                if !c.is_zero() {
                    r.v = combine(&al, &r.v, &c, &l);
                }
                r.zero.insert(k);
            }
            let mut zero = FixedBitSet::with_capacity(m);
            zero.insert_range(..k);
            rays.push(Ray { v: l, zero });
            continue;
        }

        let signs: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| signs[i].is_positive())
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| signs[i].is_negative())
            .collect();
        if neg.is_empty() {
            for (r, s) in rays.iter_mut().zip(&signs) {
                if s.is_zero() {
                    r.zero.insert(k);
                }
            }
            continue;
        }

        let min_common = (d as isize) - 2 - (lineality.len() as isize);
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zero.clone();
                common.intersect_with(&rays[q].zero);
                if (common.count_ones(..) as isize) < min_common {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(j, r)| j != p && j != q && common.is_subset(&r.zero));
                if blocked {
                    continue;
                }
                let v = combine(&signs[p], &rays[q].v, &signs[q], &rays[p].v);
                common.insert(k);
                fresh.push(Ray { v, zero: common });
            }
        }

        let mut kept = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, s) in rays.into_iter().zip(signs) {
            if s.is_negative() {
                continue;
            }
            if s.is_zero() {
                r.zero.insert(k);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }

    Cone { lineality, rays }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(r: &[&[i64]]) -> Vec<Vec<BigInt>> {
        r.iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn orthant_has_unit_rays() {
        let cone = double_description(&rows(&[&[1, 0], &[0, 1]]), 2);
        assert!(cone.lineality.is_empty());
        let mut vs: Vec<Vec<BigInt>> = cone.rays.into_iter().map(|r| r.v).collect();
        vs.sort();
        assert_eq!(vs, rows(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn square_cone_has_four_rays() {
        // homogenized unit square: x0 >= 0, x >= 0, y >= 0, x <= x0, y <= x0
        let c = rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, -1, 0], &[1, 0, -1]]);
        let cone = double_description(&c, 3);
        assert!(cone.lineality.is_empty());
        assert_eq!(cone.rays.len(), 4);
    }

    #[test]
    fn halfplane_keeps_lineality() {
        let cone = double_description(&rows(&[&[1, 0]]), 2);
        assert_eq!(cone.lineality.len(), 1);
        assert_eq!(cone.rays.len(), 1);
    }
}
