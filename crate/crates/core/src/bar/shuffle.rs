use std::sync::Arc;

use super::{BarChain, BarError};
use crate::exactlinalg::IntScalar;
use crate::groups::FiniteGroup;

/// Shuffle (cross) product `a x b` in `G x H`, with `(g, h)` at index `g * |H| + h`.
pub fn shuffle_product<T: IntScalar>(a: &BarChain<T>, b: &BarChain<T>) -> Result<BarChain<T>, BarError> {
    let product = Arc::new(a.group().direct_product(b.group()));
    shuffle_product_into(a, b, &product)
}

/// As [`shuffle_product`], into an already built `G x H` (only its order is checked).
pub fn shuffle_product_into<T: IntScalar>(
    a: &BarChain<T>,
    b: &BarChain<T>,
    product: &Arc<FiniteGroup>,
) -> Result<BarChain<T>, BarError> {
    let m = b.group().order() as u32;
    if product.order() != a.group().order() * b.group().order() {
        return Err(BarError::GroupMismatch);
    }
    let (p, q) = (a.degree(), b.degree());
    let shuffles = shuffles(p, q);
    let mut out = BarChain::zero(product.clone(), p + q);
    for (ca, va) in a.terms() {
        for (cb, vb) in b.terms() {
            let coeff = va.clone() * vb.clone();
            for (positions, sign) in &shuffles {
                let mut cell = Vec::with_capacity(p + q);
                let (mut i, mut j) = (0, 0);
                for slot in 0..p + q {
                    if positions.get(i) == Some(&slot) {
                        cell.push(ca[i] * m);
                        i += 1;
                    } else {
                        cell.push(cb[j]);
                        j += 1;
                    }
                }
                let c = if *sign > 0 { coeff.clone() } else { -coeff.clone() };
                out.add_unchecked(cell, c);
            }
        }
    }
    Ok(out)
}

/// `(p, q)`-shuffles as the increasing slot positions of the first factor, with signs.
fn shuffles(p: usize, q: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(start: usize, total: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..total {
            cur.push(s);
            rec(s + 1, total, k, cur, out);
            cur.pop();
        }
    }
    let mut sets = Vec::new();
    rec(0, p + q, p, &mut Vec::new(), &mut sets);
    sets.into_iter()
        .map(|pos| {
            let moves: usize = pos.iter().enumerate().map(|(i, &s)| s - i).sum();
            let sign = if moves % 2 == 0 { 1 } else { -1 };
            (pos, sign)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteAbelianGroup;
    use num_bigint::BigInt;

    type Chain = BarChain<BigInt>;

    fn zn(n: u64) -> Arc<FiniteGroup> {
        Arc::new(FiniteAbelianGroup::cyclic(n).to_group())
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(1, 1).len(), 2);
        assert_eq!(shuffles(2, 1).len(), 3);
        assert_eq!(shuffles(2, 2).len(), 6);
        assert_eq!(shuffles(0, 3), vec![(vec![], 1)]);
    }

    #[test]
    fn one_by_one_is_a_c_symbol() {
        let (g, h) = (zn(2), zn(3));
        let x = shuffle_product(
            &Chain::cell(g.clone(), &[1], BigInt::from(1)).unwrap(),
            &Chain::cell(h.clone(), &[2], BigInt::from(1)).unwrap(),
        )
        .unwrap();
        // (1,0) has index 3, (0,2) has index 2
        let expected = Chain::c_symbol(x.group().clone(), &[3, 2]).unwrap();
        assert_eq!(x, expected);
    }

    #[test]
    fn unit_times_chain_is_its_image() {
        let (g, h) = (zn(2), zn(3));
        let b = Chain::cell(h.clone(), &[1, 2], BigInt::from(5)).unwrap();
        let x = shuffle_product(&Chain::unit(g), &b).unwrap();
        assert_eq!(x.terms().len(), 1);
        assert_eq!(x.coefficient(&[1, 2]), BigInt::from(5));
    }

    #[test]
    fn symbol_times_symbol_is_concatenated_symbol() {
        let (g, h) = (Arc::new(FiniteAbelianGroup::new(vec![2, 2]).unwrap().to_group()), zn(4));
        let a = Chain::c_symbol(g.clone(), &[1, 2]).unwrap();
        let b = Chain::c_symbol(h.clone(), &[1]).unwrap();
        let x = shuffle_product(&a, &b).unwrap();
        let m = h.order() as u32;
        let expected = Chain::c_symbol(x.group().clone(), &[m, 2 * m, 1]).unwrap();
        assert_eq!(x, expected);
        assert!(x.is_cycle());
    }
}
