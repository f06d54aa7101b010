//! Splitting a binary solution of `P(k)` into `k` binary solutions of `P(1)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::scalar::{int, Scalar};
use crate::solution::SolutionVector;
use crate::solver::{solve_fixed, Fixing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// In extraction order.
    pub pieces: Vec<SolutionVector>,
    /// Largest piece cost.
    pub delta: Scalar,
}

/// Peels off one vertex of `P(1)` restricted to the remaining support at a
/// time; the last piece is whatever remains.
pub fn decompose(inst: &Instance, xbar: &SolutionVector, k: i64) -> Result<Decomposition> {
    if k < 1 {
        return Err(Error::Precondition(format!("k = {k} must be positive")));
    }
    if !xbar.is_binary() {
        return Err(Error::Precondition("input is not binary".into()));
    }
    if !inst.is_feasible(xbar, &int(k)) {
        return Err(Error::Precondition(format!("A x != {k} b")));
    }

    let mut rest = xbar.clone();
    let mut pieces = Vec::with_capacity(k as usize);
    for level in (2..=k).rev() {
        let fixings: Vec<Fixing> = rest
            .values()
            .iter()
            .map(|v| if v.is_one() { Fixing::Free } else { Fixing::Zero })
            .collect();
        let Some((piece, _)) = solve_fixed(inst, &int(1), &fixings)? else {
            return Err(Error::Internal(format!(
                "no unit solution inside the support of a level-{level} solution"
            )));
        };
        if !piece.is_binary() {
            return Err(Error::Internal(format!("restricted P(1) vertex {piece} is not binary")));
        }
        rest = rest.checked_sub(&piece)?;
        pieces.push(piece);
    }
    pieces.push(rest);

    let delta = pieces
        .iter()
        .map(|p| inst.cost_of(p))
        .max()
        .expect("k >= 1 pieces");
    Ok(Decomposition { pieces, delta })
}

/// Every piece binary with `A x^i = b`, and the pieces sum to `xbar`.
pub fn verify_decomposition(inst: &Instance, xbar: &SolutionVector, d: &Decomposition) -> bool {
    let one = int(1);
    if d.pieces.is_empty() || !d.pieces.iter().all(|p| p.is_binary() && inst.is_feasible(p, &one)) {
        return false;
    }
    let n = inst.n();
    let mut sum = vec![Scalar::zero(); n];
    for p in &d.pieces {
        if p.len() != n {
            return false;
        }
        for (s, v) in sum.iter_mut().zip(p.values()) {
            *s += v;
        }
    }
    sum == xbar.values()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::solver::enumerate_binary_feasible;

    fn sorted(mut v: Vec<SolutionVector>) -> Vec<SolutionVector> {
        v.sort();
        v
    }

    #[test]
    fn d1_split() {
        let d1 = fixtures::d1();
        let xbar = SolutionVector::from_bits(&[true, true]);
        let d = decompose(&d1, &xbar, 2).unwrap();
        assert_eq!(
            sorted(d.pieces.clone()),
            sorted(vec![
                SolutionVector::from_support(2, &[0]),
                SolutionVector::from_support(2, &[1])
            ])
        );
        assert_eq!(d.delta, int(2));
        assert!(verify_decomposition(&d1, &xbar, &d));
    }

    #[test]
    fn base_case_is_identity() {
        let d2 = fixtures::d2();
        for x in enumerate_binary_feasible(&d2, 1).unwrap() {
            let d = decompose(&d2, &x, 1).unwrap();
            assert_eq!(d.pieces, vec![x.clone()]);
        }
    }

    #[test]
    fn d4_three_units() {
        let d4 = fixtures::d4();
        let xbar = SolutionVector::from_bits(&[true, true, true]);
        let d = decompose(&d4, &xbar, 3).unwrap();
        assert_eq!(
            sorted(d.pieces),
            sorted((0..3).map(|j| SolutionVector::from_support(3, &[j])).collect())
        );
    }

    #[test]
    fn rejects_bad_input() {
        let d1 = fixtures::d1();
        let xbar = SolutionVector::from_bits(&[true, false]);
        assert!(matches!(decompose(&d1, &xbar, 2), Err(Error::Precondition(_))));
        let frac = SolutionVector::new(vec![crate::scalar::ratio(1, 2), crate::scalar::ratio(1, 2)]).unwrap();
        assert!(matches!(decompose(&d1, &frac, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn verify_rejects_wrong_pieces() {
        let d1 = fixtures::d1();
        let xbar = SolutionVector::from_bits(&[true, true]);
        let e1 = SolutionVector::from_support(2, &[0]);
        let twice = Decomposition {
            pieces: vec![e1.clone(), e1],
            delta: int(1),
        };
        assert!(!verify_decomposition(&d1, &xbar, &twice));
        let whole = Decomposition {
            pieces: vec![xbar.clone()],
            delta: int(3),
        };
        assert!(!verify_decomposition(&d1, &xbar, &whole));
    }
}
