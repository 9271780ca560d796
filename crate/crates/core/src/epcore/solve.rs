use num_traits::Zero;

use super::{stabilization_window, EpSeq, EpSet, Periodic};
use crate::exactnum::{Matrix, Rational};

/// Result of [`ep_linear_solve`].
///
/// Unknowns are `d_0..d_{k-1}`, one per condition. The combination
/// `sum_k d_k rho_k` restricted to each condition's domain must be finitely
/// supported; the finite correction is then `c_i = -sum_k d_k rho_k(i)`.
#[derive(Clone, Debug)]
pub struct EpLinearSolution {
    /// `(N*, p*)` of the masked rows.
    pub window: (usize, usize),
    /// Independent linear constraints on `d`, in reduced row echelon form.
    pub constraints: Vec<Vec<Rational>>,
    /// Basis of the admissible `d`.
    pub admissible: Vec<Vec<Rational>>,
    rows: Vec<EpSeq>,
}

impl EpLinearSolution {
    pub fn unknowns(&self) -> usize {
        self.rows.len()
    }

    pub fn is_admissible(&self, d: &[Rational]) -> bool {
        self.constraints.iter().all(|c| crate::exactnum::dot(c, d).is_zero())
    }

    /// Nonzero correction coordinates `(i, c_i)` for an admissible `d`; all
    /// lie below `N*`.
    pub fn correction(&self, d: &[Rational]) -> Vec<(usize, Rational)> {
        let comb = EpSeq::combination(&self.rows, d);
        (0..self.window.0)
            .filter_map(|i| {
                let v = comb.value(i);
                (!v.is_zero()).then(|| (i, -v))
            })
            .collect()
    }
}

/// Solves for the coefficient vectors `d` for which `sum_k d_k rho_k` is
/// finitely supported on the given domains. Each condition is a pair
/// `(rho_k, D_k)` and contributes `rho_k` on `D_k` only.
pub fn ep_linear_solve(conditions: &[(EpSeq, EpSet)]) -> EpLinearSolution {
    let rows: Vec<EpSeq> = conditions.iter().map(|(r, d)| r.mask(d)).collect();
    let window = stabilization_window(rows.iter().map(|r| r as &dyn Periodic));
    let k = rows.len();
    let (n0, p) = window;
    let m = Matrix::from_rows(k, (n0..n0 + p).map(|i| rows.iter().map(|r| r.value(i)).collect()).collect());
    let (r, piv) = m.rref();
    let constraints = (0..piv.len()).map(|i| r.row(i).to_vec()).collect();
    let admissible = if k == 0 { Vec::new() } else { m.kernel() };
    EpLinearSolution { window, constraints, admissible, rows }
}

/// The image of `x -> (sum_{i in domain} psi_u(i) x_i)_u` over finitely
/// supported `x` is spanned by the columns at the returned indices:
/// `domain ∩ [0, N* + p*)` for the joint window of rows and domain.
pub fn image_columns(rows: &[EpSeq], domain: &EpSet) -> Vec<(usize, Vec<Rational>)> {
    let (n0, p) = stabilization_window(
        rows.iter().map(|r| r as &dyn Periodic).chain(std::iter::once(domain as &dyn Periodic)),
    );
    domain
        .members_in(0, n0 + p)
        .into_iter()
        .map(|i| (i, rows.iter().map(|r| r.value(i)).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q;

    #[test]
    fn constant_row_forces_zero() {
        let sol = ep_linear_solve(&[(EpSeq::constant(q(1)), EpSet::naturals())]);
        assert_eq!(sol.constraints, vec![vec![q(1)]]);
        assert!(sol.admissible.is_empty());
    }

    #[test]
    fn zero_row_is_free() {
        let sol = ep_linear_solve(&[(EpSeq::zero(), EpSet::naturals())]);
        assert!(sol.constraints.is_empty());
        assert_eq!(sol.admissible, vec![vec![q(1)]]);
        assert!(sol.correction(&[q(1)]).is_empty());
    }

    #[test]
    fn alternating_rows() {
        let a = EpSeq::new(vec![], vec![q(1), q(0)]).unwrap();
        let b = EpSeq::new(vec![], vec![q(0), q(1)]).unwrap();
        let sol = ep_linear_solve(&[(a, EpSet::naturals()), (b, EpSet::naturals())]);
        assert_eq!(sol.constraints, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    }

    #[test]
    fn finite_difference_gives_correction() {
        // rho_0 = 1 everywhere, rho_1 = 1 from index 2 on: d = (1, -1) leaves
        // a finite remainder at indices 0 and 1.
        let a = EpSeq::constant(q(1));
        let b = EpSeq::new(vec![q(0), q(0)], vec![q(1)]).unwrap();
        let sol = ep_linear_solve(&[(a, EpSet::naturals()), (b, EpSet::naturals())]);
        assert_eq!(sol.admissible.len(), 1);
        let d = &sol.admissible[0];
        let c = sol.correction(d);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, -&d[0]);
    }

    #[test]
    fn image_of_summing_functional() {
        let cols = image_columns(&[EpSeq::constant(q(1))], &EpSet::residue_class(2, 1));
        assert_eq!(cols, vec![(1, vec![q(1)])]);
    }
}
