//! Built-in observables generated from closed forms.
//!
//! Everything is computed at load time in the working precision, so exact
//! identities such as `1 + alpha + alpha^2 = 0` hold to machine precision.

use crate::matcore::ComplexMatrix;
use crate::povm::DiscretePovm;
use crate::scalar::{Scalar, C};
use crate::tolerance::Tolerances;

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "example4_M",
    "example4_Mprime",
    "example5_M",
    "example5_Mprime",
    "remark4_M",
    "remark4_relabel",
    "qubit_X",
    "qubit_Z",
    "trine",
];

pub fn by_name<T: Scalar>(name: &str) -> Option<DiscretePovm<T>> {
    Some(match name {
        "example4_M" => example4_m(),
        "example4_Mprime" => example4_mprime(),
        "example5_M" => example5_m(),
        "example5_Mprime" => example5_mprime(),
        "remark4_M" => remark4_m(),
        "remark4_relabel" => remark4_relabel(),
        "qubit_X" => qubit_x(),
        "qubit_Z" => qubit_z(),
        "trine" => trine(),
        _ => return None,
    })
}

fn build<T: Scalar>(labels: &[&str], effects: Vec<ComplexMatrix<T>>) -> DiscretePovm<T> {
    DiscretePovm::with_labels(
        labels.iter().map(|s| s.to_string()).collect(),
        effects,
        &Tolerances::for_scalar::<T>(),
    )
    .expect("built-in fixture is a valid POVM")
}

fn c<T: Scalar>(re: f64, im: f64) -> C<T> {
    C::new(T::of(re), T::of(im))
}

fn scaled_projector<T: Scalar>(weight: T, v: &[C<T>]) -> ComplexMatrix<T> {
    ComplexMatrix::projector(v).scale(weight)
}

/// `M_k = U_k |d><d| U_k^dag` with `U_k = |0><0| + i^k |1><1|`, `|d> = (|0> + |1>)/2`.
pub fn example4_m<T: Scalar>() -> DiscretePovm<T> {
    let half = T::of(0.5);
    let mut phase = C::new(T::one(), T::zero());
    let i = C::new(T::zero(), T::one());
    let effects = (1..=4)
        .map(|_| {
            phase *= i;
            let v = [C::new(half, T::zero()), phase * half];
            ComplexMatrix::projector(&v)
        })
        .collect();
    build(&["x1", "x2", "x3", "x4"], effects)
}

/// `(I/2, I/2)` on `C^2`.
pub fn example4_mprime<T: Scalar>() -> DiscretePovm<T> {
    let h = ComplexMatrix::identity(2).scale(T::of(0.5));
    build(&["y1", "y2"], vec![h.clone(), h])
}

fn fourier_vectors<T: Scalar>() -> [[C<T>; 3]; 3] {
    let angle = T::of(2.0) * T::PI() / T::of(3.0);
    let alpha = C::new(angle.cos(), angle.sin());
    let s = T::one() / T::of(3.0).sqrt();
    let one = C::new(T::one(), T::zero());
    let a2 = alpha * alpha;
    [
        [one * s, one * s, one * s],
        [one * s, alpha * s, a2 * s],
        [one * s, a2 * s, alpha * s],
    ]
}

/// Six rank-1 effects on `C^3`: half the standard-basis projectors and half
/// the projectors onto the discrete Fourier basis `psi_1, psi_2, psi_3`.
pub fn example5_m<T: Scalar>() -> DiscretePovm<T> {
    let half = T::of(0.5);
    let mut effects = Vec::with_capacity(6);
    for k in 0..3 {
        let mut e = ComplexMatrix::zeros(3, 3);
        e[(k, k)] = C::new(half, T::zero());
        effects.push(e);
    }
    for psi in fourier_vectors::<T>() {
        effects.push(scaled_projector(half, &psi));
    }
    build(&["x1", "x2", "x3", "x4", "x5", "x6"], effects)
}

/// `M'_j = (I - |j><j|) / 2` on `C^3`.
pub fn example5_mprime<T: Scalar>() -> DiscretePovm<T> {
    let half = T::of(0.5);
    let effects = (0..3)
        .map(|j| {
            let diag: Vec<T> = (0..3).map(|k| if k == j { T::zero() } else { half }).collect();
            ComplexMatrix::diag_real(&diag)
        })
        .collect();
    build(&["y1", "y2", "y3"], effects)
}

/// `(|0><0|, 0.1 |1><1|, 0.9 |1><1|)`.
pub fn remark4_m<T: Scalar>() -> DiscretePovm<T> {
    let effects = vec![
        ComplexMatrix::diag_real(&[T::one(), T::zero()]),
        ComplexMatrix::diag_real(&[T::zero(), T::of(0.1)]),
        ComplexMatrix::diag_real(&[T::zero(), T::of(0.9)]),
    ];
    build(&["x1", "x2", "x3"], effects)
}

/// `(|0><0|, |1><1|)`, the merge of the last two outcomes of [`remark4_m`].
pub fn remark4_relabel<T: Scalar>() -> DiscretePovm<T> {
    let effects = vec![
        ComplexMatrix::diag_real(&[T::one(), T::zero()]),
        ComplexMatrix::diag_real(&[T::zero(), T::one()]),
    ];
    build(&["x1", "x2+x3"], effects)
}

/// Projectors onto `|+>` and `|->`.
pub fn qubit_x<T: Scalar>() -> DiscretePovm<T> {
    let s = T::one() / T::SQRT_2();
    let plus = [C::new(s, T::zero()), C::new(s, T::zero())];
    let minus = [C::new(s, T::zero()), C::new(-s, T::zero())];
    build(&["+", "-"], vec![ComplexMatrix::projector(&plus), ComplexMatrix::projector(&minus)])
}

/// Projectors onto `|0>` and `|1>`.
pub fn qubit_z<T: Scalar>() -> DiscretePovm<T> {
    build(&["0", "1"], vec![
        ComplexMatrix::projector(&[c(1.0, 0.0), c(0.0, 0.0)]),
        ComplexMatrix::projector(&[c(0.0, 0.0), c(1.0, 0.0)]),
    ])
}

/// `(2/3)|v_k><v_k|` with Bloch directions 120 degrees apart in the x-z plane.
pub fn trine<T: Scalar>() -> DiscretePovm<T> {
    let w = T::of(2.0) / T::of(3.0);
    let effects = (0..3)
        .map(|k| {
            let half_angle = T::PI() * T::of_usize(k) / T::of(3.0);
            let v = [C::new(half_angle.cos(), T::zero()), C::new(half_angle.sin(), T::zero())];
            scaled_projector(w, &v)
        })
        .collect();
    build(&["t1", "t2", "t3"], effects)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_load_in_both_precisions() {
        for name in NAMES {
            assert!(by_name::<f64>(name).is_some(), "{name}");
            assert!(by_name::<f32>(name).is_some(), "{name}");
        }
        assert!(by_name::<f64>("nope").is_none());
    }

    #[test]
    fn example4_first_effect() {
        let m = example4_m::<f64>();
        let e = m.effect(0);
        assert!((e[(0, 1)] - C::new(0.0, -0.25)).norm() < 1e-16);
        assert!((e[(1, 0)] - C::new(0.0, 0.25)).norm() < 1e-16);
        assert!((e[(0, 0)].re - 0.25).abs() < 1e-16);
    }

    #[test]
    fn example5_fourier_diagonals() {
        let m = example5_m::<f64>();
        for k in 3..6 {
            for j in 0..3 {
                assert!((m.effect(k)[(j, j)].re - 1.0 / 6.0).abs() < 1e-15);
            }
        }
    }
}
