//! Three-qubit states and observables in the computational basis.
//!
//! Tensor order is Alice ⊗ Bob ⊗ Charlie with `|H⟩ = |0⟩` and `|V⟩ = |1⟩`, so
//! the amplitude of `|abc⟩` lives at index `4a + 2b + c`.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use crate::error::{check_range, Error, Result};
use crate::math::{sqrt, SQRT_2};

pub type StateVector = [Complex64; 8];
pub type Matrix8 = [[Complex64; 8]; 8];
type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

const HERMITIAN_TOL: f64 = 1e-12;

/// `|φ_i⟩`, `i ∈ 1..=8`, of the GHZ basis.
///
/// Odd `i` are the `+` superpositions and even `i` the `-` ones of
/// `HHH/VVV`, `VHH/HVV`, `HVH/VHV` and `HHV/VVH` respectively.
pub fn ghz_basis_state(i: usize) -> Result<StateVector> {
    if !(1..=8).contains(&i) {
        return Err(Error::BasisIndex(i));
    }
    // Computational index of the first term; the second term is its complement.
    const FIRST: [usize; 4] = [0b000, 0b100, 0b010, 0b001];
    let first = FIRST[(i - 1) / 2];
    let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
    let amp = 1.0 / SQRT_2;
    let mut v = [ZERO; 8];
    v[first] = Complex64::new(amp, 0.0);
    v[first ^ 0b111] = Complex64::new(sign * amp, 0.0);
    Ok(v)
}

/// A three-qubit density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix8 {
    entries: Matrix8,
}

impl DensityMatrix8 {
    /// Wraps `entries` after checking Hermiticity, unit trace and positivity.
    pub fn new(entries: Matrix8) -> Result<Self> {
        let rho = Self { entries };
        if !rho.is_hermitian(HERMITIAN_TOL)
            || (rho.trace() - 1.0).abs() > HERMITIAN_TOL
            || rho.eigenvalues().iter().any(|&l| l < -1e-10)
        {
            return Err(Error::OutOfRange {
                name: "density matrix",
                value: rho.trace(),
                min: 1.0,
                max: 1.0,
            });
        }
        Ok(rho)
    }

    pub fn pure(psi: &StateVector) -> Self {
        let mut entries = [[ZERO; 8]; 8];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = psi[i] * psi[j].conj();
            }
        }
        Self { entries }
    }

    pub fn entries(&self) -> &Matrix8 {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..8).map(|i| self.entries[i][i].re).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..8).all(|i| {
            (0..8).all(|j| {
                let d = self.entries[i][j] - self.entries[j][i].conj();
                d.re.abs() <= tol && d.im.abs() <= tol
            })
        })
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> f64 {
        let mut acc = ZERO;
        for i in 0..8 {
            for j in 0..8 {
                acc += psi[i].conj() * self.entries[i][j] * psi[j];
            }
        }
        acc.re
    }

    /// `tr(ρ·O)`.
    pub fn trace_with(&self, op: &Matrix8) -> f64 {
        let mut acc = ZERO;
        for i in 0..8 {
            for j in 0..8 {
                acc += self.entries[i][j] * op[j][i];
            }
        }
        acc.re
    }

    /// Eigenvalues in ascending order.
    ///
    /// `H = A + iB` is diagonalised through the real symmetric embedding
    /// `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every
    /// eigenvalue doubled.
    pub fn eigenvalues(&self) -> [f64; 8] {
        let mut m = [[0.0; 16]; 16];
        for i in 0..8 {
            for j in 0..8 {
                let z = self.entries[i][j];
                m[i][j] = z.re;
                m[i + 8][j + 8] = z.re;
                m[i][j + 8] = -z.im;
                m[i + 8][j] = z.im;
            }
        }
        let mut doubled = jacobi_eigenvalues(m);
        doubled.sort_by(f64::total_cmp);
        let mut out = [0.0; 8];
        for (k, o) in out.iter_mut().enumerate() {
            *o = 0.5 * (doubled[2 * k] + doubled[2 * k + 1]);
        }
        out
    }
}

/// Cyclic Jacobi rotations on a real symmetric matrix.
fn jacobi_eigenvalues<const N: usize>(mut a: [[f64; N]; N]) -> [f64; N] {
    for _sweep in 0..100 {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut out = [0.0; N];
    for (i, o) in out.iter_mut().enumerate() {
        *o = a[i][i];
    }
    out
}

/// White-noise GHZ state `F|φ1⟩⟨φ1| + (1-F)/8·I`, conditioned on all three
/// photons being detected.
pub fn noisy_state(fidelity: f64) -> Result<DensityMatrix8> {
    check_range("fidelity", fidelity, 0.0, 1.0)?;
    let phi1 = ghz_basis_state(1)?;
    let mut rho = DensityMatrix8::pure(&phi1);
    let noise = (1.0 - fidelity) / 8.0;
    for (i, row) in rho.entries.iter_mut().enumerate() {
        for e in row.iter_mut() {
            *e *= fidelity;
        }
        row[i] += Complex64::new(noise, 0.0);
    }
    Ok(rho)
}

/// Product state `|s_A s_B s_C⟩` of σx eigenvectors; `true` selects `|-⟩`.
pub fn x_basis_state(bits: [bool; 3]) -> StateVector {
    let mut v = [ZERO; 8];
    let norm = 1.0 / (2.0 * SQRT_2);
    for (k, amp) in v.iter_mut().enumerate() {
        let mut sign = 1.0;
        for (party, &minus) in bits.iter().enumerate() {
            let computational_one = (k >> (2 - party)) & 1 == 1;
            if minus && computational_one {
                sign = -sign;
            }
        }
        *amp = Complex64::new(sign * norm, 0.0);
    }
    v
}

/// `P(abc | all click)` for the σx measurement, indexed by `4a + 2b + c` with
/// bit 0 for outcome `+1` and bit 1 for `-1`.
pub fn click_outcome_probs(fidelity: f64) -> Result<[f64; 8]> {
    let rho = noisy_state(fidelity)?;
    let mut p = [0.0; 8];
    for (k, pk) in p.iter_mut().enumerate() {
        let bits = [k & 4 != 0, k & 2 != 0, k & 1 != 0];
        *pk = rho.expectation(&x_basis_state(bits));
    }
    Ok(p)
}

/// A single-qubit ±1-valued observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable(Matrix2);

impl Observable {
    /// Accepts `m` only if it is Hermitian and squares to the identity.
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let close =
            |a: Complex64, b: Complex64| (a - b).norm_sqr() <= HERMITIAN_TOL * HERMITIAN_TOL;
        let hermitian = (0..2).all(|i| (0..2).all(|j| close(m[i][j], m[j][i].conj())));
        let mut square = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                square[i][j] = m[i][0] * m[0][j] + m[i][1] * m[1][j];
            }
        }
        let involution = close(square[0][0], ONE)
            && close(square[1][1], ONE)
            && close(square[0][1], ZERO)
            && close(square[1][0], ZERO);
        if hermitian && involution {
            Ok(Self(m))
        } else {
            Err(Error::InvalidObservable)
        }
    }

    /// `cos θ·σx + sin θ·σy`.
    pub fn equatorial(theta: f64) -> Self {
        let (s, c) = libm::sincos(theta);
        let off = Complex64::new(c, -s);
        Self([[ZERO, off], [off.conj(), ZERO]])
    }

    pub fn sigma_x() -> Self {
        Self([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn sigma_y() -> Self {
        Self([[ZERO, -I], [I, ZERO]])
    }

    pub fn negated(self) -> Self {
        let m = self.0;
        Self([[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]])
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AliceBasis {
    /// σx
    A1,
    /// -σy
    A2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BobBasis {
    /// σx
    B1,
    /// (σy - σx)/√2
    B2,
    /// (σx + σy)/√2
    B3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharlieBasis {
    /// σx
    C1,
    /// -σy
    C2,
}

impl AliceBasis {
    pub fn observable(self) -> Observable {
        match self {
            AliceBasis::A1 => Observable::sigma_x(),
            AliceBasis::A2 => Observable::sigma_y().negated(),
        }
    }
}

impl BobBasis {
    pub fn observable(self) -> Observable {
        use core::f64::consts::FRAC_PI_4;
        match self {
            BobBasis::B1 => Observable::sigma_x(),
            BobBasis::B2 => Observable::equatorial(3.0 * FRAC_PI_4),
            BobBasis::B3 => Observable::equatorial(FRAC_PI_4),
        }
    }
}

impl CharlieBasis {
    pub fn observable(self) -> Observable {
        match self {
            CharlieBasis::C1 => Observable::sigma_x(),
            CharlieBasis::C2 => Observable::sigma_y().negated(),
        }
    }
}

/// One observable per party.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    pub alice: Observable,
    pub bob: Observable,
    pub charlie: Observable,
}

impl MeasurementSetting {
    pub fn new(alice: AliceBasis, bob: BobBasis, charlie: CharlieBasis) -> Self {
        Self {
            alice: alice.observable(),
            bob: bob.observable(),
            charlie: charlie.observable(),
        }
    }

    /// `A ⊗ B ⊗ C` as an 8×8 matrix.
    pub fn tensor(&self) -> Matrix8 {
        let (a, b, c) = (self.alice.0, self.bob.0, self.charlie.0);
        let mut out = [[ZERO; 8]; 8];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i >> 2][j >> 2] * b[(i >> 1) & 1][(j >> 1) & 1] * c[i & 1][j & 1];
            }
        }
        out
    }
}

/// `⟨A⊗B⊗C⟩ = tr(ρ·A⊗B⊗C)`.
pub fn correlator(rho: &DensityMatrix8, setting: &MeasurementSetting) -> f64 {
    rho.trace_with(&setting.tensor())
}

/// Svetlichny polynomial of the white-noise GHZ state at unit detection
/// efficiency. Values above 4 certify genuine tripartite nonlocality.
pub fn svetlichny_polynomial(fidelity: f64) -> Result<f64> {
    use AliceBasis::*;
    use BobBasis::*;
    use CharlieBasis::*;
    const TERMS: [(AliceBasis, BobBasis, CharlieBasis, f64); 8] = [
        (A1, B2, C2, 1.0),
        (A1, B3, C1, 1.0),
        (A2, B2, C1, 1.0),
        (A2, B3, C2, -1.0),
        (A2, B3, C1, 1.0),
        (A2, B2, C2, 1.0),
        (A1, B3, C2, 1.0),
        (A1, B2, C1, -1.0),
    ];
    let rho = noisy_state(fidelity)?;
    Ok(TERMS
        .iter()
        .map(|&(a, b, c, sign)| sign * correlator(&rho, &MeasurementSetting::new(a, b, c)))
        .sum())
}
