//! Fourier coefficients of measures on `A^W` with `A = Z/A`.
//!
//! Floating point throughout: this layer cross-checks the exact procedures.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Domain, LatticePoint};
use crate::measure::{Measure, SignedMeasure};
use crate::util::{advance, checked_cells, encode, to_f64};

pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    support: Domain,
    exponents: Vec<u32>,
}

impl Character {
    pub fn new(support: Domain, exponents: Vec<u32>, alphabet: u32) -> Result<Self> {
        if support.len() != exponents.len() {
            return Err(Error::Invalid("one exponent per support point".into()));
        }
        if let Some(e) = exponents.iter().find(|&&e| e == 0 || e >= alphabet) {
            return Err(Error::Invalid(format!("exponent {e} not a nonzero element of Z/{alphabet}")));
        }
        Ok(Character { support, exponents })
    }

    pub fn trivial(dim: usize) -> Self {
        Character { support: Domain::new(dim, vec![]).expect("empty domain"), exponents: vec![] }
    }

    /// The character of a full exponent vector over `window`; zero entries drop out.
    pub fn from_window(window: &Domain, exps: &[u32]) -> Self {
        let (pts, es): (Vec<LatticePoint>, Vec<u32>) = window
            .points()
            .iter()
            .zip(exps)
            .filter(|(_, &e)| e != 0)
            .map(|(p, &e)| (p.clone(), e))
            .unzip();
        Character { support: Domain::new(window.dim(), pts).expect("subset of a domain"), exponents: es }
    }

    pub fn support(&self) -> &Domain {
        &self.support
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `"x,y;x,y:e1,e2"`.
    pub fn key(&self) -> String {
        let pts: Vec<String> = self
            .support
            .points()
            .iter()
            .map(|p| p.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        let es: Vec<String> = self.exponents.iter().map(|e| e.to_string()).collect();
        format!("{}:{}", pts.join(";"), es.join(","))
    }

    /// `χ(b)` for a word `b` over `window ⊇ support`.
    pub fn eval(&self, window: &Domain, b: &[u32], alphabet: u32) -> Result<Complex64> {
        let pos = self.support.positions_in(window)?;
        let s: u64 = pos.iter().zip(&self.exponents).map(|(&i, &e)| e as u64 * b[i] as u64).sum();
        Ok(Complex64::from_polar(1.0, 2.0 * PI * (s % alphabet as u64) as f64 / alphabet as f64))
    }
}

/// `μ̂(χ) = Σ_b μ[b] conj(χ(b))`.
pub fn fourier_coeff(mu: &SignedMeasure, chi: &Character) -> Result<Complex64> {
    if !chi.support.is_subset_of(mu.domain()) {
        return Err(Error::NotSubset(chi.support.to_string()));
    }
    if chi.is_trivial() {
        return Ok(Complex64::new(to_f64(&mu.total()), 0.0));
    }
    let marg = mu.marginal(&chi.support)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, m) in marg.support() {
        acc += chi.eval(&chi.support, &w, mu.alphabet())?.conj() * to_f64(m);
    }
    Ok(acc)
}

/// Coefficients over all of `Â^W`, indexed like words (exponent vectors).
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    window: Domain,
    alphabet: u32,
    coefficients: Vec<Complex64>,
}

/// Real masses recovered by the inverse transform.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTable {
    pub domain: Domain,
    pub alphabet: u32,
    pub masses: Vec<f64>,
}

impl RealTable {
    pub fn min_mass(&self) -> f64 {
        self.masses.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

fn dft_axes(data: &mut [Complex64], alphabet: u32, len: usize, sign: f64) {
    let a = alphabet as usize;
    let roots: Vec<Complex64> = (0..a).map(|t| Complex64::from_polar(1.0, sign * 2.0 * PI * t as f64 / a as f64)).collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); a];
    for axis in 0..len {
        let stride = a.pow((len - 1 - axis) as u32);
        let block = stride * a;
        for start in (0..data.len()).step_by(block) {
            for off in 0..stride {
                let base = start + off;
                for (e, slot) in buf.iter_mut().enumerate() {
                    *slot = (0..a).map(|b| data[base + b * stride] * roots[(e * b) % a]).sum();
                }
                for (e, v) in buf.iter().enumerate() {
                    data[base + e * stride] = *v;
                }
            }
        }
    }
}

impl CharacterTable {
    pub fn window(&self) -> &Domain {
        &self.window
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn at_exponents(&self, exps: &[u32]) -> Complex64 {
        self.coefficients[encode(exps, self.alphabet)]
    }

    pub fn coefficient(&self, chi: &Character) -> Result<Complex64> {
        let pos = chi.support.positions_in(&self.window)?;
        let mut exps = vec![0u32; self.window.len()];
        for (&i, &e) in pos.iter().zip(&chi.exponents) {
            exps[i] = e;
        }
        Ok(self.at_exponents(&exps))
    }

    /// Coefficients with modulus above `1e-12`, keyed by character.
    pub fn to_json(&self) -> TableJson {
        let mut coefficients = BTreeMap::new();
        let mut exps = vec![0u32; self.window.len()];
        for c in &self.coefficients {
            if c.norm() > 1e-12 {
                coefficients.insert(Character::from_window(&self.window, &exps).key(), [c.re, c.im]);
            }
            advance(&mut exps, self.alphabet);
        }
        TableJson { window: self.window.clone(), alphabet: self.alphabet, coefficients }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableJson {
    pub window: Domain,
    pub alphabet: u32,
    pub coefficients: BTreeMap<String, [f64; 2]>,
}

/// Full table by separable per-site transforms.
pub fn fourier_transform(mu: &SignedMeasure, cap: usize) -> Result<CharacterTable> {
    checked_cells(mu.alphabet(), mu.domain().len(), cap)?;
    let mut data: Vec<Complex64> = mu.masses().iter().map(|m| Complex64::new(to_f64(m), 0.0)).collect();
    dft_axes(&mut data, mu.alphabet(), mu.domain().len(), -1.0);
    Ok(CharacterTable { window: mu.domain().clone(), alphabet: mu.alphabet(), coefficients: data })
}

/// `μ[a] = A^{-|W|} Σ_χ μ̂(χ) χ(a)`; imaginary residue above `1e-9` is an error and
/// values within `1e-9` below zero are clamped.
pub fn inverse_fourier(t: &CharacterTable) -> Result<RealTable> {
    let mut data = t.coefficients.clone();
    dft_axes(&mut data, t.alphabet, t.window.len(), 1.0);
    let scale = 1.0 / data.len() as f64;
    let mut masses = Vec::with_capacity(data.len());
    for c in data {
        let v = c * scale;
        if v.im.abs() > TOLERANCE {
            return Err(Error::Invalid(format!("inverse transform is not real: imaginary part {}", v.im)));
        }
        masses.push(if v.re < 0.0 && v.re > -TOLERANCE { 0.0 } else { v.re });
    }
    Ok(RealTable { domain: t.window.clone(), alphabet: t.alphabet, masses })
}

#[derive(Debug, Clone, PartialEq)]
pub enum FourierCheck {
    Pass,
    Fail { character: Character, shift: Option<LatticePoint> },
}

impl FourierCheck {
    pub fn passed(&self) -> bool {
        matches!(self, FourierCheck::Pass)
    }
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= TOLERANCE
}

/// `⟨μ,χ⟩ = ⟨μ,χ.k⟩` whenever both supports lie in the domain.
pub fn check_stationarity_fourier(mu: &SignedMeasure, cap: usize) -> Result<FourierCheck> {
    let table = fourier_transform(mu, cap)?;
    let w = mu.domain();
    let a = mu.alphabet();
    for k in w.positive_differences() {
        let v = w.overlap_with_shift(&k);
        let here = v.positions_in(w)?;
        let there = v.shift(&k)?.positions_in(w)?;
        let mut e = vec![0u32; v.len()];
        while advance(&mut e, a) {
            let mut x = vec![0u32; w.len()];
            let mut y = vec![0u32; w.len()];
            for (j, &ej) in e.iter().enumerate() {
                x[here[j]] = ej;
                y[there[j]] = ej;
            }
            if !close(table.at_exponents(&x), table.at_exponents(&y)) {
                return Ok(FourierCheck::Fail { character: Character::from_window(w, &x), shift: Some(k) });
            }
        }
    }
    Ok(FourierCheck::Pass)
}

/// Compares the characters supported in `U` between `μ_U` and `μ_W`.
pub fn check_extension_fourier(mu_u: &Measure, mu_w: &Measure, cap: usize) -> Result<FourierCheck> {
    if mu_u.alphabet() != mu_w.alphabet() {
        return Err(Error::Mismatch("alphabets differ".into()));
    }
    let pos = mu_u.domain().positions_in(mu_w.domain())?;
    let tu = fourier_transform(mu_u, cap)?;
    let tw = fourier_transform(mu_w, cap)?;
    let mut e = vec![0u32; mu_u.domain().len()];
    loop {
        let mut x = vec![0u32; mu_w.domain().len()];
        for (j, &ej) in e.iter().enumerate() {
            x[pos[j]] = ej;
        }
        if !close(tu.at_exponents(&e), tw.at_exponents(&x)) {
            return Ok(FourierCheck::Fail { character: Character::from_window(mu_u.domain(), &e), shift: None });
        }
        if !advance(&mut e, mu_u.alphabet()) {
            return Ok(FourierCheck::Pass);
        }
    }
}
