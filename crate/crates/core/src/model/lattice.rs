use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 3;

/// Relative slack applied when deciding whether a lattice point lies on a
/// radius boundary.
const RADIUS_SLACK: f64 = 1e-12;

/// A point `n` of the integer lattice `Z^d`; the physical momentum is
/// `(2π/L)·n`.
///
/// Unused trailing coordinates are kept at zero, so the derived ordering is
/// lexicographic in `n` for momenta of equal dimension.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Momentum {
    n: [i32; MAX_DIM],
    dim: u8,
}

impl Momentum {
    /// Builds a momentum from its integer coordinates.
    ///
    /// Panics if `n` is empty or longer than [`MAX_DIM`]; use
    /// [`Momentum::try_new`] for untrusted input.
    pub fn new(n: &[i32]) -> Self {
        Self::try_new(n).expect("momentum dimension must be 1..=3")
    }

    pub fn try_new(n: &[i32]) -> Result<Self> {
        if n.is_empty() || n.len() > MAX_DIM {
            return Err(Error::param(
                "momentum",
                format!("dimension {} not in 1..={MAX_DIM}", n.len()),
            ));
        }
        let mut coords = [0; MAX_DIM];
        coords[..n.len()].copy_from_slice(n);
        Ok(Self {
            n: coords,
            dim: n.len() as u8,
        })
    }

    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim));
        Self {
            n: [0; MAX_DIM],
            dim: dim as u8,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn components(&self) -> &[i32] {
        &self.n[..self.dim()]
    }

    pub fn is_zero(&self) -> bool {
        self.n == [0; MAX_DIM]
    }

    /// `|n|²`, exact.
    pub fn norm_sq(&self) -> i64 {
        self.n.iter().map(|&c| (c as i64) * (c as i64)).sum()
    }
}

impl Add for Momentum {
    type Output = Momentum;
    fn add(self, rhs: Momentum) -> Momentum {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut n = self.n;
        for (a, b) in n.iter_mut().zip(rhs.n) {
            *a += b;
        }
        Momentum { n, dim: self.dim }
    }
}

impl Sub for Momentum {
    type Output = Momentum;
    fn sub(self, rhs: Momentum) -> Momentum {
        self + (-rhs)
    }
}

impl Neg for Momentum {
    type Output = Momentum;
    fn neg(self) -> Momentum {
        Momentum {
            n: self.n.map(|c| -c),
            dim: self.dim,
        }
    }
}

impl fmt::Display for Momentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim == 1 {
            return write!(f, "{}", self.n[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.components().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Momentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Momentum{self}")
    }
}

/// The torus `]-L/2, L/2]^d` and its dual lattice `(2π/L)Z^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    length: f64,
    dim: usize,
}

impl LatticeSpec {
    pub fn new(length: f64, dim: usize) -> Result<Self> {
        if !(length.is_finite() && length >= 1.0) {
            return Err(Error::param("L", format!("must be finite and >= 1, got {length}")));
        }
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::param("dimension", format!("must be in 1..={MAX_DIM}, got {dim}")));
        }
        Ok(Self { length, dim })
    }

    /// Lattice with a prescribed momentum spacing `2π/L`.
    pub fn with_spacing(spacing: f64, dim: usize) -> Result<Self> {
        Self::new(2.0 * std::f64::consts::PI / spacing, dim)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Momentum spacing `2π/L`.
    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.length
    }

    /// `L^d`.
    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    /// `|p|²` for `p = (2π/L)n`, computed as `(2π/L)²·|n|²`.
    pub fn norm_sq(&self, k: &Momentum) -> f64 {
        let h = self.spacing();
        h * h * k.norm_sq() as f64
    }

    pub fn norm(&self, k: &Momentum) -> f64 {
        self.norm_sq(k).sqrt()
    }

    /// Physical momentum vector, padded with zeros.
    pub fn physical(&self, k: &Momentum) -> [f64; MAX_DIM] {
        let h = self.spacing();
        k.n.map(|c| h * c as f64)
    }

    pub fn check_momentum(&self, k: &Momentum) -> Result<()> {
        if k.dim() != self.dim {
            return Err(Error::Mismatch(format!(
                "momentum {k} has dimension {} on a {}-dimensional lattice",
                k.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Largest integer `|n|²` whose physical momentum lies within `radius`.
    pub fn max_norm_sq(&self, radius: f64) -> i64 {
        if radius <= 0.0 {
            return 0;
        }
        let r = radius / self.spacing();
        (r * r * (1.0 + RADIUS_SLACK)).floor() as i64
    }

    /// All lattice momenta with `|p| <= radius`, in lexicographic order of `n`.
    pub fn lattice_points(&self, radius: f64, include_zero: bool) -> Vec<Momentum> {
        if radius < 0.0 {
            return Vec::new();
        }
        let max_sq = self.max_norm_sq(radius);
        let mut pts = ball(self.dim, max_sq);
        if !include_zero {
            pts.retain(|k| !k.is_zero());
        }
        pts
    }

    /// Same set as [`LatticeSpec::lattice_points`], ordered by shell `|n|²`
    /// with lexicographic ties. This is the summation order of all lattice
    /// sums in the crate.
    pub fn points_by_shell(&self, radius: f64, include_zero: bool) -> Vec<Momentum> {
        let mut pts = self.lattice_points(radius, include_zero);
        pts.sort_by_key(|k| (k.norm_sq(), *k));
        pts
    }
}

/// Integer points with `|n|² <= max_sq`, lexicographic.
pub(crate) fn ball(dim: usize, max_sq: i64) -> Vec<Momentum> {
    let m = (max_sq as f64).sqrt().floor() as i32;
    let mut out = Vec::new();
    let mut cur = [0i32; MAX_DIM];
    fn rec(
        axis: usize,
        dim: usize,
        m: i32,
        budget: i64,
        cur: &mut [i32; MAX_DIM],
        out: &mut Vec<Momentum>,
    ) {
        if axis == dim {
            out.push(Momentum {
                n: *cur,
                dim: dim as u8,
            });
            return;
        }
        for c in -m..=m {
            let c2 = (c as i64) * (c as i64);
            if c2 > budget {
                continue;
            }
            cur[axis] = c;
            rec(axis + 1, dim, m, budget - c2, cur, out);
        }
        cur[axis] = 0;
    }
    if max_sq >= 0 {
        rec(0, dim, m, max_sq, &mut cur, &mut out);
    }
    out
}
