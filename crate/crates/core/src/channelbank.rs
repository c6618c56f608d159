//! Protocol operators: pre-measurements `M_b`, feed-forward flips `F_b`,
//! post-measurements `N_b`, and the two-qubit amplitude-damping Kraus set.

use std::fmt;

use crate::conditions::RecoveryParams;
use crate::error::{Error, Result};
use crate::qmath::{kron2, Matrix2c, Matrix4c};

/// A measurement strength or damping probability in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Strength(f64);

impl Strength {
    pub const ZERO: Strength = Strength(0.0);
    pub const ONE: Strength = Strength(1.0);

    pub fn new(value: f64) -> Result<Self> {
        Self::named("strength", value)
    }

    /// Same as [`Strength::new`], but errors name the parameter.
    pub fn named(name: &'static str, value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Strength(value))
        } else {
            Err(Error::OutOfRange { name, value })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

macro_rules! two_bit_id {
    ($(#[$meta:meta])* $name:ident { $v00:ident, $v01:ident, $v10:ident, $v11:ident }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $v00,
            $v01,
            $v10,
            $v11,
        }

        impl $name {
            pub const ALL: [$name; 4] = [$name::$v00, $name::$v01, $name::$v10, $name::$v11];

            pub fn index(self) -> usize {
                self as usize
            }

            /// `(first, second)` qubit bits.
            pub fn bits(self) -> (u8, u8) {
                let i = self as u8;
                (i >> 1, i & 1)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let (a, b) = self.bits();
                write!(f, "{a}{b}")
            }
        }
    };
}

two_bit_id! {
    /// Pre-measurement outcome `ij`; selects `M_ij`, `F_ij` and `N_ij`.
    BranchId { B00, B01, B10, B11 }
}

two_bit_id! {
    /// Kraus outcome `mn` of the damping channel: per qubit, 0 = no jump, 1 = jump.
    JumpId { J00, J01, J10, J11 }
}

impl JumpId {
    pub const NO_JUMP: JumpId = JumpId::J00;
}

/// Pre-weak measurement `M_b`. All four are diagonal.
pub fn pre_measurement(p: Strength, b: BranchId) -> Matrix4c {
    let p = p.get();
    let a = (p * (1.0 - p)).sqrt();
    let d = match b {
        BranchId::B00 => [p, a, a, 1.0 - p],
        BranchId::B01 => [a, p, 1.0 - p, a],
        BranchId::B10 => [a, 1.0 - p, p, a],
        BranchId::B11 => [1.0 - p, a, a, p],
    };
    Matrix4c::diag_real(d)
}

/// Bit-flip feed-forward `F_b`: the identity, `I⊗X`, `X⊗I`, or `X⊗X`.
pub fn feed_forward(b: BranchId) -> Matrix4c {
    let flip = |bit: u8| {
        if bit == 1 {
            Matrix2c::pauli_x()
        } else {
            Matrix2c::identity()
        }
    };
    let (i, j) = b.bits();
    kron2(&flip(i), &flip(j))
}

/// Post-weak measurement `N_b`. An incomplete measurement: the outcomes
/// not listed here are discarded.
pub fn post_measurement(q: Strength, b: BranchId) -> Matrix4c {
    let q = q.get();
    let s = (1.0 - q).sqrt();
    let d = match b {
        BranchId::B00 => [1.0 - q, s, s, 1.0],
        BranchId::B01 => [s, 1.0 - q, 1.0, s],
        BranchId::B10 => [s, 1.0, 1.0 - q, s],
        BranchId::B11 => [1.0, s, s, 1.0 - q],
    };
    Matrix4c::diag_real(d)
}

/// Single-qubit damping Kraus pair `(e_0, e_1)`.
pub fn damping_kraus_single(r: Strength) -> [Matrix2c; 2] {
    let r = r.get();
    [
        Matrix2c::from_real([[1.0, 0.0], [0.0, (1.0 - r).sqrt()]]),
        Matrix2c::from_real([[0.0, r.sqrt()], [0.0, 0.0]]),
    ]
}

/// `e_mn = e_m ⊗ e_n`, indexed by [`JumpId`]. Both qubits share the rate `r`.
pub fn damping_kraus(r: Strength) -> [Matrix4c; 4] {
    let e = damping_kraus_single(r);
    JumpId::ALL.map(|j| {
        let (m, n) = j.bits();
        kron2(&e[m as usize], &e[n as usize])
    })
}

/// The full chain `N_b F_b e_j F_b M_b` for one branch and jump outcome.
pub fn recovery_kraus(params: &RecoveryParams, b: BranchId, j: JumpId) -> Matrix4c {
    let f = feed_forward(b);
    let e = damping_kraus(params.r)[j.index()];
    let chain = [
        post_measurement(params.q, b),
        f,
        e,
        f,
        pre_measurement(params.p, b),
    ];
    chain.iter().skip(1).fold(chain[0], |acc, m| &acc * m)
}

/// All sixteen `N_b F_b e_j F_b M_b` for one parameter triple, built once.
#[derive(Clone, Debug)]
pub struct RecoveryOperators {
    params: RecoveryParams,
    kraus: [[Matrix4c; 4]; 4],
}

impl RecoveryOperators {
    pub fn new(params: RecoveryParams) -> Self {
        let kraus = BranchId::ALL.map(|b| JumpId::ALL.map(|j| recovery_kraus(&params, b, j)));
        Self { params, kraus }
    }

    pub fn params(&self) -> &RecoveryParams {
        &self.params
    }

    pub fn get(&self, b: BranchId, j: JumpId) -> &Matrix4c {
        &self.kraus[b.index()][j.index()]
    }
}
