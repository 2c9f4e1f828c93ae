//! Input/state/output representations of convolutional codes over Z/p^r.
//!
//! A system (A, B, C, D) runs the recurrence
//!
//! ```text
//! x_{t+1} = A x_t + B u_t
//! y_t     = C x_t + D u_t
//! ```
//!
//! from the zero state. Codeword symbols are the stacked pairs (y_t; u_t),
//! outputs first, and a terminated trajectory also returns to the zero state.
//! The module provides the reachability and observability matrices, the
//! block-Toeplitz matrix of Markov parameters used by the window decoder,
//! zero-state steering, the canonical first-order representation, and
//! trajectory membership checks that tie polynomial encoders to systems.

use thiserror::Error;

use crate::linalg::{for_each_vector, RingMatrix, RingVector};
use crate::poly::{PolyEncoder, PolyVector};
use crate::ring::RingParams;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("matrix dimensions are inconsistent: {0}")]
    BadDimensions(String),
    #[error("representation condition violated: {0}")]
    ConditionViolated(String),
    #[error("state is not steerable to zero: reachability matrix not surjective")]
    Unreachable,
    #[error("enumeration too large: {0}")]
    TooLarge(String),
}

/// One time step of a codeword stream: outputs stacked over inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub y: RingVector,
    pub u: RingVector,
}

impl Symbol {
    pub fn zero(params: RingParams, outputs: usize, inputs: usize) -> Self {
        Symbol {
            y: RingVector::zero(params, outputs),
            u: RingVector::zero(params, inputs),
        }
    }

    /// Number of nonzero components across both parts.
    pub fn weight(&self) -> usize {
        self.y.weight() + self.u.weight()
    }

    /// Components differing from another symbol.
    pub fn distance(&self, rhs: &Symbol) -> usize {
        self.y.distance(&rhs.y) + self.u.distance(&rhs.u)
    }

    /// Flattens to a single (y; u) vector.
    pub fn stack(&self) -> RingVector {
        RingVector::concat(&[&self.y, &self.u])
    }
}

/// Total number of differing components between two symbol streams.
pub fn stream_distance(a: &[Symbol], b: &[Symbol]) -> usize {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.distance(y)).sum()
}

/// A minimal input/state/output representation over Z/p^r.
#[derive(Debug, Clone)]
pub struct IsoSystem {
    params: RingParams,
    a: RingMatrix,
    b: RingMatrix,
    c: RingMatrix,
    d: RingMatrix,
}

impl IsoSystem {
    pub fn new(
        a: RingMatrix,
        b: RingMatrix,
        c: RingMatrix,
        d: RingMatrix,
    ) -> Result<Self, SystemError> {
        let delta = a.rows();
        if a.cols() != delta {
            return Err(SystemError::BadDimensions("A must be square".into()));
        }
        if b.rows() != delta {
            return Err(SystemError::BadDimensions("B rows must match A".into()));
        }
        if c.cols() != delta {
            return Err(SystemError::BadDimensions("C cols must match A".into()));
        }
        if d.rows() != c.rows() || d.cols() != b.cols() {
            return Err(SystemError::BadDimensions(
                "D must be (outputs x inputs)".into(),
            ));
        }
        if delta == 0 || b.cols() == 0 || c.rows() == 0 {
            return Err(SystemError::BadDimensions(
                "state, input and output dimensions must be positive".into(),
            ));
        }
        Ok(IsoSystem {
            params: a.params(),
            a,
            b,
            c,
            d,
        })
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    /// State dimension.
    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    /// Input dimension k.
    pub fn input_dim(&self) -> usize {
        self.b.cols()
    }

    /// Output dimension n - k.
    pub fn output_dim(&self) -> usize {
        self.c.rows()
    }

    /// Codeword symbol width n.
    pub fn symbol_dim(&self) -> usize {
        self.input_dim() + self.output_dim()
    }

    pub fn a(&self) -> &RingMatrix {
        &self.a
    }

    pub fn b(&self) -> &RingMatrix {
        &self.b
    }

    pub fn c(&self) -> &RingMatrix {
        &self.c
    }

    pub fn d(&self) -> &RingMatrix {
        &self.d
    }

    /// Reachability matrix (A^{l-1}B, ..., AB, B).
    pub fn reachability(&self, l: usize) -> RingMatrix {
        assert!(l >= 1);
        let blocks: Vec<RingMatrix> = (0..l)
            .rev()
            .map(|j| self.a.pow(j as u32).mul(&self.b))
            .collect();
        let refs: Vec<&RingMatrix> = blocks.iter().collect();
        RingMatrix::hstack(&refs)
    }

    /// Observability matrix (C; CA; ...; CA^{l-1}).
    pub fn observability(&self, l: usize) -> RingMatrix {
        assert!(l >= 1);
        let blocks: Vec<RingMatrix> = (0..l)
            .map(|j| self.c.mul(&self.a.pow(j as u32)))
            .collect();
        let refs: Vec<&RingMatrix> = blocks.iter().collect();
        RingMatrix::vstack(&refs)
    }

    /// Block lower-triangular Markov-parameter matrix: D on the diagonal and
    /// CA^{j-1}B on the j-th block subdiagonal.
    pub fn markov_toeplitz(&self, depth: usize) -> RingMatrix {
        assert!(depth >= 1);
        let (p_out, p_in) = (self.output_dim(), self.input_dim());
        let mut out = RingMatrix::zeros(self.params, depth * p_out, depth * p_in);
        // first block column: D, CB, CAB, ...
        let mut blocks = vec![self.d.clone()];
        for j in 0..depth - 1 {
            blocks.push(self.c.mul(&self.a.pow(j as u32)).mul(&self.b));
        }
        for br in 0..depth {
            for bc in 0..=br {
                let blk = &blocks[br - bc];
                for r in 0..p_out {
                    for c in 0..p_in {
                        out.set(br * p_out + r, bc * p_in + c, blk.get(r, c));
                    }
                }
            }
        }
        out
    }

    /// One step of the recurrence.
    pub fn step(&self, x: &RingVector, u: &RingVector) -> (RingVector, RingVector) {
        let next = self.a.mul_vec(x).add(&self.b.mul_vec(u));
        let y = self.c.mul_vec(x).add(&self.d.mul_vec(u));
        (next, y)
    }

    /// Runs the recurrence from the zero state. With `terminate` set, appends
    /// `state_dim` steering inputs so the final state is zero and the
    /// resulting symbol stream is a codeword segment.
    pub fn encode(
        &self,
        inputs: &[RingVector],
        terminate: bool,
    ) -> Result<Trajectory, SystemError> {
        let mut states = vec![RingVector::zero(self.params, self.state_dim())];
        let mut outputs = Vec::with_capacity(inputs.len());
        let mut all_inputs: Vec<RingVector> = inputs.to_vec();
        for u in inputs {
            let x = states.last().unwrap();
            let (next, y) = self.step(x, u);
            outputs.push(y);
            states.push(next);
        }
        if terminate {
            let tail = self.steer_to_zero(states.last().unwrap())?;
            for u in tail {
                let x = states.last().unwrap();
                let (next, y) = self.step(x, &u);
                outputs.push(y);
                states.push(next);
                all_inputs.push(u);
            }
            debug_assert!(states.last().unwrap().is_zero());
        }
        Ok(Trajectory {
            states,
            inputs: all_inputs,
            outputs,
        })
    }

    /// Inputs that drive the given state to zero in `state_dim` steps, found
    /// by lifting mod-p solutions of the reachability system layer by layer.
    pub fn steer_to_zero(&self, x: &RingVector) -> Result<Vec<RingVector>, SystemError> {
        let delta = self.state_dim();
        if x.is_zero() {
            return Ok(vec![RingVector::zero(self.params, self.input_dim()); delta]);
        }
        let phi = self.reachability(delta);
        let target = self.a.pow(delta as u32).mul_vec(x).neg();
        let stacked = phi.lift_solve(&target).ok_or(SystemError::Unreachable)?;
        Ok(stacked.chunks(self.input_dim()))
    }

    /// Assembles the canonical first-order representation and verifies its
    /// three defining conditions plus the minimality certificates (the
    /// system must be reachable and observable), reporting the first
    /// condition that fails.
    pub fn first_order_rep(&self) -> Result<FirstOrderRep, SystemError> {
        let delta = self.state_dim();
        let q = self.output_dim();
        if !self.reachability(delta).is_surjective() {
            return Err(SystemError::ConditionViolated(
                "system is not reachable: reachability matrix not surjective".into(),
            ));
        }
        if !self.observability(delta).is_injective() {
            return Err(SystemError::ConditionViolated(
                "system is not observable: observability matrix not injective".into(),
            ));
        }
        let k_mat = RingMatrix::vstack(&[
            &RingMatrix::identity(self.params, delta).neg(),
            &RingMatrix::zeros(self.params, q, delta),
        ]);
        let l_mat = RingMatrix::vstack(&[&self.a, &self.c]);
        let m_top = RingMatrix::hstack(&[&RingMatrix::zeros(self.params, delta, q), &self.b]);
        let m_bot = RingMatrix::hstack(&[
            &RingMatrix::identity(self.params, q).neg(),
            &self.d,
        ]);
        let m_mat = RingMatrix::vstack(&[&m_top, &m_bot]);

        if !k_mat.is_injective() {
            return Err(SystemError::ConditionViolated("K is not injective".into()));
        }
        if !RingMatrix::hstack(&[&k_mat, &m_mat]).is_surjective() {
            return Err(SystemError::ConditionViolated(
                "(K, M) is not surjective".into(),
            ));
        }
        // (zK + L, M) surjective: checked at z in {0, 1} plus the stacked
        // coefficient matrix (K | 0 | L | M) mod p
        for z0 in 0..2i64 {
            let shifted = RingMatrix::from_fn(
                self.params,
                k_mat.rows(),
                k_mat.cols(),
                |r, c| (k_mat.get(r, c).value() as i64) * z0 + l_mat.get(r, c).value() as i64,
            );
            if !RingMatrix::hstack(&[&shifted, &m_mat]).is_surjective() {
                return Err(SystemError::ConditionViolated(format!(
                    "(zK + L, M) is not surjective at z = {z0}"
                )));
            }
        }
        let zeros = RingMatrix::zeros(self.params, k_mat.rows(), m_mat.cols());
        if !RingMatrix::hstack(&[&k_mat, &zeros, &l_mat, &m_mat]).is_surjective() {
            return Err(SystemError::ConditionViolated(
                "(zK + L, M) coefficient stacking is not surjective".into(),
            ));
        }
        Ok(FirstOrderRep {
            k_mat,
            l_mat,
            m_mat,
        })
    }

    /// True iff the coefficient sequence of `v`, read as the time sequence of
    /// (y; u) symbols, is a trajectory with zero initial and final state.
    pub fn contains(&self, v: &PolyVector) -> bool {
        assert_eq!(v.dim(), self.symbol_dim());
        let steps = v.coeffs().len();
        let mut x = RingVector::zero(self.params, self.state_dim());
        for t in 0..steps {
            let symbol = v.coeff(t);
            let y_expect = RingVector::from_raw(
                self.params,
                symbol.values()[..self.output_dim()].to_vec(),
            );
            let u = RingVector::from_raw(
                self.params,
                symbol.values()[self.output_dim()..].to_vec(),
            );
            let (next, y) = self.step(&x, &u);
            if y != y_expect {
                return false;
            }
            x = next;
        }
        x.is_zero()
    }

    /// Exhaustively checks that every codeword of the polynomial encoder up
    /// to the given message degree is a trajectory of this system. Codeword
    /// coefficients are read highest degree first, matching the descending
    /// indexing that turns the recurrence into polynomial division.
    pub fn consistent_with_encoder(
        &self,
        g: &PolyEncoder,
        max_deg: usize,
    ) -> Result<bool, SystemError> {
        if g.rows() != self.symbol_dim() || g.cols() != self.input_dim() {
            return Err(SystemError::BadDimensions(
                "encoder shape does not match system".into(),
            ));
        }
        let slots = g.cols() * (max_deg + 1);
        let modulus = self.params.modulus();
        if modulus.checked_pow(slots as u32).map_or(true, |c| c > 1 << 16) {
            return Err(SystemError::TooLarge(format!(
                "{modulus}^{slots} messages"
            )));
        }
        let mut ok = true;
        for_each_vector(slots, modulus, |vals| {
            let coeffs: Vec<RingVector> = vals
                .chunks(g.cols())
                .map(|c| RingVector::from_raw(self.params, c.to_vec()))
                .collect();
            let u = PolyVector::from_coeffs(self.params, g.cols(), coeffs);
            let w = g.encode(&u);
            let reversed = PolyVector::from_coeffs(
                self.params,
                g.rows(),
                w.coeffs().iter().rev().cloned().collect(),
            );
            if !self.contains(&reversed) {
                ok = false;
                return false;
            }
            true
        });
        Ok(ok)
    }
}

/// A run of the recurrence: `states` has one more entry than `inputs` and
/// `outputs`, starting at the zero state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub states: Vec<RingVector>,
    pub inputs: Vec<RingVector>,
    pub outputs: Vec<RingVector>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Final state is zero, so the symbol stream is a codeword segment.
    pub fn is_terminated(&self) -> bool {
        self.states.last().is_some_and(|x| x.is_zero())
    }

    /// The (y_t; u_t) symbol stream.
    pub fn symbols(&self) -> Vec<Symbol> {
        self.outputs
            .iter()
            .zip(&self.inputs)
            .map(|(y, u)| Symbol {
                y: y.clone(),
                u: u.clone(),
            })
            .collect()
    }

    /// Re-runs the recurrence and checks every step and the boundary states.
    pub fn verify(&self, sys: &IsoSystem) -> bool {
        if self.states.len() != self.inputs.len() + 1
            || self.outputs.len() != self.inputs.len()
        {
            return false;
        }
        if !self.states[0].is_zero() {
            return false;
        }
        for t in 0..self.inputs.len() {
            let (next, y) = sys.step(&self.states[t], &self.inputs[t]);
            if next != self.states[t + 1] || y != self.outputs[t] {
                return false;
            }
        }
        true
    }
}

/// The canonical (K, L, M) shape assembled from a system.
#[derive(Debug, Clone)]
pub struct FirstOrderRep {
    k_mat: RingMatrix,
    l_mat: RingMatrix,
    m_mat: RingMatrix,
}

impl FirstOrderRep {
    pub fn k(&self) -> &RingMatrix {
        &self.k_mat
    }

    pub fn l(&self) -> &RingMatrix {
        &self.l_mat
    }

    pub fn m(&self) -> &RingMatrix {
        &self.m_mat
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyVector;

    fn z4() -> RingParams {
        RingParams::new(2, 2).unwrap()
    }

    /// The one-dimensional system with A = B = C = D = 1 over Z4.
    fn scalar_sys() -> IsoSystem {
        let one = RingMatrix::from_rows_i64(z4(), &[&[1]]);
        IsoSystem::new(one.clone(), one.clone(), one.clone(), one).unwrap()
    }

    fn upper_sys() -> IsoSystem {
        IsoSystem::new(
            RingMatrix::from_rows_i64(z4(), &[&[1, 1], &[0, 1]]),
            RingMatrix::from_rows_i64(z4(), &[&[0], &[1]]),
            RingMatrix::from_rows_i64(z4(), &[&[1, 0]]),
            RingMatrix::from_rows_i64(z4(), &[&[1]]),
        )
        .unwrap()
    }

    #[test]
    fn reachability_examples() {
        let sys = IsoSystem::new(
            RingMatrix::identity(z4(), 2),
            RingMatrix::identity(z4(), 2),
            RingMatrix::from_rows_i64(z4(), &[&[1, 0]]),
            RingMatrix::from_rows_i64(z4(), &[&[0, 0]]),
        )
        .unwrap();
        assert_eq!(
            sys.reachability(2),
            RingMatrix::from_rows_i64(z4(), &[&[1, 0, 1, 0], &[0, 1, 0, 1]])
        );
        assert_eq!(sys.reachability(1), *sys.b());

        let sys = upper_sys();
        assert_eq!(
            sys.reachability(2),
            RingMatrix::from_rows_i64(z4(), &[&[1, 0], &[1, 1]])
        );
    }

    #[test]
    fn observability_examples() {
        let sys = upper_sys();
        assert_eq!(sys.observability(1), *sys.c());
        assert_eq!(
            sys.observability(2),
            RingMatrix::from_rows_i64(z4(), &[&[1, 0], &[1, 1]])
        );

        let const_sys = IsoSystem::new(
            RingMatrix::identity(z4(), 2),
            RingMatrix::identity(z4(), 2),
            RingMatrix::from_rows_i64(z4(), &[&[1, 2]]),
            RingMatrix::from_rows_i64(z4(), &[&[0, 0]]),
        )
        .unwrap();
        assert_eq!(
            const_sys.observability(3),
            RingMatrix::from_rows_i64(z4(), &[&[1, 2], &[1, 2], &[1, 2]])
        );
    }

    #[test]
    fn markov_toeplitz_examples() {
        let sys = scalar_sys();
        assert_eq!(sys.markov_toeplitz(1), *sys.d());
        assert_eq!(
            sys.markov_toeplitz(2),
            RingMatrix::from_rows_i64(z4(), &[&[1, 0], &[1, 1]])
        );

        let no_b = IsoSystem::new(
            RingMatrix::from_rows_i64(z4(), &[&[1]]),
            RingMatrix::from_rows_i64(z4(), &[&[0]]),
            RingMatrix::from_rows_i64(z4(), &[&[1]]),
            RingMatrix::from_rows_i64(z4(), &[&[3]]),
        )
        .unwrap();
        assert_eq!(
            no_b.markov_toeplitz(3),
            RingMatrix::from_rows_i64(z4(), &[&[3, 0, 0], &[0, 3, 0], &[0, 0, 3]])
        );
    }

    #[test]
    fn encode_scalar_example() {
        let sys = scalar_sys();
        let inputs = vec![
            RingVector::from_i64(z4(), &[1]),
            RingVector::from_i64(z4(), &[2]),
        ];
        let traj = sys.encode(&inputs, false).unwrap();
        assert_eq!(
            traj.states,
            vec![
                RingVector::from_i64(z4(), &[0]),
                RingVector::from_i64(z4(), &[1]),
                RingVector::from_i64(z4(), &[3]),
            ]
        );
        assert_eq!(
            traj.outputs,
            vec![
                RingVector::from_i64(z4(), &[1]),
                RingVector::from_i64(z4(), &[3]),
            ]
        );

        // termination appends u_2 = 1 giving y_2 = 0 and final state 0
        let traj = sys.encode(&inputs, true).unwrap();
        assert_eq!(traj.len(), 3);
        assert_eq!(traj.inputs[2], RingVector::from_i64(z4(), &[1]));
        assert_eq!(traj.outputs[2], RingVector::from_i64(z4(), &[0]));
        assert!(traj.is_terminated());
        assert!(traj.verify(&sys));
    }

    #[test]
    fn encode_zero_and_first_step() {
        let sys = upper_sys();
        let zeros = vec![RingVector::zero(z4(), 1); 4];
        let traj = sys.encode(&zeros, false).unwrap();
        assert!(traj.outputs.iter().all(|y| y.is_zero()));
        assert!(traj.states.iter().all(|x| x.is_zero()));

        // first step sees x_0 = 0, so y_0 = D u_0
        let traj = sys
            .encode(&[RingVector::from_i64(z4(), &[3])], false)
            .unwrap();
        assert_eq!(traj.outputs[0], sys.d().mul_vec(&traj.inputs[0]));
    }

    #[test]
    fn steer_examples() {
        let sys = scalar_sys();
        assert_eq!(
            sys.steer_to_zero(&RingVector::zero(z4(), 1)).unwrap(),
            vec![RingVector::zero(z4(), 1)]
        );
        // x = 3: solve u = -A x = 1 mod 4
        assert_eq!(
            sys.steer_to_zero(&RingVector::from_i64(z4(), &[3])).unwrap(),
            vec![RingVector::from_i64(z4(), &[1])]
        );

        // steering then simulating always lands on zero
        let sys = upper_sys();
        for_each_vector(2, 4, |x| {
            let state = RingVector::from_raw(z4(), x.to_vec());
            let tail = sys.steer_to_zero(&state).unwrap();
            let mut cur = state;
            for u in &tail {
                cur = sys.step(&cur, u).0;
            }
            assert!(cur.is_zero());
            true
        });
    }

    #[test]
    fn first_order_rep_scalar() {
        let rep = scalar_sys().first_order_rep().unwrap();
        assert_eq!(rep.k(), &RingMatrix::from_rows_i64(z4(), &[&[3], &[0]]));
        assert_eq!(rep.l(), &RingMatrix::from_rows_i64(z4(), &[&[1], &[1]]));
        assert_eq!(
            rep.m(),
            &RingMatrix::from_rows_i64(z4(), &[&[0, 1], &[3, 1]])
        );
    }

    #[test]
    fn first_order_rep_rejects_unobservable() {
        // C = 0 fails the observability certificate
        let sys = IsoSystem::new(
            RingMatrix::identity(z4(), 1),
            RingMatrix::identity(z4(), 1),
            RingMatrix::from_rows_i64(z4(), &[&[0]]),
            RingMatrix::from_rows_i64(z4(), &[&[1]]),
        )
        .unwrap();
        let err = sys.first_order_rep().unwrap_err();
        assert!(matches!(
            &err,
            SystemError::ConditionViolated(msg) if msg.contains("observable")
        ));

        // B = 2 kills reachability mod 2
        let sys = IsoSystem::new(
            RingMatrix::identity(z4(), 1),
            RingMatrix::from_rows_i64(z4(), &[&[2]]),
            RingMatrix::identity(z4(), 1),
            RingMatrix::from_rows_i64(z4(), &[&[1]]),
        )
        .unwrap();
        let err = sys.first_order_rep().unwrap_err();
        assert!(matches!(
            &err,
            SystemError::ConditionViolated(msg) if msg.contains("reachable")
        ));
    }

    #[test]
    fn membership_examples() {
        let sys = scalar_sys();
        assert!(sys.contains(&PolyVector::zero(z4(), 2)));

        // encoded codeword, read back in time order
        let traj = sys
            .encode(
                &[
                    RingVector::from_i64(z4(), &[1]),
                    RingVector::from_i64(z4(), &[2]),
                ],
                true,
            )
            .unwrap();
        let coeffs: Vec<RingVector> =
            traj.symbols().iter().map(|s| s.stack()).collect();
        let v = PolyVector::from_coeffs(z4(), 2, coeffs.clone());
        assert!(sys.contains(&v));

        // flipping one symbol breaks membership
        let mut flipped = coeffs;
        flipped[1] = flipped[1].add(&RingVector::from_i64(z4(), &[1, 0]));
        assert!(!sys.contains(&PolyVector::from_coeffs(z4(), 2, flipped)));
    }

    #[test]
    fn scalar_encoder_consistency() {
        // the code of the scalar system is spanned by the column (z, z + 3)
        let g = PolyEncoder::new(vec![PolyVector::from_i64(
            z4(),
            2,
            &[&[0, 3], &[1, 1]],
        )])
        .unwrap();
        assert!(g.is_pdp());
        assert_eq!(g.complexity(), 1);
        assert!(scalar_sys().consistent_with_encoder(&g, 3).unwrap());

        // a mismatched encoder fails on a degree-0 message
        let bad = PolyEncoder::new(vec![PolyVector::from_i64(z4(), 2, &[&[1, 1]])]).unwrap();
        assert!(!scalar_sys().consistent_with_encoder(&bad, 1).unwrap());
    }

    #[test]
    fn reachability_observability_recursions() {
        let sys = upper_sys();
        for l in 1..5 {
            let phi = sys.reachability(l);
            let next = sys.reachability(l + 1);
            assert_eq!(
                next,
                RingMatrix::hstack(&[&sys.a().mul(&phi), sys.b()])
            );
            let psi = sys.observability(l);
            let next = sys.observability(l + 1);
            assert_eq!(
                next,
                RingMatrix::vstack(&[&psi, &sys.c().mul(&sys.a().pow(l as u32))])
            );
        }
    }
}
