//! Sliding-window decoding of received (y, u) symbol streams.
//!
//! Each window of T symbols is decoded in two block steps. An observer step
//! recovers a mid-window state from the last Θ symbols by decoding the block
//! code generated by the observability matrix (generator-side lifting). A
//! syndrome step then recovers the input errors on the leading stretch by
//! decoding the block code checked by the reachability matrix (syndrome-side
//! lifting), and the outputs are filled in by replaying the recurrence. The
//! corrected weight is gated against a shrinking budget; a failed attempt
//! shrinks the leading stretch by Θ and retries until the attempts are
//! exhausted. On success the first Θ symbols are committed and the window
//! slides.
//!
//! With exact inner decoders that fail on ties, any stream whose error
//! weight in every length-T window stays within the budget
//! `lambda = min((d1-1)/2, T/(2Θ))` decodes exactly; heavier streams either
//! decode exactly or fail loudly.

use thiserror::Error;

use crate::block::{min_distance_bruteforce, min_distance_from_parity_opt};
use crate::block::{BlockCode, CodeError, FieldDecoder};
use crate::iso::{IsoSystem, Symbol};
use crate::linalg::{for_each_vector, RingMatrix, RingVector};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WindowError {
    #[error("decoder hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
}

impl From<CodeError> for WindowError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::TooLarge(msg) => WindowError::TooLarge(msg),
            other => WindowError::HypothesisViolated(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StreamError {
    #[error("decoding failed at position {position}")]
    DecodeFailure { position: usize },
}

/// Per-window weight budget: min((d1 - 1) / 2, T / (2 Θ)).
pub fn lambda_bound(d1: usize, t_window: usize, theta: usize) -> usize {
    assert!(d1 >= 1 && theta >= 1 && t_window > theta);
    ((d1 - 1) / 2).min(t_window / (2 * theta))
}

/// Outcome of a single window attempt.
#[derive(Debug, Clone)]
pub enum WindowOutcome {
    /// The first Θ symbols were corrected and committed.
    Done(WindowResult),
    /// This attempt failed; retry with h + 1.
    Retry,
    /// No attempts remain for this window.
    Exhausted,
}

#[derive(Debug, Clone)]
pub struct WindowResult {
    /// Corrected (y, u) symbols for the first Θ time steps of the window.
    pub symbols: Vec<Symbol>,
    /// State after the committed symbols.
    pub next_state: RingVector,
    /// The attempt number that succeeded.
    pub attempts: usize,
}

struct AttemptPlan {
    /// Length m = T - hΘ of the leading stretch decoded by syndrome.
    syndrome_len: usize,
    /// Parity code Ker(Φ_m) with its coset-leader table; None when m = 0.
    parity: Option<(BlockCode, FieldDecoder)>,
    /// A^m, for the state offset in the syndrome.
    a_pow: RingMatrix,
}

/// A window decoder with all of its per-attempt machinery precomputed.
pub struct WindowDecoder {
    sys: IsoSystem,
    t_window: usize,
    theta: usize,
    d1: Option<usize>,
    d2: usize,
    lambda: usize,
    obs_code: BlockCode,
    inner_gen: FieldDecoder,
    toeplitz: RingMatrix,
    attempts: Vec<AttemptPlan>,
}

impl WindowDecoder {
    /// Verifies the decoder hypotheses for (T, Θ), computes the block-code
    /// distances and the weight budget, and builds the inner decoders.
    pub fn analyze(sys: IsoSystem, t_window: usize, theta: usize) -> Result<Self, WindowError> {
        if theta < 1 || t_window <= theta {
            return Err(WindowError::HypothesisViolated(format!(
                "window lengths must satisfy T > Θ >= 1, got T = {t_window}, Θ = {theta}"
            )));
        }
        let delta = sys.state_dim();
        if sys.a().rank_mod_p() != delta {
            return Err(WindowError::HypothesisViolated(
                "A is not invertible".into(),
            ));
        }
        let phi_t = sys.reachability(t_window);
        if !phi_t.is_surjective() {
            return Err(WindowError::HypothesisViolated(format!(
                "reachability matrix of depth {t_window} is not surjective"
            )));
        }
        let psi = sys.observability(theta);
        if !psi.is_injective() {
            return Err(WindowError::HypothesisViolated(format!(
                "observability matrix of depth {theta} is not injective"
            )));
        }

        let d1 = min_distance_from_parity_opt(&phi_t.mod_p())?;
        let d2 = min_distance_bruteforce(&psi.mod_p())?;
        let lambda = match d1 {
            Some(d) => lambda_bound(d, t_window, theta),
            None => t_window / (2 * theta),
        };

        let inner_gen = FieldDecoder::nearest_from_generator(psi.mod_p())?;
        let obs_code = BlockCode::from_generator(psi)?;
        let toeplitz = sys.markov_toeplitz(theta);

        let mut attempts = Vec::new();
        for h in 1..=t_window / theta {
            let m = t_window - h * theta;
            let parity = if m > 0 {
                let phi_m = sys.reachability(m);
                let table = FieldDecoder::syndrome_from_parity(phi_m.mod_p())?;
                Some((BlockCode::from_parity(phi_m)?, table))
            } else {
                None
            };
            attempts.push(AttemptPlan {
                syndrome_len: m,
                parity,
                a_pow: sys.a().pow(m as u32),
            });
        }

        Ok(WindowDecoder {
            sys,
            t_window,
            theta,
            d1,
            d2,
            lambda,
            obs_code,
            inner_gen,
            toeplitz,
            attempts,
        })
    }

    pub fn system(&self) -> &IsoSystem {
        &self.sys
    }

    pub fn window_len(&self) -> usize {
        self.t_window
    }

    pub fn commit_len(&self) -> usize {
        self.theta
    }

    /// Distance of the input-recovery code Ker(Φ_T) mod p; None when that
    /// kernel is trivial.
    pub fn d1(&self) -> Option<usize> {
        self.d1
    }

    /// Distance of the state-recovery code Im(Ψ_Θ) mod p.
    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// Capability of the inner generator-side field decoder.
    pub fn t_gen(&self) -> usize {
        self.inner_gen.capability()
    }

    /// Capability of the syndrome-side code Ker(Φ_T) mod p.
    pub fn t_par(&self) -> Option<usize> {
        self.d1.map(|d| (d - 1) / 2)
    }

    fn stack_outputs(&self, symbols: &[Symbol]) -> RingVector {
        let parts: Vec<&RingVector> = symbols.iter().map(|s| &s.y).collect();
        RingVector::concat(&parts)
    }

    fn stack_inputs(&self, symbols: &[Symbol]) -> RingVector {
        let parts: Vec<&RingVector> = symbols.iter().map(|s| &s.u).collect();
        RingVector::concat(&parts)
    }

    /// One decode attempt on the window starting at `tau`, given the state
    /// entering the window and the attempt number h >= 1.
    pub fn decode_window(
        &self,
        received: &[Symbol],
        tau: usize,
        x_in: &RingVector,
        h: usize,
    ) -> WindowOutcome {
        assert!(h >= 1);
        assert!(
            tau + self.t_window <= received.len(),
            "window extends past the received stream"
        );
        if h * self.theta > self.t_window {
            return WindowOutcome::Exhausted;
        }
        let plan = &self.attempts[h - 1];
        let m = plan.syndrome_len;

        // observer step: recover the state at tau + m from the stretch of Θ
        // symbols behind it
        let stretch = &received[tau + m..tau + m + self.theta];
        let word = self
            .stack_outputs(stretch)
            .sub(&self.toeplitz.mul_vec(&self.stack_inputs(stretch)));
        let Ok(observed) = self.obs_code.gv_decode(&word, &self.inner_gen) else {
            return WindowOutcome::Retry;
        };
        let x_mid = observed.message;

        // syndrome step: recover the input errors on [tau, tau + m)
        let input_corrections: Vec<RingVector> = if m > 0 {
            let (code, table) = plan.parity.as_ref().unwrap();
            let u_lead = self.stack_inputs(&received[tau..tau + m]);
            let offset = x_mid.sub(&plan.a_pow.mul_vec(x_in));
            let syndrome = code.parity().unwrap().mul_vec(&u_lead).sub(&offset);
            let Ok(stacked) = code.tln_decode(&syndrome, table) else {
                return WindowOutcome::Retry;
            };
            stacked.chunks(self.sys.input_dim())
        } else {
            // nothing to recover, but the observed state must agree
            if x_mid != *x_in {
                return WindowOutcome::Retry;
            }
            Vec::new()
        };

        // replay: corrected inputs on the leading stretch, received inputs
        // beyond it, far enough to commit Θ symbols
        let horizon = m.max(self.theta);
        let mut states = vec![x_in.clone()];
        let mut corrected = Vec::with_capacity(horizon);
        for t in 0..horizon {
            let u = if t < m {
                received[tau + t].u.sub(&input_corrections[t])
            } else {
                received[tau + t].u.clone()
            };
            let (next, y) = self.sys.step(states.last().unwrap(), &u);
            corrected.push(Symbol { y, u });
            states.push(next);
        }

        // weight gate: corrections inside the first T - Θ + 1 positions
        // against the budget remaining at attempt h
        let mut weight = 0usize;
        for t in 0..m {
            weight += input_corrections[t].weight();
            weight += corrected[t].y.distance(&received[tau + t].y);
        }
        let q = self.sys.output_dim();
        for j in 0..self.theta {
            if m + j <= self.t_window - self.theta {
                weight += observed.error.values()[j * q..(j + 1) * q]
                    .iter()
                    .filter(|&&v| v != 0)
                    .count();
            }
        }
        let budget = self.lambda as i64 - (h as i64 - 1);
        if weight as i64 > budget {
            return WindowOutcome::Retry;
        }

        WindowOutcome::Done(WindowResult {
            symbols: corrected[..self.theta].to_vec(),
            next_state: states[self.theta].clone(),
            attempts: h,
        })
    }

    /// Decodes a full received stream from the zero state. The stream must
    /// have been terminated at encoding time so the final state is zero.
    pub fn decode_stream(&self, received: &[Symbol]) -> Result<Vec<Symbol>, StreamError> {
        let x0 = RingVector::zero(self.sys.params(), self.sys.state_dim());
        self.decode_stream_from(received, x0)
    }

    /// Same as `decode_stream` with an explicit initial state (for
    /// window-level tests).
    pub fn decode_stream_from(
        &self,
        received: &[Symbol],
        x0: RingVector,
    ) -> Result<Vec<Symbol>, StreamError> {
        let mut out = Vec::with_capacity(received.len());
        let mut x = x0;
        let mut tau = 0usize;
        while received.len() - tau >= self.t_window {
            let mut h = 1;
            loop {
                match self.decode_window(received, tau, &x, h) {
                    WindowOutcome::Done(res) => {
                        out.extend(res.symbols);
                        x = res.next_state;
                        tau += self.theta;
                        break;
                    }
                    WindowOutcome::Retry => h += 1,
                    WindowOutcome::Exhausted => {
                        return Err(StreamError::DecodeFailure { position: tau })
                    }
                }
            }
        }
        let tail = self
            .decode_tail(&received[tau..], &x)
            .ok_or(StreamError::DecodeFailure { position: tau })?;
        out.extend(tail);
        Ok(out)
    }

    /// Endgame for the final sub-window stretch: the encoder terminated in
    /// the zero state, so enumerate input tails that steer there and take
    /// the unique nearest one. Ties and budget blowups fail.
    fn decode_tail(&self, received: &[Symbol], x_in: &RingVector) -> Option<Vec<Symbol>> {
        if received.is_empty() {
            return x_in.is_zero().then(Vec::new);
        }
        let k = self.sys.input_dim();
        let params = self.sys.params();
        let slots = received.len() * k;
        if params
            .modulus()
            .checked_pow(slots as u32)
            .map_or(true, |c| c > 1 << 22)
        {
            return None;
        }
        let mut best: Option<(usize, Vec<Symbol>)> = None;
        let mut tied = false;
        for_each_vector(slots, params.modulus(), |vals| {
            let mut x = x_in.clone();
            let mut symbols = Vec::with_capacity(received.len());
            for chunk in vals.chunks(k) {
                let u = RingVector::from_raw(params, chunk.to_vec());
                let (next, y) = self.sys.step(&x, &u);
                symbols.push(Symbol { y, u });
                x = next;
            }
            if x.is_zero() {
                let dist: usize = symbols
                    .iter()
                    .zip(received)
                    .map(|(a, b)| a.distance(b))
                    .sum();
                match &best {
                    Some((bd, _)) if dist > *bd => {}
                    Some((bd, _)) if dist == *bd => tied = true,
                    _ => {
                        best = Some((dist, symbols));
                        tied = false;
                    }
                }
            }
            true
        });
        match (best, tied) {
            (Some((_, symbols)), false) => Some(symbols),
            _ => None,
        }
    }
}

impl std::fmt::Debug for WindowDecoder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WindowDecoder")
            .field("t_window", &self.t_window)
            .field("theta", &self.theta)
            .field("d1", &self.d1)
            .field("d2", &self.d2)
            .field("lambda", &self.lambda)
            .finish()
    }
}
