//! Error injection and evaluation campaigns for the encode → corrupt →
//! decode pipeline.
//!
//! All randomness is counter-based: every draw hashes (seed, trial, time,
//! component, purpose) with a splitmix-style mixer, so campaigns replay
//! bit-exactly regardless of evaluation order and without storing patterns.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::iso::{stream_distance, Symbol};
use crate::linalg::RingVector;
use crate::window::WindowDecoder;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ChannelError {
    #[error("pattern entry out of range: time {t}, component {component}")]
    EntryOutOfRange { t: usize, component: usize },
    #[error("pattern entry at time {t} has a zero error value")]
    ZeroErrorValue { t: usize },
    #[error("enumeration too large: {0} patterns exceed the guard")]
    TooLarge(u64),
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic counter-based generator: a draw is a pure function of the
/// seed and the counter tuple.
#[derive(Debug, Clone, Copy)]
pub struct CounterRng {
    seed: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { seed }
    }

    pub fn draw(&self, counters: &[u64]) -> u64 {
        let mut state = splitmix(self.seed);
        for &c in counters {
            state = splitmix(state ^ splitmix(c));
        }
        state
    }

    /// Unbiased-enough uniform draw in [0, bound) via the widening multiply.
    pub fn below(&self, counters: &[u64], bound: u64) -> u64 {
        ((self.draw(counters) as u128 * bound as u128) >> 64) as u64
    }

    /// Uniform in [0, 1) with 53 bits.
    pub fn unit(&self, counters: &[u64]) -> f64 {
        (self.draw(counters) >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// One injected error: `delta` is added to the given component of the symbol
/// at time `t`. Components index the stacked (y; u) vector, outputs first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorEntry {
    pub t: usize,
    pub component: usize,
    pub delta: u64,
}

pub type ErrorPattern = Vec<ErrorEntry>;

#[derive(Debug, Clone)]
pub enum ChannelKind {
    /// Each symbol component is independently replaced by a uniformly random
    /// different ring element with probability epsilon.
    IidSymbol { epsilon: f64 },
    /// Exactly `weight` component errors, uniformly placed, in each disjoint
    /// window of `window` time steps.
    PerWindowWeight { weight: usize, window: usize },
    /// A fixed list of errors applied verbatim.
    Explicit(ErrorPattern),
}

/// A channel model plus the seed that makes it deterministic.
#[derive(Debug, Clone)]
pub struct ChannelModel {
    pub kind: ChannelKind,
    pub seed: u64,
}

impl ChannelModel {
    pub fn new(kind: ChannelKind, seed: u64) -> Self {
        ChannelModel { kind, seed }
    }

    /// Corrupts a clean stream, returning the corrupted stream and the true
    /// error pattern for scoring.
    pub fn inject(&self, clean: &[Symbol]) -> Result<(Vec<Symbol>, ErrorPattern), ChannelError> {
        self.inject_trial(0, clean)
    }

    /// Same, keyed additionally by a trial index for campaign use.
    pub fn inject_trial(
        &self,
        trial: u64,
        clean: &[Symbol],
    ) -> Result<(Vec<Symbol>, ErrorPattern), ChannelError> {
        if clean.is_empty() {
            return Ok((Vec::new(), Vec::new()));
        }
        let params = clean[0].y.params();
        let modulus = params.modulus();
        let n = clean[0].y.len() + clean[0].u.len();
        let rng = CounterRng::new(self.seed);
        let mut pattern = Vec::new();
        match &self.kind {
            ChannelKind::IidSymbol { epsilon } => {
                for (t, _) in clean.iter().enumerate() {
                    for c in 0..n {
                        if rng.unit(&[trial, t as u64, c as u64, 0]) < *epsilon {
                            let delta = 1 + rng.below(&[trial, t as u64, c as u64, 1], modulus - 1);
                            pattern.push(ErrorEntry {
                                t,
                                component: c,
                                delta,
                            });
                        }
                    }
                }
            }
            ChannelKind::PerWindowWeight { weight, window } => {
                assert!(*window > 0);
                for (w, start) in (0..clean.len()).step_by(*window).enumerate() {
                    let span = (*window).min(clean.len() - start);
                    let slots = span * n;
                    if *weight > slots {
                        continue;
                    }
                    // partial Fisher-Yates over the slot indices of this window
                    let mut slot_ids: Vec<usize> = (0..slots).collect();
                    for i in 0..*weight {
                        let j = i + rng.below(&[trial, w as u64, i as u64, 2], (slots - i) as u64)
                            as usize;
                        slot_ids.swap(i, j);
                        let slot = slot_ids[i];
                        let delta = 1 + rng.below(&[trial, w as u64, i as u64, 3], modulus - 1);
                        pattern.push(ErrorEntry {
                            t: start + slot / n,
                            component: slot % n,
                            delta,
                        });
                    }
                }
                pattern.sort_by_key(|e| (e.t, e.component));
            }
            ChannelKind::Explicit(entries) => {
                for e in entries {
                    if e.t >= clean.len() || e.component >= n {
                        return Err(ChannelError::EntryOutOfRange {
                            t: e.t,
                            component: e.component,
                        });
                    }
                    if e.delta % modulus == 0 {
                        return Err(ChannelError::ZeroErrorValue { t: e.t });
                    }
                    pattern.push(e.clone());
                }
            }
        }
        Ok((apply_pattern(clean, &pattern), pattern))
    }
}

/// Adds a pattern to a clean stream.
pub fn apply_pattern(clean: &[Symbol], pattern: &ErrorPattern) -> Vec<Symbol> {
    let mut out = clean.to_vec();
    for e in pattern {
        let sym = &mut out[e.t];
        let q = sym.y.len();
        let params = sym.y.params();
        let target = if e.component < q {
            &mut sym.y
        } else {
            &mut sym.u
        };
        let idx = if e.component < q {
            e.component
        } else {
            e.component - q
        };
        let v = target.get(idx) + params.scalar(e.delta as i64);
        target.set(idx, v);
    }
    out
}

/// Outcome of one decoded trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialResult {
    /// Decoded output equals the transmitted stream.
    Success,
    /// The decoder reported failure.
    Failure,
    /// The decoder accepted an output different from the transmitted stream.
    WrongDecode,
}

impl fmt::Display for TrialResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TrialResult::Success => "success",
            TrialResult::Failure => "failure",
            TrialResult::WrongDecode => "wrong",
        };
        f.write_str(s)
    }
}

/// One detail row: the error weights seen by a disjoint window of one trial.
#[derive(Debug, Clone)]
pub struct WindowRow {
    pub trial: u64,
    pub window: usize,
    pub in_weight: usize,
    pub out_weight: usize,
    pub result: TrialResult,
}

/// Aggregated campaign outcome.
#[derive(Debug, Clone, Default)]
pub struct CampaignReport {
    pub trials: u64,
    pub successes: u64,
    pub failures: u64,
    pub wrong_decodes: u64,
    pub total_components: u64,
    pub corrupted_components: u64,
    pub residual_components: u64,
    /// Histogram of per-disjoint-window injected weights.
    pub window_weight_hist: BTreeMap<usize, u64>,
    pub rows: Vec<WindowRow>,
}

impl CampaignReport {
    /// Input symbol-component error rate.
    pub fn ser_in(&self) -> f64 {
        if self.total_components == 0 {
            0.0
        } else {
            self.corrupted_components as f64 / self.total_components as f64
        }
    }

    /// Output symbol-component error rate (failed trials count the received
    /// stream as the output, since the decoder produced nothing better).
    pub fn ser_out(&self) -> f64 {
        if self.total_components == 0 {
            0.0
        } else {
            self.residual_components as f64 / self.total_components as f64
        }
    }

    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    fn record_trial(
        &mut self,
        trial: u64,
        window: usize,
        sent: &[Symbol],
        received: &[Symbol],
        decoded: Option<&[Symbol]>,
        result: TrialResult,
    ) {
        self.trials += 1;
        match result {
            TrialResult::Success => self.successes += 1,
            TrialResult::Failure => self.failures += 1,
            TrialResult::WrongDecode => self.wrong_decodes += 1,
        }
        let n = sent[0].y.len() + sent[0].u.len();
        self.total_components += (sent.len() * n) as u64;
        self.corrupted_components += stream_distance(sent, received) as u64;
        let out = decoded.unwrap_or(received);
        self.residual_components += stream_distance(sent, out) as u64;
        for (w, start) in (0..sent.len()).step_by(window).enumerate() {
            let end = (start + window).min(sent.len());
            let in_weight = stream_distance(&sent[start..end], &received[start..end]);
            let out_weight = stream_distance(&sent[start..end], &out[start..end]);
            *self.window_weight_hist.entry(in_weight).or_insert(0) += 1;
            self.rows.push(WindowRow {
                trial,
                window: w,
                in_weight,
                out_weight,
                result,
            });
        }
    }

    /// Detail CSV: `trial,window,in_weight,out_weight,result`.
    pub fn detail_csv(&self) -> String {
        let mut out = String::from("trial,window,in_weight,out_weight,result\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.trial, r.window, r.in_weight, r.out_weight, r.result
            ));
        }
        out
    }

    /// Summary CSV: `epsilon,trials,success_rate,ser_in,ser_out`.
    pub fn summary_csv(&self, epsilon: f64) -> String {
        format!(
            "epsilon,trials,success_rate,ser_in,ser_out\n{},{},{:.6},{:.6},{:.6}\n",
            epsilon,
            self.trials,
            self.success_rate(),
            self.ser_in(),
            self.ser_out()
        )
    }
}

fn classify(sent: &[Symbol], decoded: Result<&Vec<Symbol>, ()>) -> TrialResult {
    match decoded {
        Ok(out) if stream_distance(sent, out) == 0 => TrialResult::Success,
        Ok(_) => TrialResult::WrongDecode,
        Err(()) => TrialResult::Failure,
    }
}

/// Decodes one corrupted stream and files it into the report.
fn run_trial(
    dec: &WindowDecoder,
    report: &mut CampaignReport,
    trial: u64,
    sent: &[Symbol],
    received: &[Symbol],
) {
    let decoded = dec.decode_stream(received);
    let result = classify(sent, decoded.as_ref().map_err(|_| ()));
    report.record_trial(
        trial,
        dec.window_len(),
        sent,
        received,
        decoded.as_deref().ok(),
        result,
    );
}

/// Enumerates every error pattern whose weight in every sliding length-T
/// window is at most `max_weight`, decodes each, and aggregates the results.
/// The pattern count is pre-counted against a 10^7 guard.
pub fn run_exhaustive(
    dec: &WindowDecoder,
    message: &[RingVector],
    max_weight: usize,
) -> Result<CampaignReport, ChannelError> {
    const GUARD: u64 = 10_000_000;
    let sys = dec.system();
    let sent = sys
        .encode(message, true)
        .expect("bundled systems always terminate")
        .symbols();
    let n = sys.symbol_dim();
    let t_window = dec.window_len();
    let deltas = sys.params().modulus() - 1;

    // counting pass with early exit at the guard
    let mut count = 0u64;
    let mut pattern: ErrorPattern = Vec::new();
    let complete = enumerate_patterns(
        sent.len(),
        n,
        t_window,
        max_weight,
        deltas,
        0,
        &mut pattern,
        &mut |_| {
            count += 1;
            count <= GUARD
        },
    );
    if !complete {
        return Err(ChannelError::TooLarge(GUARD));
    }

    let mut report = CampaignReport::default();
    let mut trial = 0u64;
    enumerate_patterns(
        sent.len(),
        n,
        t_window,
        max_weight,
        deltas,
        0,
        &mut pattern,
        &mut |pattern| {
            let received = apply_pattern(&sent, pattern);
            run_trial(dec, &mut report, trial, &sent, &received);
            trial += 1;
            true
        },
    );
    Ok(report)
}

/// True iff every sliding window of `t_window` time steps contains at most
/// `max_weight` of the chosen component slots (slots are time-major and
/// must be sorted ascending).
fn window_ok(chosen: &[usize], n: usize, t_window: usize, max_weight: usize) -> bool {
    if chosen.len() <= max_weight {
        return true;
    }
    let times: Vec<usize> = chosen.iter().map(|s| s / n).collect();
    // a window is violated iff some max_weight+1 consecutive chosen entries
    // span fewer than t_window time steps
    times
        .windows(max_weight + 1)
        .all(|w| w[max_weight] >= w[0] + t_window)
}

/// Depth-first enumeration over supports (ascending slot order) and nonzero
/// error values. The visitor returns false to abort; the function reports
/// whether enumeration ran to completion.
#[allow(clippy::too_many_arguments)]
fn enumerate_patterns(
    len: usize,
    n: usize,
    t_window: usize,
    max_weight: usize,
    deltas: u64,
    slot: usize,
    pattern: &mut ErrorPattern,
    visit: &mut impl FnMut(&ErrorPattern) -> bool,
) -> bool {
    if !visit(pattern) {
        return false;
    }
    for s in slot..len * n {
        let support: Vec<usize> = pattern
            .iter()
            .map(|e| e.t * n + e.component)
            .chain(std::iter::once(s))
            .collect();
        if !window_ok(&support, n, t_window, max_weight) {
            continue;
        }
        for delta in 1..=deltas {
            pattern.push(ErrorEntry {
                t: s / n,
                component: s % n,
                delta,
            });
            let cont = enumerate_patterns(
                len, n, t_window, max_weight, deltas, s + 1, pattern, visit,
            );
            pattern.pop();
            if !cont {
                return false;
            }
        }
    }
    true
}

/// Runs seeded Monte-Carlo trials: a fresh random message per trial, channel
/// corruption, decode, aggregate. Deterministic in (seed, trials, lengths).
pub fn run_montecarlo(
    dec: &WindowDecoder,
    model: &ChannelModel,
    msg_len: usize,
    trials: u64,
) -> Result<CampaignReport, ChannelError> {
    assert!(trials >= 1);
    let sys = dec.system();
    let params = sys.params();
    let k = sys.input_dim();
    let rng = CounterRng::new(model.seed);
    let mut report = CampaignReport::default();
    for trial in 0..trials {
        let message: Vec<RingVector> = (0..msg_len)
            .map(|t| {
                RingVector::from_raw(
                    params,
                    (0..k)
                        .map(|j| rng.below(&[trial, t as u64, j as u64, 4], params.modulus()))
                        .collect(),
                )
            })
            .collect();
        let sent = sys
            .encode(&message, true)
            .expect("bundled systems always terminate")
            .symbols();
        let (received, _) = model.inject_trial(trial, &sent)?;
        run_trial(dec, &mut report, trial, &sent, &received);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn clean_stream(len: usize) -> Vec<Symbol> {
        let sys = bundled::scalar_system();
        let msg = bundled::ramp_message(&sys, len);
        sys.encode(&msg, true).unwrap().symbols()
    }

    #[test]
    fn iid_epsilon_zero_is_identity() {
        let clean = clean_stream(8);
        let model = ChannelModel::new(ChannelKind::IidSymbol { epsilon: 0.0 }, 7);
        let (out, pattern) = model.inject(&clean).unwrap();
        assert_eq!(out, clean);
        assert!(pattern.is_empty());
    }

    #[test]
    fn explicit_pattern_changes_one_symbol() {
        let clean = clean_stream(8);
        let model = ChannelModel::new(
            ChannelKind::Explicit(vec![ErrorEntry {
                t: 3,
                component: 0,
                delta: 2,
            }]),
            0,
        );
        let (out, pattern) = model.inject(&clean).unwrap();
        assert_eq!(pattern.len(), 1);
        assert_eq!(stream_distance(&clean, &out), 1);
        let diff = out[3].y.get(0) - clean[3].y.get(0);
        assert_eq!(diff.value(), 2);
    }

    #[test]
    fn explicit_pattern_validation() {
        let clean = clean_stream(4);
        let model = ChannelModel::new(
            ChannelKind::Explicit(vec![ErrorEntry {
                t: 99,
                component: 0,
                delta: 1,
            }]),
            0,
        );
        assert!(matches!(
            model.inject(&clean),
            Err(ChannelError::EntryOutOfRange { .. })
        ));
    }

    #[test]
    fn same_seed_same_corruption() {
        let clean = clean_stream(32);
        let model = ChannelModel::new(ChannelKind::IidSymbol { epsilon: 0.3 }, 42);
        let (a, pa) = model.inject(&clean).unwrap();
        let (b, pb) = model.inject(&clean).unwrap();
        assert_eq!(a, b);
        assert_eq!(pa, pb);
        assert!(!pa.is_empty(), "epsilon 0.3 over 64 components should hit");

        let other = ChannelModel::new(ChannelKind::IidSymbol { epsilon: 0.3 }, 43);
        let (c, _) = other.inject(&clean).unwrap();
        assert_ne!(a, c, "different seeds should differ at this size");
    }

    #[test]
    fn per_window_weight_places_exact_errors() {
        let clean = clean_stream(16);
        let model = ChannelModel::new(
            ChannelKind::PerWindowWeight {
                weight: 2,
                window: 4,
            },
            9,
        );
        let (out, pattern) = model.inject(&clean).unwrap();
        for start in (0..clean.len()).step_by(4) {
            let end = (start + 4).min(clean.len());
            let w = stream_distance(&clean[start..end], &out[start..end]);
            assert_eq!(w, 2, "window at {start}");
        }
        assert_eq!(pattern.len(), (clean.len() / 4 + 1) * 2);
    }

    #[test]
    fn montecarlo_clean_channel_all_success() {
        let dec =
            WindowDecoder::analyze(bundled::scalar_system(), 4, 1).unwrap();
        let model = ChannelModel::new(ChannelKind::IidSymbol { epsilon: 0.0 }, 5);
        let report = run_montecarlo(&dec, &model, 8, 10).unwrap();
        assert_eq!(report.successes, 10);
        assert_eq!(report.failures + report.wrong_decodes, 0);
        assert_eq!(report.ser_out(), 0.0);
    }

    #[test]
    fn montecarlo_reports_are_reproducible() {
        let dec =
            WindowDecoder::analyze(bundled::scalar_system(), 4, 1).unwrap();
        let model = ChannelModel::new(ChannelKind::IidSymbol { epsilon: 0.05 }, 11);
        let a = run_montecarlo(&dec, &model, 8, 25).unwrap();
        let b = run_montecarlo(&dec, &model, 8, 25).unwrap();
        assert_eq!(a.detail_csv(), b.detail_csv());
        assert_eq!(a.summary_csv(0.05), b.summary_csv(0.05));
    }

    #[test]
    fn exhaustive_lambda_zero_is_single_clean_trial() {
        let dec =
            WindowDecoder::analyze(bundled::scalar_system(), 4, 1).unwrap();
        assert_eq!(dec.lambda(), 0);
        let msg = bundled::ramp_message(dec.system(), 8);
        let report = run_exhaustive(&dec, &msg, dec.lambda()).unwrap();
        assert_eq!(report.trials, 1);
        assert_eq!(report.successes, 1);
    }

    #[test]
    fn sliding_window_constraint() {
        // weight 1, window 3, 4 time steps, 1 component each
        assert!(window_ok(&[0, 3], 1, 3, 1));
        assert!(!window_ok(&[0, 2], 1, 3, 1));
        assert!(window_ok(&[0, 1], 1, 3, 2));
        // two components per step: slots 0,1 are both time 0
        assert!(!window_ok(&[0, 1], 2, 3, 1));
    }
}
