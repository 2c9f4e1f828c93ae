//! Convolutional and block codes over the ring Z/p^r.
//!
//! The crate builds up from exact ring arithmetic and mod-p linear algebra
//! to free block codes with p-adic lifting decoders, state-space (A, B, C, D)
//! encoders for convolutional codes, a sliding-window stream decoder, and a
//! deterministic channel harness for exhaustive and Monte-Carlo evaluation.

pub mod block;
pub mod bundled;
pub mod channel;
pub mod iso;
pub mod linalg;
pub mod poly;
pub mod ring;
pub mod selftest;
pub mod window;

pub use block::{BlockCode, CodeError, DecodeFailure, DecodeResult, FieldDecoder};
pub use channel::{CampaignReport, ChannelError, ChannelKind, ChannelModel, CounterRng, ErrorEntry, ErrorPattern, TrialResult};
pub use linalg::{FieldMatrix, FieldSolution, LinalgError, RingMatrix, RingVector};
pub use iso::{IsoSystem, Symbol, SystemError, Trajectory};
pub use poly::{PolyEncoder, PolyError, PolyVector};
pub use ring::{DigitVector, RingError, RingParams, RingScalar};
pub use window::{lambda_bound, StreamError, WindowDecoder, WindowError, WindowOutcome, WindowResult};
