//! Free linear block codes over Z/p^r and their layered lifting decoders.
//!
//! Both decoders reduce ring decoding to repeated decoding over the residue
//! field F_p, one p-adic digit layer per pass:
//!
//! * `gv_decode` works on the generator side (Greferath–Vellbinger). Layer i
//!   solves `delta_i = G0*u_i + e_i` with a field decoder for `G mod p` and
//!   reassembles the message and error digit by digit.
//! * `tln_decode` works on the syndrome side (an adapted
//!   Torrecillas–Lobillo–Navarro scheme for a full-rank parity-check matrix).
//!   Layer l syndrome-decodes `delta_l = H0*e_l` with a coset-leader table
//!   for `H mod p`.
//!
//! Both correct any error whose r digit layers are each individually within
//! the field decoder's capability. Ambiguities (nearest-codeword ties, coset
//! leader ties, unknown syndromes) fail loudly instead of guessing; the
//! stream decoder depends on that to stay sound.

use std::collections::HashMap;

use thiserror::Error;

use crate::linalg::{for_each_vector, FieldMatrix, RingMatrix, RingVector};
use crate::ring::RingParams;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("a block code needs a generator or a parity-check matrix")]
    NoMatrices,
    #[error("generator matrix is not injective")]
    GeneratorNotInjective,
    #[error("parity * generator is nonzero")]
    IncompatiblePair,
    #[error("enumeration too large: {0}")]
    TooLarge(String),
}

/// A decode attempt that could not produce a unique answer.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DecodeFailure {
    #[error("nearest codeword not unique at distance {distance}")]
    AmbiguousNearest { distance: usize },
    #[error("nearest codeword at distance {distance} exceeds capability {capability}")]
    BeyondCapability { distance: usize, capability: usize },
    #[error("no coset leader stored for this syndrome")]
    UnknownSyndrome,
    #[error("coset leader not unique at weight {weight}")]
    AmbiguousLeader { weight: usize },
    #[error("layer {layer} residual is not divisible by p^{layer}")]
    LayerNotDivisible { layer: u32 },
}

/// A free linear block code over Z/p^r given by a generator (n x k, columns
/// span the code) and/or a parity-check matrix (q x n).
#[derive(Debug, Clone)]
pub struct BlockCode {
    params: RingParams,
    n: usize,
    k: usize,
    generator: Option<RingMatrix>,
    parity: Option<RingMatrix>,
}

impl BlockCode {
    pub fn from_generator(generator: RingMatrix) -> Result<Self, CodeError> {
        if !generator.is_injective() {
            return Err(CodeError::GeneratorNotInjective);
        }
        Ok(BlockCode {
            params: generator.params(),
            n: generator.rows(),
            k: generator.cols(),
            generator: Some(generator),
            parity: None,
        })
    }

    pub fn from_parity(parity: RingMatrix) -> Result<Self, CodeError> {
        let n = parity.cols();
        let k = n - parity.rank_mod_p();
        Ok(BlockCode {
            params: parity.params(),
            n,
            k,
            generator: None,
            parity: Some(parity),
        })
    }

    pub fn new(generator: RingMatrix, parity: RingMatrix) -> Result<Self, CodeError> {
        if !generator.is_injective() {
            return Err(CodeError::GeneratorNotInjective);
        }
        if !parity.mul(&generator).is_zero() {
            return Err(CodeError::IncompatiblePair);
        }
        Ok(BlockCode {
            params: generator.params(),
            n: generator.rows(),
            k: generator.cols(),
            generator: Some(generator),
            parity: Some(parity),
        })
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> Option<&RingMatrix> {
        self.generator.as_ref()
    }

    pub fn parity(&self) -> Option<&RingMatrix> {
        self.parity.as_ref()
    }

    pub fn syndrome(&self, word: &RingVector) -> RingVector {
        self.parity
            .as_ref()
            .expect("code has no parity-check matrix")
            .mul_vec(word)
    }

    /// Minimum distance of the code. Free codes have the same distance as
    /// their mod-p restriction, so this enumerates the residue-field code.
    pub fn min_distance(&self) -> Result<usize, CodeError> {
        if let Some(g) = &self.generator {
            min_distance_bruteforce(&g.mod_p())
        } else {
            let h0 = self.parity.as_ref().ok_or(CodeError::NoMatrices)?.mod_p();
            min_distance_from_parity(&h0)
        }
    }

    /// Generator-side lifting decode of a received word.
    ///
    /// Requires an injective generator (guaranteed by construction) and a
    /// field decoder built from `G mod p`. Corrects every error whose digit
    /// layers are each within the inner decoder's capability.
    pub fn gv_decode(
        &self,
        received: &RingVector,
        inner: &FieldDecoder,
    ) -> Result<DecodeResult, DecodeFailure> {
        let g = self.generator.as_ref().expect("code has no generator");
        assert_eq!(received.len(), self.n);
        let r = self.params.r();
        let mut message = RingVector::zero(self.params, self.k);
        let mut error = RingVector::zero(self.params, self.n);
        for layer in 0..r {
            let resid = received.sub(&g.mul_vec(&message)).sub(&error);
            let delta = resid
                .exact_div_pow(layer)
                .map_err(|_| DecodeFailure::LayerNotDivisible { layer })?
                .mod_p();
            let (u_digit, e_digit) = inner.decode_word(&delta)?;
            message = message.add_layer(&u_digit, layer);
            error = error.add_layer(&e_digit, layer);
        }
        let codeword = g.mul_vec(&message);
        debug_assert_eq!(codeword.add(&error), *received);
        Ok(DecodeResult {
            message,
            codeword,
            error,
        })
    }

    /// Syndrome-side lifting decode: recovers the error vector from its
    /// syndrome `s = H*e`.
    ///
    /// The guarantee (each within-capability digit layer recovered exactly)
    /// holds when the parity-check matrix has full row rank mod p; with a
    /// rank-deficient parity the decode still either returns a vector with
    /// `H*e = s` or fails, it just covers fewer syndromes.
    pub fn tln_decode(
        &self,
        syndrome: &RingVector,
        inner: &FieldDecoder,
    ) -> Result<RingVector, DecodeFailure> {
        let h = self.parity.as_ref().expect("code has no parity-check matrix");
        assert_eq!(syndrome.len(), h.rows());
        let r = self.params.r();
        let mut error = RingVector::zero(self.params, self.n);
        for layer in 0..r {
            let resid = syndrome.sub(&h.mul_vec(&error));
            let delta = resid
                .exact_div_pow(layer)
                .map_err(|_| DecodeFailure::LayerNotDivisible { layer })?
                .mod_p();
            let e_digit = inner.decode_syndrome(&delta)?;
            error = error.add_layer(&e_digit, layer);
        }
        debug_assert_eq!(h.mul_vec(&error), *syndrome);
        Ok(error)
    }
}

/// Output of a generator-side decode: `codeword = G*message` and
/// `codeword + error = received`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub message: RingVector,
    pub codeword: RingVector,
    pub error: RingVector,
}

/// Minimum Hamming weight over the nonzero codewords of the mod-p code
/// spanned by the columns of `g0`. Enumerates all p^k messages.
pub fn min_distance_bruteforce(g0: &FieldMatrix) -> Result<usize, CodeError> {
    let p = g0.p();
    let k = g0.cols() as u32;
    if p.checked_pow(k).map_or(true, |c| c > 1 << 22) {
        return Err(CodeError::TooLarge(format!("{p}^{k} messages")));
    }
    let mut best = usize::MAX;
    for_each_vector(g0.cols(), p, |msg| {
        if msg.iter().any(|&v| v != 0) {
            let w = g0.mul_vec(msg).iter().filter(|&&v| v != 0).count();
            if w > 0 {
                best = best.min(w);
            }
        }
        true
    });
    if best == usize::MAX {
        Err(CodeError::TooLarge("code has no nonzero codewords".into()))
    } else {
        Ok(best)
    }
}

/// Minimum distance of `ker(h0)` over F_p, via a kernel basis.
/// Returns None for the trivial kernel.
pub fn min_distance_from_parity_opt(h0: &FieldMatrix) -> Result<Option<usize>, CodeError> {
    let basis = h0.kernel_basis();
    if basis.is_empty() {
        return Ok(None);
    }
    let p = h0.p();
    let dim = basis.len() as u32;
    if p.checked_pow(dim).map_or(true, |c| c > 1 << 22) {
        return Err(CodeError::TooLarge(format!("{p}^{dim} kernel vectors")));
    }
    let mut best = usize::MAX;
    for_each_vector(basis.len(), p, |coeffs| {
        if coeffs.iter().any(|&v| v != 0) {
            let mut word = vec![0u64; h0.cols()];
            for (c, b) in coeffs.iter().zip(&basis) {
                for (w, &bv) in word.iter_mut().zip(b) {
                    *w = (*w + c * bv) % p;
                }
            }
            best = best.min(word.iter().filter(|&&v| v != 0).count());
        }
        true
    });
    Ok(Some(best))
}

fn min_distance_from_parity(h0: &FieldMatrix) -> Result<usize, CodeError> {
    min_distance_from_parity_opt(h0)?
        .ok_or_else(|| CodeError::TooLarge("code has no nonzero codewords".into()))
}

enum Leader {
    Unique(Vec<u64>),
    Tied { weight: usize },
}

enum DecoderKind {
    /// Exhaustive nearest-codeword search over all p^k messages. Fails on
    /// ties and on any error beyond the capability t = (d-1)/2.
    BruteForceNearest {
        generator: FieldMatrix,
        codewords: Vec<(Vec<u64>, Vec<u64>)>,
    },
    /// Table of minimum-weight coset leaders per syndrome, built eagerly by
    /// enumerating error vectors in weight order. Ties are recorded and fail
    /// at decode time.
    SyndromeTable {
        parity: FieldMatrix,
        table: HashMap<Vec<u64>, Leader>,
    },
}

/// An exact decoder for a linear code over F_p, used as the inner step of
/// both lifting decoders.
pub struct FieldDecoder {
    kind: DecoderKind,
    capability: usize,
}

impl FieldDecoder {
    /// Builds an exhaustive nearest-codeword decoder for the code spanned by
    /// the columns of `g0`.
    pub fn nearest_from_generator(g0: FieldMatrix) -> Result<Self, CodeError> {
        let p = g0.p();
        if p.checked_pow(g0.cols() as u32).map_or(true, |c| c > 1 << 20) {
            return Err(CodeError::TooLarge(format!(
                "{p}^{} codewords for nearest search",
                g0.cols()
            )));
        }
        let d = min_distance_bruteforce(&g0)?;
        let mut codewords = Vec::new();
        for_each_vector(g0.cols(), p, |msg| {
            codewords.push((msg.to_vec(), g0.mul_vec(msg)));
            true
        });
        Ok(FieldDecoder {
            kind: DecoderKind::BruteForceNearest {
                generator: g0,
                codewords,
            },
            capability: (d - 1) / 2,
        })
    }

    /// Builds a full coset-leader table for the code `ker(h0)`.
    pub fn syndrome_from_parity(h0: FieldMatrix) -> Result<Self, CodeError> {
        let p = h0.p();
        let n = h0.cols();
        let too_big = |e: usize, cap: u64| p.checked_pow(e as u32).map_or(true, |c| c > cap);
        if too_big(n, 1 << 22) || too_big(h0.rows(), 1 << 20) {
            return Err(CodeError::TooLarge(format!(
                "{p}^{n} error vectors for coset table"
            )));
        }
        let mut table: HashMap<Vec<u64>, Leader> = HashMap::new();
        // weight-ordered enumeration: the first vector seen per syndrome is a
        // minimum-weight leader; a second at the same weight marks a tie
        for weight in 0..=n {
            for_each_support(n, weight, p, |e| {
                let syndrome = h0.mul_vec(e);
                match table.get(&syndrome) {
                    None => {
                        table.insert(syndrome, Leader::Unique(e.to_vec()));
                    }
                    Some(Leader::Unique(prev)) => {
                        let prev_w = prev.iter().filter(|&&v| v != 0).count();
                        if prev_w == weight {
                            table.insert(syndrome, Leader::Tied { weight });
                        }
                    }
                    Some(Leader::Tied { .. }) => {}
                }
            });
        }
        let capability = match min_distance_from_parity_opt(&h0)? {
            Some(d) => (d - 1) / 2,
            None => n, // trivial code: every vector is its own unique leader
        };
        Ok(FieldDecoder {
            kind: DecoderKind::SyndromeTable { parity: h0, table },
            capability,
        })
    }

    /// Correction capability t of the underlying field code.
    pub fn capability(&self) -> usize {
        self.capability
    }

    /// Generator mode: splits a received word into `(message, error)` with
    /// `word = G0*message + error` and `weight(error) <= t`.
    pub fn decode_word(&self, word: &[u64]) -> Result<(Vec<u64>, Vec<u64>), DecodeFailure> {
        let DecoderKind::BruteForceNearest {
            generator,
            codewords,
        } = &self.kind
        else {
            panic!("decode_word called on a syndrome decoder");
        };
        assert_eq!(word.len(), generator.rows());
        let p = generator.p();
        let mut best: Option<(usize, &Vec<u64>, Vec<u64>)> = None;
        let mut tied = false;
        for (msg, cw) in codewords {
            let dist = cw.iter().zip(word).filter(|(a, b)| a != b).count();
            match &best {
                Some((bd, _, _)) if dist > *bd => {}
                Some((bd, _, _)) if dist == *bd => tied = true,
                _ => {
                    let err = word
                        .iter()
                        .zip(cw)
                        .map(|(&w, &c)| (w + p - c) % p)
                        .collect();
                    best = Some((dist, msg, err));
                    tied = false;
                }
            }
        }
        let (dist, msg, err) = best.expect("codeword list is never empty");
        if tied {
            return Err(DecodeFailure::AmbiguousNearest { distance: dist });
        }
        if dist > self.capability {
            return Err(DecodeFailure::BeyondCapability {
                distance: dist,
                capability: self.capability,
            });
        }
        Ok((msg.clone(), err))
    }

    /// Syndrome mode: the unique minimum-weight error with `H0*e = syndrome`.
    pub fn decode_syndrome(&self, syndrome: &[u64]) -> Result<Vec<u64>, DecodeFailure> {
        let DecoderKind::SyndromeTable { parity, table } = &self.kind else {
            panic!("decode_syndrome called on a nearest-codeword decoder");
        };
        assert_eq!(syndrome.len(), parity.rows());
        match table.get(syndrome) {
            None => Err(DecodeFailure::UnknownSyndrome),
            Some(Leader::Tied { weight }) => {
                Err(DecodeFailure::AmbiguousLeader { weight: *weight })
            }
            Some(Leader::Unique(e)) => Ok(e.clone()),
        }
    }
}

impl std::fmt::Debug for FieldDecoder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            DecoderKind::BruteForceNearest { generator, .. } => write!(
                f,
                "BruteForceNearest(n={}, k={}, t={})",
                generator.rows(),
                generator.cols(),
                self.capability
            ),
            DecoderKind::SyndromeTable { parity, .. } => write!(
                f,
                "SyndromeTable(q={}, n={}, t={})",
                parity.rows(),
                parity.cols(),
                self.capability
            ),
        }
    }
}

/// Visits every vector of length n over F_p with exactly the given weight.
fn for_each_support(n: usize, weight: usize, p: u64, mut f: impl FnMut(&[u64])) {
    fn rec(
        v: &mut Vec<u64>,
        start: usize,
        left: usize,
        p: u64,
        f: &mut impl FnMut(&[u64]),
    ) {
        if left == 0 {
            f(v);
            return;
        }
        let n = v.len();
        for pos in start..=n - left {
            for val in 1..p {
                v[pos] = val;
                rec(v, pos + 1, left - 1, p, f);
            }
            v[pos] = 0;
        }
    }
    if weight > n {
        return;
    }
    let mut v = vec![0u64; n];
    rec(&mut v, 0, weight, p, &mut f);
}

/// Evaluates the layered syndrome reformulation directly from the digit
/// expansions: the l-th correction term is assembled from the syndrome
/// digits s_0..s_l, the parity digit matrices H_j and the already-known
/// error digits e_0..e_{l-1}, all read as ring elements, and must come out
/// as a multiple of p^(r-1). The quotient equals `H0*e_l` over F_p.
///
/// This is kept as an independent cross-check of the compact layer residual
/// used by `tln_decode`; the two must agree on every layer.
pub fn xi_check(
    h: &RingMatrix,
    e_digits: &[Vec<u64>],
    s: &RingVector,
    l: u32,
) -> Result<Vec<u64>, DecodeFailure> {
    let params = h.params();
    let r = params.r();
    assert!(l < r);
    assert!(e_digits.len() >= l as usize);
    let q = h.rows();

    // digit matrices of H lifted back into the ring
    let h_digit: Vec<RingMatrix> = (0..r)
        .map(|j| {
            let layer = h.digit_layer(j);
            RingMatrix::from_fn(params, q, h.cols(), |r_, c_| layer.get(r_, c_) as i64)
        })
        .collect();
    let e_digit: Vec<RingVector> = e_digits
        .iter()
        .map(|d| RingVector::from_layer(params, d, 0))
        .collect();
    let s_digits = (0..r).map(|j| s.digit_layer(j)).collect::<Vec<_>>();

    // first summand: syndrome digits s_0..s_l placed at positions r-1-l..r-1
    let mut xi = RingVector::zero(params, q);
    for (m, j) in ((r - 1 - l)..r).enumerate() {
        xi = xi.add_layer(&s_digits[m], j);
    }
    // second summand: convolution terms of the known error digits below the
    // top position
    for j in (r - 1 - l)..r.saturating_sub(1) {
        let m = j - (r - 1 - l);
        let mut term = RingVector::zero(params, q);
        for i in 0..=m {
            term = term.add(&h_digit[(m - i) as usize].mul_vec(&e_digit[i as usize]));
        }
        // scale by p^j
        let scaled = RingVector::from_raw(
            params,
            term.values()
                .iter()
                .map(|&v| v * params.p_pow(j) % params.modulus())
                .collect(),
        );
        xi = xi.sub(&scaled);
    }
    // third summand: the top-position contribution of the known digits
    let mut top = RingVector::zero(params, q);
    for i in 0..l {
        top = top.add(&h_digit[(l - i) as usize].mul_vec(&e_digit[i as usize]));
    }
    let scaled = RingVector::from_raw(
        params,
        top.values()
            .iter()
            .map(|&v| v * params.p_pow(r - 1) % params.modulus())
            .collect(),
    );
    xi = xi.sub(&scaled);

    let quotient = xi
        .exact_div_pow(r - 1)
        .map_err(|_| DecodeFailure::LayerNotDivisible { layer: l })?;
    Ok(quotient.values().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingParams;

    fn z4() -> RingParams {
        RingParams::new(2, 2).unwrap()
    }

    fn z9() -> RingParams {
        RingParams::new(3, 2).unwrap()
    }

    fn rep3(params: RingParams) -> BlockCode {
        BlockCode::from_generator(RingMatrix::from_rows_i64(params, &[&[1], &[1], &[1]]))
            .unwrap()
    }

    #[test]
    fn min_distance_examples() {
        let g = FieldMatrix::from_rows(2, &[vec![1], vec![1], vec![1]]);
        assert_eq!(min_distance_bruteforce(&g).unwrap(), 3);

        let g = FieldMatrix::from_rows(2, &[vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert_eq!(min_distance_bruteforce(&g).unwrap(), 2);

        let g = FieldMatrix::from_rows(3, &[vec![1], vec![1], vec![1], vec![1]]);
        assert_eq!(min_distance_bruteforce(&g).unwrap(), 4);
    }

    #[test]
    fn free_code_distance_matches_ring_enumeration() {
        assert_eq!(rep3(z4()).min_distance().unwrap(), 3);
        let g = RingMatrix::from_rows_i64(z9(), &[&[1], &[1]]);
        assert_eq!(
            BlockCode::from_generator(g).unwrap().min_distance().unwrap(),
            2
        );

        // oracle: enumerate all 16 ring codewords of a Z4 code directly
        let g = RingMatrix::from_rows_i64(z4(), &[&[1, 0], &[1, 1], &[0, 1], &[1, 2]]);
        let code = BlockCode::from_generator(g.clone()).unwrap();
        let mut best = usize::MAX;
        for_each_vector(2, 4, |msg| {
            if msg.iter().any(|&v| v != 0) {
                let w = g
                    .mul_vec(&RingVector::from_raw(z4(), msg.to_vec()))
                    .weight();
                best = best.min(w);
            }
            true
        });
        assert_eq!(code.min_distance().unwrap(), best);
    }

    #[test]
    fn field_decoder_repetition() {
        let g0 = FieldMatrix::from_rows(2, &[vec![1], vec![1], vec![1]]);
        let dec = FieldDecoder::nearest_from_generator(g0).unwrap();
        assert_eq!(dec.capability(), 1);
        let (msg, err) = dec.decode_word(&[1, 0, 1]).unwrap();
        assert_eq!(msg, vec![1]);
        assert_eq!(err, vec![0, 1, 0]);
        // a clean codeword decodes with zero error
        let (msg, err) = dec.decode_word(&[1, 1, 1]).unwrap();
        assert_eq!(msg, vec![1]);
        assert_eq!(err, vec![0, 0, 0]);
    }

    #[test]
    fn field_decoder_syndrome_table() {
        let h0 = FieldMatrix::from_rows(2, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let dec = FieldDecoder::syndrome_from_parity(h0).unwrap();
        assert_eq!(dec.decode_syndrome(&[1, 0]).unwrap(), vec![1, 0, 0]);
        assert_eq!(dec.decode_syndrome(&[0, 0]).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn field_decoder_tie_fails() {
        // two columns of a [2,1] parity code: received equidistant from both
        let g0 = FieldMatrix::from_rows(2, &[vec![1], vec![1]]);
        let dec = FieldDecoder::nearest_from_generator(g0).unwrap();
        assert!(matches!(
            dec.decode_word(&[1, 0]),
            Err(DecodeFailure::AmbiguousNearest { .. })
        ));
    }

    #[test]
    fn gv_decode_z4_repetition() {
        let code = rep3(z4());
        let inner =
            FieldDecoder::nearest_from_generator(code.generator().unwrap().mod_p()).unwrap();
        // documented hand trace: layer 0 majority gives u0=1, layer 1 gives
        // u1=1 with e1=(0,1,0)
        let received = RingVector::from_i64(z4(), &[3, 1, 3]);
        let res = code.gv_decode(&received, &inner).unwrap();
        assert_eq!(res.message, RingVector::from_i64(z4(), &[3]));
        assert_eq!(res.error, RingVector::from_i64(z4(), &[0, 2, 0]));
        assert_eq!(res.codeword, RingVector::from_i64(z4(), &[3, 3, 3]));

        // zero-error round trip
        let clean = RingVector::from_i64(z4(), &[2, 2, 2]);
        let res = code.gv_decode(&clean, &inner).unwrap();
        assert_eq!(res.message, RingVector::from_i64(z4(), &[2]));
        assert!(res.error.is_zero());
    }

    #[test]
    fn gv_decode_r1_is_single_field_pass() {
        let f2 = RingParams::new(2, 1).unwrap();
        let code = rep3(f2);
        let inner =
            FieldDecoder::nearest_from_generator(code.generator().unwrap().mod_p()).unwrap();
        let received = RingVector::from_i64(f2, &[1, 0, 1]);
        let res = code.gv_decode(&received, &inner).unwrap();
        assert_eq!(res.message, RingVector::from_i64(f2, &[1]));
        assert_eq!(res.error, RingVector::from_i64(f2, &[0, 1, 0]));
    }

    /// Exhaustive GV guarantee on a small code: every error whose digit
    /// layers each have weight <= t is corrected exactly.
    #[test]
    fn gv_guarantee_exhaustive_z4() {
        let code = rep3(z4());
        let g = code.generator().unwrap().clone();
        let inner = FieldDecoder::nearest_from_generator(g.mod_p()).unwrap();
        for m in 0..4i64 {
            let msg = RingVector::from_i64(z4(), &[m]);
            let cw = g.mul_vec(&msg);
            for_each_vector(3, 4, |e| {
                let err = RingVector::from_raw(z4(), e.to_vec());
                let within = (0..2u32).all(|l| {
                    err.digit_layer(l).iter().filter(|&&d| d != 0).count() <= 1
                });
                if within {
                    let res = code.gv_decode(&cw.add(&err), &inner).unwrap();
                    assert_eq!(res.message, msg);
                    assert_eq!(res.error, err);
                }
                true
            });
        }
    }

    fn z4_parity() -> BlockCode {
        BlockCode::from_parity(RingMatrix::from_rows_i64(
            z4(),
            &[&[1, 3, 0], &[0, 1, 3]],
        ))
        .unwrap()
    }

    #[test]
    fn tln_decode_examples() {
        let code = z4_parity();
        let inner =
            FieldDecoder::syndrome_from_parity(code.parity().unwrap().mod_p()).unwrap();

        let e = RingVector::from_i64(z4(), &[2, 0, 0]);
        let s = code.syndrome(&e);
        assert_eq!(s, RingVector::from_i64(z4(), &[2, 0]));
        assert_eq!(code.tln_decode(&s, &inner).unwrap(), e);

        let zero = RingVector::zero(z4(), 2);
        assert!(code.tln_decode(&zero, &inner).unwrap().is_zero());

        let e = RingVector::from_i64(z4(), &[1, 0, 0]);
        let s = code.syndrome(&e);
        assert_eq!(code.tln_decode(&s, &inner).unwrap(), e);
    }

    /// TLN against a brute-force coset-leader search for every weight-1 error.
    #[test]
    fn tln_matches_bruteforce_leaders() {
        let code = z4_parity();
        let h = code.parity().unwrap().clone();
        let inner = FieldDecoder::syndrome_from_parity(h.mod_p()).unwrap();
        for_each_support(3, 1, 4, |e| {
            let err = RingVector::from_raw(z4(), e.to_vec());
            let s = h.mul_vec(&err);
            // brute-force minimum-weight solution of H*x = s over the ring
            let mut best: Option<RingVector> = None;
            let mut unique = true;
            for_each_vector(3, 4, |x| {
                let xv = RingVector::from_raw(z4(), x.to_vec());
                if h.mul_vec(&xv) == s {
                    match &best {
                        Some(b) if xv.weight() < b.weight() => {
                            best = Some(xv);
                            unique = true;
                        }
                        Some(b) if xv.weight() == b.weight() => unique = false,
                        None => best = Some(xv),
                        _ => {}
                    }
                }
                true
            });
            let leader = best.unwrap();
            assert!(unique, "weight-1 errors have unique leaders");
            assert_eq!(leader, err);
            assert_eq!(code.tln_decode(&s, &inner).unwrap(), err);
        });
    }

    #[test]
    fn gv_and_tln_agree_on_shared_code() {
        // generator and compatible parity for the Z4 repetition code
        let g = RingMatrix::from_rows_i64(z4(), &[&[1], &[1], &[1]]);
        let h = RingMatrix::from_rows_i64(z4(), &[&[1, 3, 0], &[0, 1, 3]]);
        let code = BlockCode::new(g, h).unwrap();
        let gen_inner =
            FieldDecoder::nearest_from_generator(code.generator().unwrap().mod_p()).unwrap();
        let par_inner =
            FieldDecoder::syndrome_from_parity(code.parity().unwrap().mod_p()).unwrap();
        for m in 0..4i64 {
            let msg = RingVector::from_i64(z4(), &[m]);
            let cw = code.generator().unwrap().mul_vec(&msg);
            for_each_support(3, 1, 4, |e| {
                let err = RingVector::from_raw(z4(), e.to_vec());
                let within = (0..2u32).all(|l| {
                    err.digit_layer(l).iter().filter(|&&d| d != 0).count() <= 1
                });
                if !within {
                    return;
                }
                let received = cw.add(&err);
                let via_gv = code.gv_decode(&received, &gen_inner).unwrap().error;
                let via_tln = code
                    .tln_decode(&code.syndrome(&received), &par_inner)
                    .unwrap();
                assert_eq!(via_gv, via_tln);
                assert_eq!(via_gv, err);
            });
        }
    }

    #[test]
    fn xi_check_examples() {
        let h = RingMatrix::from_rows_i64(z4(), &[&[1, 3, 0], &[0, 1, 3]]);
        let e = RingVector::from_i64(z4(), &[2, 0, 0]);
        let s = h.mul_vec(&e);
        let digits: Vec<Vec<u64>> = (0..2).map(|l| e.digit_layer(l)).collect();

        // layer 0 needs no known digits and reproduces the low syndrome digit
        let xi0 = xi_check(&h, &[], &s, 0).unwrap();
        assert_eq!(xi0, s.mod_p());

        // layer 1 matches the documented example value (1, 0)
        let xi1 = xi_check(&h, &digits[..1], &s, 1).unwrap();
        assert_eq!(xi1, vec![1, 0]);

        // zero syndrome, zero digits
        let zero = RingVector::zero(z4(), 2);
        assert_eq!(xi_check(&h, &[], &zero, 0).unwrap(), vec![0, 0]);
    }

    /// The literal layered expression must match the compact residual used
    /// by the decoder on random instances.
    #[test]
    fn xi_check_matches_compact_residual() {
        for (p, r) in [(2u64, 2u32), (2, 3)] {
            let params = RingParams::new(p, r).unwrap();
            let mut state = 0x9e3779b97f4a7c15u64;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state
            };
            for _ in 0..500 {
                let q = 2;
                let n = 4;
                let h = RingMatrix::from_fn(params, q, n, |_, _| {
                    (next() % params.modulus()) as i64
                });
                let e = RingVector::from_raw(
                    params,
                    (0..n).map(|_| next() % params.modulus()).collect(),
                );
                let s = h.mul_vec(&e);
                let digits: Vec<Vec<u64>> = (0..r).map(|l| e.digit_layer(l)).collect();
                let mut known = RingVector::zero(params, n);
                for l in 0..r {
                    let xi = xi_check(&h, &digits[..l as usize], &s, l).unwrap();
                    let compact = s
                        .sub(&h.mul_vec(&known))
                        .exact_div_pow(l)
                        .unwrap()
                        .mod_p();
                    assert_eq!(xi, compact, "layer {l} over {params:?}");
                    known = known.add_layer(&digits[l as usize], l);
                }
            }
        }
    }
}
