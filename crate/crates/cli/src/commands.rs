//! Subcommand implementations with the exit-code contract:
//! 0 success, 1 parse/IO error, 2 hypothesis violation, 3 decode failure.

use std::fs;
use std::path::{Path, PathBuf};

use ringconv_core::channel::{run_montecarlo, ChannelKind, ChannelModel};
use ringconv_core::iso::IsoSystem;
use ringconv_core::selftest;
use ringconv_core::window::{StreamError, WindowDecoder, WindowError};

use crate::files;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed inputs.
    Parse(String),
    /// A decoder hypothesis failed or a guard tripped.
    Hypothesis(String),
    /// Decoding exhausted its attempts at the given position.
    Decode(usize),
    /// A selftest check failed.
    Selftest(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Hypothesis(_) => 2,
            CliError::Decode(_) => 3,
            CliError::Selftest(_) => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Parse(m) => m.clone(),
            CliError::Hypothesis(m) => m.clone(),
            CliError::Decode(pos) => format!("decoding failed at position {pos}"),
            CliError::Selftest(m) => m.clone(),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Parse(format!("cannot write {}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<IsoSystem, CliError> {
    files::parse_system(&read_file(path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn analyze(sys: IsoSystem, window: usize, theta: usize) -> Result<WindowDecoder, CliError> {
    WindowDecoder::analyze(sys, window, theta).map_err(|e| match e {
        WindowError::HypothesisViolated(m) => CliError::Hypothesis(m),
        WindowError::TooLarge(m) => CliError::Hypothesis(format!("guard exceeded: {m}")),
    })
}

pub fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("RINGCONV_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

pub fn cmd_params(system: &Path, window: usize, theta: usize) -> Result<(), CliError> {
    let sys = load_system(system)?;
    let delta = sys.state_dim();
    println!(
        "ring: Z/{}^{} (modulus {})",
        sys.params().p(),
        sys.params().r(),
        sys.params().modulus()
    );
    println!(
        "system: delta={}, k={}, n={}",
        delta,
        sys.input_dim(),
        sys.symbol_dim()
    );
    let a_invertible = sys.a().rank_mod_p() == delta;
    println!("A invertible: {}", if a_invertible { "yes" } else { "no" });
    if window >= 1 {
        let phi_rank = sys.reachability(window).rank_mod_p();
        println!(
            "reachability rank (T={window}): {phi_rank} of {delta} (surjective: {})",
            if phi_rank == delta { "yes" } else { "no" }
        );
    }
    if theta >= 1 {
        let psi_rank = sys.observability(theta).rank_mod_p();
        println!(
            "observability rank (Theta={theta}): {psi_rank} of {delta} (injective: {})",
            if psi_rank == delta { "yes" } else { "no" }
        );
    }
    match analyze(sys, window, theta) {
        Ok(dec) => {
            match dec.d1() {
                Some(d1) => println!("d1 (input-recovery code distance): {d1}"),
                None => println!("d1 (input-recovery code distance): trivial kernel"),
            }
            println!("d2 (state-recovery code distance): {}", dec.d2());
            println!("lambda (per-window weight budget): {}", dec.lambda());
            println!("t_gen: {}", dec.t_gen());
            match dec.t_par() {
                Some(t) => println!("t_par: {t}"),
                None => println!("t_par: n/a"),
            }
            println!("hypotheses: PASS");
            Ok(())
        }
        Err(e) => {
            println!("hypotheses: FAIL ({})", e.message());
            Err(e)
        }
    }
}

pub fn cmd_encode(
    system: &Path,
    message: &Path,
    terminate: bool,
    output: &Path,
) -> Result<(), CliError> {
    let sys = load_system(system)?;
    let msg = files::parse_message(&read_file(message)?, &sys)
        .map_err(|e| CliError::Parse(format!("{}: {e}", message.display())))?;
    let traj = sys
        .encode(&msg, terminate)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    write_file(output, &files::format_sequence(&traj.symbols()))?;
    println!(
        "encoded {} message steps into {} symbols{}",
        msg.len(),
        traj.len(),
        if terminate { " (terminated)" } else { "" }
    );
    Ok(())
}

pub struct CorruptModel {
    pub epsilon: Option<f64>,
    pub per_window_weight: Option<usize>,
    pub window: Option<usize>,
    pub pattern_file: Option<PathBuf>,
}

pub fn cmd_corrupt(
    system: &Path,
    input: &Path,
    output: &Path,
    pattern_out: &Path,
    model: CorruptModel,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let sys = load_system(system)?;
    let clean = files::parse_sequence(&read_file(input)?, &sys)
        .map_err(|e| CliError::Parse(format!("{}: {e}", input.display())))?;
    let kind = match (model.epsilon, model.per_window_weight, model.pattern_file) {
        (Some(eps), None, None) => {
            if !(0.0..=1.0).contains(&eps) {
                return Err(CliError::Parse("epsilon must lie in [0, 1]".into()));
            }
            ChannelKind::IidSymbol { epsilon: eps }
        }
        (None, Some(w), None) => ChannelKind::PerWindowWeight {
            weight: w,
            window: model
                .window
                .ok_or_else(|| CliError::Parse("--per-window-weight needs --window".into()))?,
        },
        (None, None, Some(path)) => {
            let pattern = files::parse_pattern(&read_file(&path)?, sys.params().modulus())
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            ChannelKind::Explicit(pattern)
        }
        _ => {
            return Err(CliError::Parse(
                "exactly one of --epsilon, --per-window-weight, --pattern-file is required"
                    .into(),
            ))
        }
    };
    let channel = ChannelModel::new(kind, resolve_seed(seed));
    let (corrupted, pattern) = channel
        .inject(&clean)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    write_file(output, &files::format_sequence(&corrupted))?;
    write_file(pattern_out, &files::format_pattern(&pattern))?;
    println!(
        "corrupted {} of {} symbols ({} component errors)",
        pattern
            .iter()
            .map(|e| e.t)
            .collect::<std::collections::BTreeSet<_>>()
            .len(),
        clean.len(),
        pattern.len()
    );
    Ok(())
}

pub fn cmd_decode(
    system: &Path,
    input: &Path,
    window: usize,
    theta: usize,
    output: &Path,
) -> Result<(), CliError> {
    let sys = load_system(system)?;
    let received = files::parse_sequence(&read_file(input)?, &sys)
        .map_err(|e| CliError::Parse(format!("{}: {e}", input.display())))?;
    let dec = analyze(sys, window, theta)?;
    match dec.decode_stream(&received) {
        Ok(decoded) => {
            let corrections: usize = decoded
                .iter()
                .zip(&received)
                .map(|(a, b)| a.distance(b))
                .sum();
            write_file(output, &files::format_sequence(&decoded))?;
            println!(
                "decoded {} symbols, corrected {corrections} components",
                decoded.len()
            );
            Ok(())
        }
        Err(StreamError::DecodeFailure { position }) => {
            println!("decoding failed at position {position}");
            Err(CliError::Decode(position))
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_simulate(
    system: &Path,
    window: usize,
    theta: usize,
    epsilon: f64,
    trials: u64,
    seed: Option<u64>,
    msg_len: Option<usize>,
    csv: &Path,
) -> Result<(), CliError> {
    if trials < 1 {
        return Err(CliError::Parse("need at least one trial".into()));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(CliError::Parse("epsilon must lie in [0, 1]".into()));
    }
    let sys = load_system(system)?;
    let dec = analyze(sys, window, theta)?;
    let msg_len = msg_len.unwrap_or(3 * window);
    let model = ChannelModel::new(
        ChannelKind::IidSymbol { epsilon },
        resolve_seed(seed),
    );
    let report = run_montecarlo(&dec, &model, msg_len, trials)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    write_file(csv, &report.detail_csv())?;
    let summary_path = csv.with_extension("summary.csv");
    write_file(&summary_path, &report.summary_csv(epsilon))?;
    println!(
        "{} trials: {} success, {} failure, {} wrong; ser_in {:.6}, ser_out {:.6}",
        report.trials,
        report.successes,
        report.failures,
        report.wrong_decodes,
        report.ser_in(),
        report.ser_out()
    );
    println!("detail: {}", csv.display());
    println!("summary: {}", summary_path.display());
    Ok(())
}

const BUNDLED_SYSTEMS: [(&str, &str); 3] = [
    ("scalar.system", include_str!("../data/scalar.system")),
    ("delta2.system", include_str!("../data/delta2.system")),
    ("delta3.system", include_str!("../data/delta3.system")),
];
const BUNDLED_MESSAGE: &str = include_str!("../data/message21.txt");

/// Runs the core verification suite plus a CLI pipeline determinism check,
/// printing one line per check.
pub fn cmd_selftest() -> Result<(), CliError> {
    let mut first_failure: Option<String> = None;
    let mut record = |name: &str, result: Result<String, String>| match result {
        Ok(detail) => println!("ok   {name} — {detail}"),
        Err(detail) => {
            println!("FAIL {name} — {detail}");
            first_failure.get_or_insert_with(|| name.to_string());
        }
    };

    record("bundled_vectors", bundled_vectors_check());
    for outcome in selftest::run_all() {
        record(
            outcome.name,
            if outcome.passed {
                Ok(outcome.detail)
            } else {
                Err(outcome.detail)
            },
        );
    }
    record("cli_pipeline_determinism", pipeline_determinism_check());

    match first_failure {
        None => Ok(()),
        Some(name) => Err(CliError::Selftest(format!(
            "selftest failed: first failing check is `{name}`"
        ))),
    }
}

/// The bundled system files must parse and pass their window analyses.
fn bundled_vectors_check() -> Result<String, String> {
    let windows = [(4usize, 1usize), (4, 2), (7, 3)];
    for ((name, text), (t, theta)) in BUNDLED_SYSTEMS.iter().zip(windows) {
        let sys = files::parse_system(text).map_err(|e| format!("{name}: {e}"))?;
        WindowDecoder::analyze(sys, t, theta).map_err(|e| format!("{name}: {e}"))?;
    }
    files::parse_system(BUNDLED_MESSAGE)
        .err()
        .ok_or("message file parsed as a system")?;
    Ok("3 bundled systems parse and pass analysis".into())
}

/// Encode -> corrupt -> decode twice in scratch directories with one seed:
/// all artifacts must be byte-identical, the corruption must be within the
/// weight budget, and decoding must reproduce the encoder output exactly.
fn pipeline_determinism_check() -> Result<String, String> {
    let run = |dir: &Path| -> Result<(Vec<u8>, Vec<u8>, Vec<u8>), String> {
        let sys_path = dir.join("delta3.system");
        let msg_path = dir.join("message.txt");
        let clean = dir.join("clean.seq");
        let received = dir.join("received.seq");
        let pattern = dir.join("pattern.txt");
        let pattern_in = dir.join("inject.txt");
        let decoded = dir.join("decoded.seq");
        fs::write(&sys_path, BUNDLED_SYSTEMS[2].1).map_err(|e| e.to_string())?;
        fs::write(&msg_path, BUNDLED_MESSAGE).map_err(|e| e.to_string())?;
        // three errors spaced beyond the window length: within budget
        fs::write(&pattern_in, "2 1 2\n12 0 3\n20 1 1\n").map_err(|e| e.to_string())?;
        cmd_encode(&sys_path, &msg_path, true, &clean).map_err(|e| e.message())?;
        cmd_corrupt(
            &sys_path,
            &clean,
            &received,
            &pattern,
            CorruptModel {
                epsilon: None,
                per_window_weight: None,
                window: None,
                pattern_file: Some(pattern_in),
            },
            Some(12345),
        )
        .map_err(|e| e.message())?;
        cmd_decode(&sys_path, &received, 7, 3, &decoded).map_err(|e| e.message())?;
        let clean_bytes = fs::read(&clean).map_err(|e| e.to_string())?;
        let received_bytes = fs::read(&received).map_err(|e| e.to_string())?;
        let decoded_bytes = fs::read(&decoded).map_err(|e| e.to_string())?;
        if decoded_bytes != clean_bytes {
            return Err("decode did not reproduce the encoder output".into());
        }
        Ok((clean_bytes, received_bytes, decoded_bytes))
    };
    let dir_a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir_b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = run(dir_a.path())?;
    let b = run(dir_b.path())?;
    if a != b {
        return Err("two runs with the same seed differ".into());
    }
    Ok("two seeded pipeline runs byte-identical, corruption corrected".into())
}
