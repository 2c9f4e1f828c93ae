use ringconv_core::bundled;
use ringconv_core::channel::{run_montecarlo, ChannelKind, ChannelModel};
use ringconv_core::window::WindowDecoder;

fn main() {
    let dec = WindowDecoder::analyze(bundled::delta3_system(), 7, 3).unwrap();
    println!("delta3: d1={:?} d2={} lambda={}", dec.d1(), dec.d2(), dec.lambda());
    for w in [2usize, 3] {
        let model = ChannelModel::new(ChannelKind::PerWindowWeight { weight: w, window: 7 }, 77);
        let r = run_montecarlo(&dec, &model, 21, 2000).unwrap();
        println!(
            "weight {w}: trials {} success {} failure {} wrong {}",
            r.trials, r.successes, r.failures, r.wrong_decodes
        );
    }
}
