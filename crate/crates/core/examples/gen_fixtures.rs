//! Regenerates the CLI fixture corpus.
//!
//! ```text
//! cargo run -p thv-core --example gen_fixtures -- crates/cli/tests/fixtures
//! ```
//!
//! Output is a pure function of the seeds below.

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thv_core::derivation::OuterKind;
use thv_core::formats::{write_assignment, write_samples, write_table};
use thv_core::sampling::{mixed_samples, pipeline_keys, scaling_pairs};
use thv_core::two_local::{synthesize_assignment, NonAdditiveRule, SyntheticKind};
use thv_core::{Basis, CocycleSign, Coefficient, DerivationParams, DerivationTable, Element};

const SIGN: CocycleSign = CocycleSign::Consistent;

fn q(n: i64) -> Coefficient {
    Coefficient::from_integer(n.into())
}

fn write(dir: &Path, name: &str, text: &str) {
    let path = dir.join(name);
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    fs::write(&path, text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    println!("wrote {}", path.display());
}

/// Keys for a certifiable fixture: window basis, samples, and `k x` for 20
/// scaling pairs so homogeneity can be checked from the file alone.
fn certified_keys(rng: &mut ChaCha8Rng, window: i64, samples: &[Element]) -> Vec<Element> {
    let mut keys = pipeline_keys(window, samples);
    for (k, x) in scaling_pairs(rng, samples, 20) {
        keys.push(x.scale(&k));
    }
    keys
}

fn main() {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "crates/cli/tests/fixtures".into())
        .into();
    fs::create_dir_all(&dir).expect("create fixture dir");

    // ad(L_2) + 3 D1 at window 6.
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0001);
    let samples = mixed_samples(&mut rng, 100, 6);
    let keys = certified_keys(&mut rng, 6, &samples);
    let p = DerivationParams::zero().with_a(2, q(1)).with_alpha(q(3));
    let a = synthesize_assignment(&SyntheticKind::HiddenDerivation(p), &keys, SIGN);
    write(&dir, "certified.json", &write_assignment(SIGN, &a));
    write(&dir, "certified.samples.txt", &write_samples(&samples));

    // D2 alone: absorbed by the (L_0, L_1) witness, lambda = 0.
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0002);
    let samples = mixed_samples(&mut rng, 60, 5);
    let keys = certified_keys(&mut rng, 5, &samples);
    let p = DerivationParams::zero().with_beta(q(1));
    let a = synthesize_assignment(&SyntheticKind::HiddenDerivation(p), &keys, SIGN);
    write(&dir, "outer_d2.json", &write_assignment(SIGN, &a));
    write(&dir, "outer_d2.samples.txt", &write_samples(&samples));

    // Non-additive: D1 on keys with an I_1 component, 2 D1 elsewhere.
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0003);
    let mut samples = mixed_samples(&mut rng, 30, 4);
    samples.push(Element::i(1));
    let kind = SyntheticKind::NonAdditive(NonAdditiveRule {
        marker: Basis::I(1),
    });
    let a = synthesize_assignment(&kind, &pipeline_keys(4, &samples), SIGN);
    write(&dir, "nonadditive.json", &write_assignment(SIGN, &a));
    write(&dir, "nonadditive.samples.txt", &write_samples(&samples));

    // Scaled: ad(L_1) + D1, doubled on keys containing I_1.
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0004);
    let mut samples = mixed_samples(&mut rng, 30, 4);
    samples.push(Element::l(-2) + Element::i(1) + Element::c_li());
    let kind = SyntheticKind::Scaled {
        params: DerivationParams::zero().with_a(1, q(1)).with_alpha(q(1)),
        marker: Basis::I(1),
        factor: q(2),
    };
    let a = synthesize_assignment(&kind, &pipeline_keys(4, &samples), SIGN);
    write(&dir, "scaled.json", &write_assignment(SIGN, &a));
    write(&dir, "scaled.samples.txt", &write_samples(&samples));

    // ad(L_6): no (L_0, L_1) witness exists below window 6.
    let p = DerivationParams::zero().with_a(6, q(1));
    let a = synthesize_assignment(
        &SyntheticKind::HiddenDerivation(p),
        &pipeline_keys(6, &[]),
        SIGN,
    );
    write(&dir, "far_witness.json", &write_assignment(SIGN, &a));

    write(
        &dir,
        "malformed.json",
        r#"{"sign": "consistent", "entries": [{"in": "L[1] +* I[2]", "out": "0"}]}"#,
    );
    write(&dir, "empty.samples.txt", "# no samples\n");

    // D2 as a table; a derivation only under the consistent sign.
    let t = DerivationTable::outer(OuterKind::D2, 4);
    write(&dir, "table_d2.json", &write_table(&t, None));
}
