//! Driving an experiment from a JSON config, as the command-line tool does.

use dual_schur::config::ExperimentConfig;
use dual_schur::run::{run, Command};

fn main() -> dual_schur::Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{
            "spec": {
                "f": { "family": "constant", "value": 1.0 },
                "g": { "family": "constant", "value": 1.0 },
                "c": 1.0, "n": 50, "k": 50
            },
            "seed": 9,
            "critical": { "deltas": [1, 2, 3], "samples": 2000 }
        }"#,
    )?;
    let out = std::env::temp_dir().join("dual-schur-example");
    let m = run(Command::Critical, &cfg, &out)?;
    println!("wrote {:?} to {}", m.outputs, out.display());
    print!("{}", std::fs::read_to_string(out.join("gaps.csv"))?);
    Ok(())
}
