//! Rewrites the generator files under `data/external/` from their
//! constructions.

use std::path::Path;

use autbound_core::catalog::external::EXTERNAL;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/external");
    for e in EXTERNAL {
        let file = e.regenerate()?;
        std::fs::write(dir.join(e.file_name), file.to_json() + "\n")?;
        println!("wrote {}", e.file_name);
    }
    Ok(())
}
