//! A cached series run with its reproducibility manifest.

use bbpert::cli::{cmd_series, SeriesArgs};
use bbpert::io::{RunManifest, SeriesCache};

fn main() -> bbpert::Result<()> {
    let dir = std::env::temp_dir().join("bbpert-cache-example");
    let cache = SeriesCache::new(dir.join("cache"));
    let args = SeriesArgs { k: 2, p: None, max_order: 20, lambda: None, s: 0, out: dir.join("quartic.json") };
    for _ in 0..2 {
        let run = cmd_series(&args, 80, Some(&cache), vec!["cache_and_manifest".into()])?;
        println!("cache hit: {}  sha256: {}", run.cache_hit, run.manifest.series_sha256);
    }
    RunManifest::read(&RunManifest::path_for(&args.out))?.verify(&args.out)?;
    println!("manifest verified for {}", args.out.display());
    Ok(())
}
