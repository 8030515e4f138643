//! Last-level cache detection via sysfs, used to pick a default M.

use std::fs;
use std::path::Path;

fn parse_size(raw: &str) -> Option<u64> {
    let raw = raw.trim();
    if let Some(kb) = raw.strip_suffix('K') {
        kb.parse::<u64>().ok().map(|v| v * 1024)
    } else if let Some(mb) = raw.strip_suffix('M') {
        mb.parse::<u64>().ok().map(|v| v * 1024 * 1024)
    } else {
        raw.parse::<u64>().ok()
    }
}

/// Size in bytes of the largest-level unified/data cache of cpu0, if sysfs
/// exposes one.
pub fn last_level_cache_bytes() -> Option<u64> {
    let base = Path::new("/sys/devices/system/cpu/cpu0/cache");
    let mut best: Option<(u32, u64)> = None;
    for entry in fs::read_dir(base).ok()?.flatten() {
        let dir = entry.path();
        let cache_type = fs::read_to_string(dir.join("type")).unwrap_or_default();
        let cache_type = cache_type.trim();
        if cache_type != "Unified" && cache_type != "Data" {
            continue;
        }
        let level: u32 = fs::read_to_string(dir.join("level"))
            .ok()?
            .trim()
            .parse()
            .ok()?;
        let size = parse_size(&fs::read_to_string(dir.join("size")).ok()?)?;
        if best.is_none_or(|(l, _)| level > l) {
            best = Some((level, size));
        }
    }
    best.map(|(_, size)| size)
}
