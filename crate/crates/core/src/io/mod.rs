//! graph6 streams, canonical deduplication, census verification and run
//! manifests.

pub mod dedup;
pub mod graph6;
pub mod manifest;
pub mod verify;
