//! Host crate for the criterion benchmark targets; see `benches/`.
