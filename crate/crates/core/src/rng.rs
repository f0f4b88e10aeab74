use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream for one Monte-Carlo cell. Streams are keyed by cell
/// index so results do not depend on scheduling.
pub(crate) fn cell_rng(seed: u64, cell: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cell);
    rng
}
