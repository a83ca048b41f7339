//! Seeded instance generators shared by the harnesses, the acceptance suite and the tests.
//!
//! All generators draw from ChaCha8 so that a seed reproduces the same instances
//! on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bisim::Relation;
use crate::transition::TransitionSystem;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for instance `index` of a batch.
pub fn instance_rng(seed: u64, index: usize) -> SeededRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index as u64 + 1);
    r
}

/// State count uniform in `1..=max_states`; every ordered pair is an edge with probability 1/2.
pub fn random_system<R: Rng>(rng: &mut R, max_states: usize) -> TransitionSystem {
    assert!(max_states >= 1, "need at least one state");
    let n = rng.gen_range(1..=max_states);
    random_system_exact(rng, n)
}

pub fn random_system_exact<R: Rng>(rng: &mut R, n: usize) -> TransitionSystem {
    let succ = (0..n).map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect()).collect();
    TransitionSystem::from_successors(succ).expect("indices in range")
}

/// Every transition system on exactly `n` states (`2^(n*n)` of them), by edge bitmask.
pub fn all_systems(n: usize) -> impl Iterator<Item = TransitionSystem> {
    assert!(n * n < 64, "too many states to enumerate");
    (0u64..1 << (n * n)).map(move |mask| {
        let succ = (0..n).map(|a| (0..n).filter(|b| mask >> (a * n + b) & 1 == 1).collect()).collect();
        TransitionSystem::from_successors(succ).expect("indices in range")
    })
}

/// Every system with `1..=max_states` states.
pub fn all_systems_up_to(max_states: usize) -> impl Iterator<Item = TransitionSystem> {
    (1..=max_states).flat_map(all_systems)
}

/// Each pair included independently with probability `density`.
pub fn random_relation<R: Rng>(rng: &mut R, n: usize, density: f64) -> Relation {
    let mut r = Relation::empty(n);
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(density) {
                r.insert(a, b);
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_systems(1).count(), 2);
        assert_eq!(all_systems(2).count(), 16);
        assert_eq!(all_systems_up_to(3).count(), 2 + 16 + 512);
    }

    #[test]
    fn seeds_reproduce() {
        let a = random_system(&mut rng(5), 6);
        let b = random_system(&mut rng(5), 6);
        assert_eq!(a, b);
        let c = random_system(&mut instance_rng(5, 0), 6);
        let d = random_system(&mut instance_rng(5, 0), 6);
        assert_eq!(c, d);
    }
}
