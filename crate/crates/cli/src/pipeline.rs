//! Multi-step computations shared by subcommands and acceptance checks.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use veech_core::conjdyn::{
    box_counting_auto, cantor_direction, tracking_run, BoxCount, CodingDictionary, ConjDynError, DictionaryConfig,
    DirectionConstruction, HeckeCoding, Targets, WVector,
};
use veech_core::polyflow::Normalization;
use veech_core::trigroup::{mat_apply, mat_inv};

/// Random start vector and bit string for construction i of a seeded batch.
pub fn draw(seed: u64, i: u64, blocks: usize, nbits: usize) -> (WVector, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    let v = WVector::random_unit(blocks, &mut rng);
    let bits = (0..nbits).map(|_| rng.gen()).collect();
    (v, bits)
}

/// `count` directions built from independent tracking runs.
pub fn constructions(
    dict: &CodingDictionary,
    targets: &Targets,
    count: usize,
    nbits: usize,
    seed: u64,
) -> Result<Vec<DirectionConstruction>, ConjDynError> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let (v, bits) = draw(seed, i, dict.coding.num_blocks(), nbits);
            let run = tracking_run(dict, &v, targets, &bits, None)?;
            cantor_direction(&dict.coding, &run)
        })
        .collect()
}

pub fn default_dictionary(coding: HeckeCoding) -> Result<CodingDictionary, ConjDynError> {
    CodingDictionary::new(coding, DictionaryConfig::default())
}

/// Box-counting slope of the constructed points, brought to a common fixed-point scale.
pub fn box_dimension(cs: &[DirectionConstruction]) -> BoxCount {
    let bits = cs.iter().map(|c| c.fixed_bits).max().unwrap_or(0);
    let pts: Vec<BigInt> = cs.iter().map(|c| &c.x_fixed << (bits - c.fixed_bits) as usize).collect();
    box_counting_auto(&pts, bits)
}

/// Surface angle of the boundary point x of the model group: the model vector (x, 1)
/// pulled back by the conjugator.
pub fn surface_angle(norm: &Normalization, x: f64) -> f64 {
    let w = mat_apply(&mat_inv(&norm.conjugator), [x, 1.0]);
    w[1].atan2(w[0])
}
