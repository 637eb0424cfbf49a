//! Built-in instances.
//!
//! `pinched-torus` is the 4-dimensional Witt example: a torus pinched along a
//! circle, with `∂T ≅ S¹ × S²` and `X − T° ≅ S¹ × D³`. Boundary homology has
//! dims `[1,1,1,1]`, the tube's absolute intersection homology `[1,0,2,0]`,
//! relative `[0,0,2,0,1]`, and the complement `[1,1,0,0,0]`. The bases are
//! deliberately not adapted to the ladder so that single-entry perturbations
//! are detected by the validators.
//!
//! Expected outputs:
//! - `Z = [1,0,1,0]`, `Y = [0,0,1,0,1]`;
//! - default and Witt approximations both have dims `[1,0,1,0]` and no
//!   local duality obstruction in any degree;
//! - `H(cf) = [0,1,0,1]`;
//! - reduced `H_ix = [0,1,0,1]` over degrees 0..3, i.e. the homology of
//!   `S¹ ∨ S³` (the unreduced display adds a `Q` in degree 0);
//! - global duality pairs degree 1 with 3 by invertible 1×1 blocks;
//! - both middle-degree forms are 0×0, so both signatures are 0.
//!
//! Contrast: the homology of the corresponding AF intersection space pair
//! vanishes identically, while `H_1` of the algebraic intersection space
//! computed here is nonzero.

use serde_json::json;

use crate::error::{Error, Result};
use crate::instance::Instance;

pub const FIXTURE_NAMES: [&str; 2] = ["pinched-torus", "empty"];

pub fn pinched_torus() -> Instance {
    let v = json!({
        "name": "pinched-torus",
        "dimension": 4,
        "witt": true,
        "min_degree": 0,
        "max_degree": 4,
        "boundary": { "dims": [1, 1, 1, 1, 0] },
        "tube": {
            "absolute_dims": [1, 0, 2, 0, 0],
            "relative_dims": [0, 0, 2, 0, 1],
            "b_to_p": { "0": [["1"]], "2": [["1"], ["1"]] },
            "p_to_rel": { "2": [["1", "-1"], ["1", "-1"]] },
            "rel_bdry": { "2": [["1", "-1"]], "4": [["1"]] },
            "D_bdry": { "0": [["1"]], "1": [["1"]], "2": [["1"]], "3": [["1"]] },
            "D_abs_rel": { "0": [["1"]], "2": [["1", "0"], ["0", "-1"]] }
        },
        "complement": {
            "dims": [1, 1, 0, 0, 0],
            "iota": { "0": [["1"]], "1": [["1"]] },
            "lefschetz": { "3": [["-1"]], "4": [["1"]] }
        }
    });
    Instance::from_json(&v.to_string()).expect("built-in fixture parses")
}

pub fn empty() -> Instance {
    let v = json!({
        "name": "empty",
        "dimension": 4,
        "witt": true,
        "min_degree": 0,
        "max_degree": 4,
        "boundary": { "dims": [0, 0, 0, 0, 0] },
        "tube": { "absolute_dims": [0, 0, 0, 0, 0], "relative_dims": [0, 0, 0, 0, 0] },
        "complement": { "dims": [0, 0, 0, 0, 0] }
    });
    Instance::from_json(&v.to_string()).expect("built-in fixture parses")
}

pub fn emit_fixture(name: &str) -> Result<Instance> {
    match name {
        "pinched-torus" => Ok(pinched_torus()),
        "empty" => Ok(empty()),
        other => Err(Error::Invalid(format!("unknown fixture {other:?}; known: {}", FIXTURE_NAMES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::global::validate_global;
    use crate::tube::{compute_zy, validate_tube, Perversity};

    #[test]
    fn fixtures_validate() {
        for name in FIXTURE_NAMES {
            let inst = emit_fixture(name).unwrap();
            let rep = validate_tube(&inst.tube);
            assert!(rep.is_valid(), "{name}: {}", rep.to_text());
            let rep = validate_global(&inst.tube, &inst.global);
            assert!(rep.is_valid(), "{name}: {}", rep.to_text());
        }
        assert!(emit_fixture("torus").is_err());
    }

    #[test]
    fn pinched_torus_zy() {
        let inst = pinched_torus();
        let zy = compute_zy(&inst.tube, Perversity::P).unwrap();
        assert_eq!(zy.z_dims(0, 3), vec![1, 0, 1, 0]);
        assert_eq!(zy.y.dims_over(0, 4), vec![0, 0, 1, 0, 1]);
    }
}
