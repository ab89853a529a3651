//! Bounded search for primitive integer points on `x^4 - y^4 = n z^4`.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::is_kth_power;

/// A primitive solution `(x, y, z)` of `x^4 - y^4 = n z^4` with positive entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl Witness {
    /// Divide out the common factor of the three coordinates.
    pub fn canonical(self) -> Witness {
        let g = self.x.gcd(&self.y).gcd(&self.z).max(1);
        Witness {
            x: self.x / g,
            y: self.y / g,
            z: self.z / g,
        }
    }
}

/// Search coprime `(y, z)` with `1 <= y, z <= height` for a fourth power
/// `n z^4 + y^4 = x^4` with `x <= height`.
///
/// The first hit in (z, y) order is returned, so the answer has minimal `z`
/// and then minimal `y`. `None` only means nothing exists within the box.
pub fn find_witness(n: u64, height: u64) -> Option<Witness> {
    let n = n as u128;
    for z in 1..=height {
        let nz4 = n.checked_mul((z as u128).pow(4))?;
        for y in 1..=height {
            if y.gcd(&z) != 1 {
                continue;
            }
            let Some(t) = nz4.checked_add((y as u128).pow(4)) else {
                break;
            };
            if let Some(x) = is_kth_power(t, 4) {
                if x <= height as u128 {
                    return Some(Witness { x: x as u64, y, z });
                }
            }
        }
    }
    None
}

/// Exact check of every witness invariant for `n`.
pub fn verify_witness(n: u64, w: &Witness) -> bool {
    if w.x == 0 || w.y == 0 || w.z == 0 {
        return false;
    }
    if w.x.gcd(&w.y).gcd(&w.z) != 1 {
        return false;
    }
    let p4 = |v: u64| BigInt::from(v).pow(4);
    p4(w.x) - p4(w.y) == BigInt::from(n) * p4(w.z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_witnesses() {
        assert_eq!(find_witness(5, 10), Some(Witness { x: 3, y: 1, z: 2 }));
        assert_eq!(
            find_witness(239, 150),
            Some(Witness {
                x: 120,
                y: 119,
                z: 13
            })
        );
        assert_eq!(find_witness(15, 10), Some(Witness { x: 2, y: 1, z: 1 }));
    }

    #[test]
    fn no_witness_for_one() {
        assert_eq!(find_witness(1, 300), None);
    }

    #[test]
    fn verification() {
        assert!(verify_witness(5, &Witness { x: 3, y: 1, z: 2 }));
        assert!(!verify_witness(5, &Witness { x: 3, y: 2, z: 2 }));
        assert!(verify_witness(9999, &Witness { x: 10, y: 1, z: 1 }));
        assert!(!verify_witness(80, &Witness { x: 6, y: 2, z: 2 }));
        assert!(verify_witness(80, &Witness { x: 6, y: 2, z: 2 }.canonical()));
        assert!(verify_witness(5, &Witness { x: 6, y: 2, z: 4 }.canonical()));
    }
}
