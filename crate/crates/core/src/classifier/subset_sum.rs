//! Meet-in-the-middle search for a subset of residues with a prescribed sum.

use std::collections::HashMap;

/// Indices of a nonempty subset of `values` whose sum mod `modulus` lies in
/// `targets`, if one exists. Runs in about 2^(n/2) steps.
pub fn subset_sum_forbidden(values: &[u32], modulus: u32, targets: &[u32]) -> Option<Vec<usize>> {
    let n = values.len();
    if n == 0 || modulus == 0 {
        return None;
    }
    let half = n / 2;
    let (left, right) = values.split_at(half);
    let sums = |part: &[u32]| -> Vec<(u32, u64)> {
        let mut out = Vec::with_capacity(1 << part.len());
        for mask in 0u64..(1u64 << part.len()) {
            let mut s = 0u64;
            for (i, v) in part.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s += *v as u64;
                }
            }
            out.push(((s % modulus as u64) as u32, mask));
        }
        out
    };
    // for each residue keep a nonempty mask if there is one, else the empty one
    let mut right_by_sum: HashMap<u32, u64> = HashMap::new();
    for (s, m) in sums(right) {
        let slot = right_by_sum.entry(s).or_insert(m);
        if *slot == 0 {
            *slot = m;
        }
    }
    for (ls, lm) in sums(left) {
        for &t in targets {
            let need = (t % modulus + modulus - ls) % modulus;
            if let Some(&rm) = right_by_sum.get(&need) {
                if lm == 0 && rm == 0 {
                    continue;
                }
                let mut idx: Vec<usize> = (0..half).filter(|i| lm >> i & 1 == 1).collect();
                idx.extend((0..right.len()).filter(|i| rm >> i & 1 == 1).map(|i| i + half));
                return Some(idx);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(values: &[u32], m: u32, targets: &[u32]) -> bool {
        (1u64..(1u64 << values.len())).any(|mask| {
            let s: u32 = values
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| *v)
                .sum();
            targets.contains(&(s % m))
        })
    }

    #[test]
    fn agrees_with_brute_force() {
        let cases: &[(&[u32], u32, &[u32])] = &[
            (&[1, 2, 1, 2], 3, &[0]),
            (&[2, 2], 8, &[2, 6]),
            (&[4, 4, 4], 8, &[2, 6]),
            (&[3], 8, &[2, 6]),
            (&[1, 1, 1, 1, 1, 1, 1], 8, &[2, 6]),
            (&[], 4, &[1]),
        ];
        for (v, m, t) in cases {
            let got = subset_sum_forbidden(v, *m, t);
            assert_eq!(got.is_some(), brute(v, *m, t), "{v:?} mod {m}");
            if let Some(idx) = got {
                let s: u32 = idx.iter().map(|&i| v[i]).sum();
                assert!(t.contains(&(s % m)));
                assert!(!idx.is_empty());
            }
        }
    }
}
