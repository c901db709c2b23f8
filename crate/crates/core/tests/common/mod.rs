//! Brute-force oracles. Nothing here calls the pruned search or the
//! divide-and-conquer square finder.

#![allow(dead_code)]

use avoidance_kit::{Alphabet, Morphism, PreimageWitness, Word};

pub fn w(s: &str) -> Word {
    s.parse().unwrap()
}

/// O(n³) definition: no factor `xx`.
pub fn brute_squarefree(s: &[u8]) -> bool {
    for i in 0..s.len() {
        for half in 1..=(s.len() - i) / 2 {
            if s[i..i + half] == s[i + half..i + 2 * half] {
                return false;
            }
        }
    }
    true
}

pub fn brute_contains(host: &[u8], factor: &[u8]) -> bool {
    factor.is_empty() || host.windows(factor.len()).any(|win| win == factor)
}

/// Every word of length `n` over `0..k`, lexicographic.
pub fn all_words(k: u8, n: usize) -> impl Iterator<Item = Vec<u8>> {
    let total = (k as u64).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![0u8; n];
        for slot in v.iter_mut().rev() {
            *slot = (code % k as u64) as u8;
            code /= k as u64;
        }
        v
    })
}

/// Unpruned filter over all `k^n` words.
pub fn brute_count(k: u8, n: usize, avoid: &[&[u8]]) -> u64 {
    all_words(k, n).filter(|v| brute_squarefree(v) && !avoid.iter().any(|f| brute_contains(v, f))).count() as u64
}

/// Longest admissible length, extending whole levels and re-checking every
/// candidate from scratch. Returns `None` when `cap` is reached.
pub fn level_max(k: u8, avoid: &[&[u8]], cap: usize) -> Option<usize> {
    let mut level: Vec<Vec<u8>> = vec![Vec::new()];
    for n in 1..=cap {
        let next: Vec<Vec<u8>> = level
            .iter()
            .flat_map(|v| {
                (0..k).map(move |c| {
                    let mut e = v.clone();
                    e.push(c);
                    e
                })
            })
            .filter(|v| brute_squarefree(v) && !avoid.iter().any(|f| brute_contains(v, f)))
            .collect();
        if next.is_empty() {
            return Some(n - 1);
        }
        level = next;
    }
    None
}

/// Minimal witnesses by applying `h` to every word up to `max_len`.
pub fn blind_preimages(h: &Morphism, f: &Word, max_len: usize) -> Vec<PreimageWitness> {
    let k = h.alphabet().size();
    let fs = f.symbols();
    let mut out = Vec::new();
    for len in 1..=max_len {
        for u in all_words(k, len) {
            let lens: Vec<usize> = u.iter().map(|&l| h.images()[l as usize].len()).collect();
            let image: Vec<u8> = u.iter().flat_map(|&l| h.images()[l as usize].symbols().to_vec()).collect();
            let first = lens[0];
            let last_start = image.len() - lens[len - 1];
            for off in 0..first {
                if off + fs.len() <= image.len() && off + fs.len() > last_start && image[off..off + fs.len()] == *fs {
                    out.push(PreimageWitness {
                        source: Word::new(Alphabet::new(k as usize).unwrap(), u.clone()).unwrap(),
                        offset: off,
                    });
                }
            }
        }
    }
    out.sort();
    out
}
