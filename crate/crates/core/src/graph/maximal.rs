//! Maximal clique enumeration (Bron–Kerbosch with Tomita pivoting).

use super::{bits, BitGraph};
use crate::error::{Error, Result};

/// Calls `f` once per maximal clique and returns how many there were.
/// Fails with [`Error::CapExceeded`] as soon as more than `cap` are found.
pub fn for_each_maximal_clique(
    g: &BitGraph,
    cap: usize,
    mut f: impl FnMut(&[usize]),
) -> Result<usize> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(0);
    }
    let mut p = vec![0u64; g.words()];
    for v in 0..n {
        bits::set(&mut p, v);
    }
    let x = vec![0u64; g.words()];
    let mut r = Vec::new();
    let mut count = 0;
    expand(g, &mut r, p, x, cap, &mut count, &mut f)?;
    Ok(count)
}

fn expand(
    g: &BitGraph,
    r: &mut Vec<usize>,
    mut p: Vec<u64>,
    mut x: Vec<u64>,
    cap: usize,
    count: &mut usize,
    f: &mut impl FnMut(&[usize]),
) -> Result<()> {
    if bits::is_empty(&p) {
        if bits::is_empty(&x) {
            *count += 1;
            if *count > cap {
                return Err(Error::CapExceeded(cap));
            }
            f(r);
        }
        return Ok(());
    }
    // pivot: vertex of P ∪ X with most neighbours in P
    let pivot = bits::ones(&p)
        .chain(bits::ones(&x))
        .max_by_key(|&u| (bits::and_count(&p, g.neighbors(u)), std::cmp::Reverse(u)))
        .expect("P is nonempty");
    let mut cand = p.clone();
    bits::and_not_assign(&mut cand, g.neighbors(pivot));
    let mut np = vec![0u64; p.len()];
    let mut nx = vec![0u64; p.len()];
    for v in bits::ones(&cand).collect::<Vec<_>>() {
        bits::and_into(&mut np, &p, g.neighbors(v));
        bits::and_into(&mut nx, &x, g.neighbors(v));
        r.push(v);
        expand(g, r, np.clone(), nx.clone(), cap, count, f)?;
        r.pop();
        bits::clear(&mut p, v);
        bits::set(&mut x, v);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_maximal(g: &BitGraph) -> Vec<Vec<usize>> {
        let n = g.vertex_count();
        let mut out: Vec<Vec<usize>> = (0u32..(1 << n))
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|vs: &Vec<usize>| !vs.is_empty() && g.is_maximal_clique(vs))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn matches_brute_force() {
        for seed in 0..25u64 {
            let mut s = seed;
            let g = BitGraph::from_predicate(12, |_, _| {
                s = s.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                (s >> 40) % 3 != 0
            });
            let mut got = Vec::new();
            let count = for_each_maximal_clique(&g, usize::MAX, |c| {
                let mut c = c.to_vec();
                c.sort();
                got.push(c);
            })
            .unwrap();
            got.sort();
            assert_eq!(count, got.len());
            assert_eq!(got, brute_maximal(&g));
        }
    }

    #[test]
    fn cap_is_enforced() {
        // complement of a perfect matching on 12 vertices has 2^6 maximal cliques
        let g = BitGraph::from_predicate(12, |u, v| u / 2 != v / 2);
        assert_eq!(for_each_maximal_clique(&g, 64, |_| {}).unwrap(), 64);
        assert_eq!(
            for_each_maximal_clique(&g, 63, |_| {}),
            Err(Error::CapExceeded(63))
        );
    }
}
