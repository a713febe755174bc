use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn require_undirected(g: &Graph) -> Result<()> {
    if g.is_directed() {
        return Err(Error::Unsupported("clustering is defined here for undirected graphs only".into()));
    }
    Ok(())
}

/// Triangles through each node.
///
/// Orients every edge towards the endpoint of higher (degree, id) rank and
/// intersects the forward lists of each arc, so every triangle is found
/// exactly once.
pub fn triangles_per_node(g: &Graph) -> Result<Vec<u64>> {
    require_undirected(g)?;
    let n = g.num_nodes();
    let higher = |u: usize, v: usize| (g.degree(v), v) > (g.degree(u), u);
    let mut offsets = Vec::with_capacity(n + 1);
    let mut forward = Vec::with_capacity(g.num_edges());
    offsets.push(0);
    for u in 0..n {
        forward.extend(g.neighbours(u).iter().copied().filter(|&v| higher(u, v as usize)));
        offsets.push(forward.len());
    }
    let out = |u: usize| &forward[offsets[u]..offsets[u + 1]];

    let counts: Vec<AtomicU64> = (0..n).map(|_| AtomicU64::new(0)).collect();
    let bump = |x: usize| counts[x].fetch_add(1, Ordering::Relaxed);
    (0..n).into_par_iter().with_min_len(256).for_each(|u| {
        for &v in out(u) {
            let (a, b) = (out(u), out(v as usize));
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        bump(u);
                        bump(v as usize);
                        bump(a[i] as usize);
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    });
    let counts = counts.into_iter().map(AtomicU64::into_inner).collect();
    Ok(counts)
}

/// Local clustering coefficient of every node; 0 below degree 2.
pub fn local_clustering(g: &Graph) -> Result<Vec<f64>> {
    let triangles = triangles_per_node(g)?;
    Ok((0..g.num_nodes())
        .map(|v| {
            let d = g.degree(v) as f64;
            if d < 2.0 {
                0.0
            } else {
                triangles[v] as f64 / (d * (d - 1.0) / 2.0)
            }
        })
        .collect())
}

/// Mean local clustering coefficient over all nodes.
pub fn avg_clustering(g: &Graph) -> Result<f64> {
    let local = local_clustering(g)?;
    if local.is_empty() {
        return Err(Error::UndefinedMetric("graph has no nodes".into()));
    }
    let mut sum = super::CompensatedSum::default();
    local.iter().for_each(|&c| sum.add(c));
    Ok(sum.value() / local.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gnm_random, ring_lattice};

    /// O(n³) triple enumeration.
    fn brute_force(g: &Graph) -> f64 {
        let n = g.num_nodes();
        let adj = |u: usize, v: usize| g.neighbours(u).binary_search(&(v as u32)).is_ok();
        let mut total = 0.0;
        for v in 0..n {
            let nb = g.neighbours(v);
            if nb.len() < 2 {
                continue;
            }
            let mut links = 0usize;
            for i in 0..nb.len() {
                for j in i + 1..nb.len() {
                    links += adj(nb[i] as usize, nb[j] as usize) as usize;
                }
            }
            total += links as f64 / (nb.len() * (nb.len() - 1) / 2) as f64;
        }
        total / n as f64
    }

    #[test]
    fn triangle_and_star() {
        let tri = Graph::from_arcs(3, [(0, 1), (1, 2), (2, 0)], false).unwrap();
        assert_eq!(avg_clustering(&tri).unwrap(), 1.0);
        let star = Graph::from_arcs(5, [(0, 1), (0, 2), (0, 3), (0, 4)], false).unwrap();
        assert_eq!(avg_clustering(&star).unwrap(), 0.0);
    }

    #[test]
    fn lattice_clustering_closed_form() {
        // 3(k-2) / (4(k-1)) for a ring lattice of even degree k.
        for k in [4usize, 6, 10] {
            let expected = 3.0 * (k as f64 - 2.0) / (4.0 * (k as f64 - 1.0));
            let got = avg_clustering(&ring_lattice(40, k).unwrap()).unwrap();
            assert!((got - expected).abs() < 1e-12, "k={k}");
            assert!((brute_force(&ring_lattice(40, k).unwrap()) - expected).abs() < 1e-12);
        }
        assert_eq!(avg_clustering(&ring_lattice(30, 4).unwrap()).unwrap(), 0.5);
    }

    #[test]
    fn random_graphs_match_enumeration() {
        for seed in 0..6 {
            let g = gnm_random(120 + 10 * seed as usize, 600, seed).unwrap();
            assert!((avg_clustering(&g).unwrap() - brute_force(&g)).abs() < 1e-12);
        }
    }

    #[test]
    fn directed_is_rejected() {
        let g = Graph::from_arcs(3, [(0, 1)], true).unwrap();
        assert!(matches!(avg_clustering(&g), Err(Error::Unsupported(_))));
    }
}
