//! Isomorphism of decorated fiber graphs.
//!
//! A colour-refinement hash buckets graphs; equality inside a bucket is
//! settled by a backtracking search over colour-compatible bijections.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use crate::dualgraph::{Component, FiberGraph, IntersectionPoint};

fn h<T: Hash>(t: &T) -> u64 {
    let mut s = DefaultHasher::new();
    t.hash(&mut s);
    s.finish()
}

/// Per-point data with component ids replaced by indices.
struct Shape {
    comp_colors: Vec<u64>,
    /// (component index, pairwise multiplicities to the other branches) per point.
    points: Vec<Vec<(usize, Vec<(usize, u64)>)>>,
    adj: Vec<Vec<u64>>,
}

fn shape(g: &FiberGraph) -> Shape {
    let n = g.components.len();
    let idx: HashMap<&str, usize> = g.components.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();
    let comp_colors = g.components.iter().map(|c: &Component| h(&(c.mult, c.self_int, c.k_degree, c.geom))).collect();
    let mut adj = vec![vec![0u64; n]; n];
    let mut points = Vec::new();
    for p in &g.points {
        let bs: Vec<usize> = p.branches.iter().map(|b| idx.get(b.component.as_str()).copied().unwrap_or(0)).collect();
        let mut pv = Vec::new();
        for (i, &ci) in bs.iter().enumerate() {
            let mut others = Vec::new();
            for (j, &cj) in bs.iter().enumerate() {
                if i != j {
                    let m = p.mult_between(i, j);
                    others.push((cj, m));
                    adj[ci][cj] += m;
                }
            }
            pv.push((ci, others));
        }
        points.push(pv);
    }
    Shape { comp_colors, points, adj }
}

fn point_color(p: &IntersectionPoint) -> u64 {
    let mut pm: Vec<u64> = p.pairs().into_iter().map(|(_, _, m)| m).collect();
    pm.sort_unstable();
    h(&(p.branches.len(), pm))
}

/// Stable colour classes after refinement.
fn refine(g: &FiberGraph, s: &Shape) -> Vec<u64> {
    let mut col = s.comp_colors.clone();
    let pcols: Vec<u64> = g.points.iter().map(point_color).collect();
    for _ in 0..=g.components.len() {
        let mut next = Vec::with_capacity(col.len());
        for (ci, &c) in col.iter().enumerate() {
            let mut sig: Vec<(u64, Vec<(u64, u64)>)> = Vec::new();
            for (pi, pv) in s.points.iter().enumerate() {
                for (own, others) in pv {
                    if *own == ci {
                        let mut o: Vec<(u64, u64)> = others.iter().map(|&(cj, m)| (col[cj], m)).collect();
                        o.sort_unstable();
                        sig.push((pcols[pi], o));
                    }
                }
            }
            sig.sort_unstable();
            next.push(h(&(c, sig)));
        }
        let classes = |v: &[u64]| v.iter().collect::<std::collections::BTreeSet<_>>().len();
        let done = classes(&next) == classes(&col);
        col = next;
        if done {
            break;
        }
    }
    col
}

/// Isomorphism-invariant hash of a fiber graph.
pub fn canonical_hash(g: &FiberGraph) -> u64 {
    let s = shape(g);
    let mut col = refine(g, &s);
    col.sort_unstable();
    let mut pc: Vec<u64> = g.points.iter().map(point_color).collect();
    pc.sort_unstable();
    h(&(g.genus, col, pc))
}

fn point_sigs(s: &Shape, map: &[usize]) -> Vec<Vec<(usize, Vec<(usize, u64)>)>> {
    let mut out: Vec<Vec<(usize, Vec<(usize, u64)>)>> = s
        .points
        .iter()
        .map(|pv| {
            let mut v: Vec<(usize, Vec<(usize, u64)>)> = pv
                .iter()
                .map(|(c, o)| {
                    let mut o: Vec<(usize, u64)> = o.iter().map(|&(cj, m)| (map[cj], m)).collect();
                    o.sort_unstable();
                    (map[*c], o)
                })
                .collect();
            v.sort_unstable();
            v
        })
        .collect();
    out.sort_unstable();
    out
}

pub fn is_isomorphic(a: &FiberGraph, b: &FiberGraph) -> bool {
    if a.genus != b.genus || a.components.len() != b.components.len() || a.points.len() != b.points.len() {
        return false;
    }
    let (sa, sb) = (shape(a), shape(b));
    let (ca, cb) = (refine(a, &sa), refine(b, &sb));
    let (mut x, mut y) = (ca.clone(), cb.clone());
    x.sort_unstable();
    y.sort_unstable();
    if x != y {
        return false;
    }
    let n = ca.len();
    let identity: Vec<usize> = (0..n).collect();
    let target = point_sigs(&sb, &identity);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    // Most constrained colours first.
    let mut freq: BTreeMap<u64, usize> = BTreeMap::new();
    for c in &ca {
        *freq.entry(*c).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (freq[&ca[i]], i));
    search(0, &order, &ca, &cb, &sa, &sb, &mut map, &mut used, &target)
}

#[allow(clippy::too_many_arguments)]
fn search(
    k: usize,
    order: &[usize],
    ca: &[u64],
    cb: &[u64],
    sa: &Shape,
    sb: &Shape,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    target: &[Vec<(usize, Vec<(usize, u64)>)>],
) -> bool {
    if k == order.len() {
        return point_sigs(sa, map) == target;
    }
    let i = order[k];
    for j in 0..cb.len() {
        if used[j] || cb[j] != ca[i] {
            continue;
        }
        let ok = order[..k].iter().all(|&p| sa.adj[i][p] == sb.adj[j][map[p]] && sa.adj[p][i] == sb.adj[map[p]][j])
            && sa.adj[i][i] == sb.adj[j][j];
        if !ok {
            continue;
        }
        map[i] = j;
        used[j] = true;
        if search(k + 1, order, ca, cb, sa, sb, map, used, target) {
            return true;
        }
        used[j] = false;
        map[i] = usize::MAX;
    }
    false
}

/// Relabels components `S1..Sn` by (degree, mult, self-intersection) and
/// points `p1..pm` in order of their relabelled branches.
pub fn relabel(g: &FiberGraph) -> FiberGraph {
    let mut order: Vec<usize> = (0..g.components.len()).collect();
    let deg = |c: &Component| g.points.iter().map(|p| p.branches.iter().filter(|b| b.component == c.id).count()).sum::<usize>();
    order.sort_by_key(|&i| {
        let c = &g.components[i];
        (std::cmp::Reverse(deg(c)), std::cmp::Reverse(c.mult), c.self_int, c.k_degree, c.geom, i)
    });
    let rename: HashMap<String, String> =
        order.iter().enumerate().map(|(k, &i)| (g.components[i].id.clone(), format!("S{}", k + 1))).collect();
    let components = order
        .iter()
        .map(|&i| {
            let mut c = g.components[i].clone();
            c.id = rename[&c.id].clone();
            c
        })
        .collect();
    let mut points: Vec<IntersectionPoint> = g
        .points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            for b in q.branches.iter_mut() {
                b.component = rename[&b.component].clone();
            }
            q
        })
        .collect();
    let key = |p: &IntersectionPoint| {
        let mut v: Vec<usize> =
            p.branches.iter().map(|b| b.component[1..].parse::<usize>().unwrap_or(usize::MAX)).collect();
        v.sort_unstable();
        v
    };
    points.sort_by_key(key);
    for (k, p) in points.iter_mut().enumerate() {
        p.id = format!("p{}", k + 1);
    }
    FiberGraph::new(g.genus, components, points)
}

/// Keeps the first representative of each isomorphism class.
pub fn dedup(graphs: impl IntoIterator<Item = FiberGraph>) -> Vec<FiberGraph> {
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut out: Vec<FiberGraph> = Vec::new();
    for g in graphs {
        let key = canonical_hash(&g);
        let bucket = buckets.entry(key).or_default();
        if bucket.iter().any(|&i| is_isomorphic(&out[i], &g)) {
            continue;
        }
        bucket.push(out.len());
        out.push(g);
    }
    out
}
