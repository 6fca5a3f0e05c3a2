//! Adjacency queries over indexed triangle lists.

use std::collections::{BTreeMap, VecDeque};

/// Undirected edge key with the smaller index first.
pub type EdgeKey = (usize, usize);

pub fn edge_key(a: usize, b: usize) -> EdgeKey {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Maps every undirected edge to the faces using it, in face order.
pub fn edge_faces(faces: &[[usize; 3]]) -> BTreeMap<EdgeKey, Vec<usize>> {
    let mut map: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            map.entry(edge_key(f[k], f[(k + 1) % 3])).or_default().push(fi);
        }
    }
    map
}

/// Sorted, deduplicated one-ring neighbours of every vertex.
pub fn vertex_neighbors(vertex_count: usize, faces: &[[usize; 3]]) -> Vec<Vec<usize>> {
    let mut nbrs = vec![Vec::new(); vertex_count];
    for f in faces {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
    }
    for n in &mut nbrs {
        n.sort_unstable();
        n.dedup();
    }
    nbrs
}

/// Faces incident to each vertex, in face order.
pub fn vertex_faces(vertex_count: usize, faces: &[[usize; 3]]) -> Vec<Vec<usize>> {
    let mut vf = vec![Vec::new(); vertex_count];
    for (fi, f) in faces.iter().enumerate() {
        for &v in f {
            vf[v].push(fi);
        }
    }
    vf
}

/// Vertices lying on an edge used by exactly one face.
pub fn boundary_vertices(vertex_count: usize, faces: &[[usize; 3]]) -> Vec<bool> {
    let mut boundary = vec![false; vertex_count];
    for ((a, b), fs) in edge_faces(faces) {
        if fs.len() == 1 {
            boundary[a] = true;
            boundary[b] = true;
        }
    }
    boundary
}

/// Vertices whose neighbourhood is not a single edge-connected fan, or which
/// touch an edge shared by more than two faces.
pub fn non_manifold_vertices(vertex_count: usize, faces: &[[usize; 3]]) -> Vec<bool> {
    let mut flagged = vec![false; vertex_count];
    let ef = edge_faces(faces);
    for ((a, b), fs) in &ef {
        if fs.len() > 2 {
            flagged[*a] = true;
            flagged[*b] = true;
        }
    }
    let vf = vertex_faces(vertex_count, faces);
    for v in 0..vertex_count {
        if flagged[v] || vf[v].len() < 2 {
            continue;
        }
        // Walk the fan through edges incident to v.
        let incident = &vf[v];
        let mut seen = vec![false; incident.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            let f = faces[incident[i]];
            for &w in f.iter().filter(|&&w| w != v) {
                for &g in &ef[&edge_key(v, w)] {
                    if let Some(j) = incident.iter().position(|&x| x == g) {
                        if !seen[j] {
                            seen[j] = true;
                            reached += 1;
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
        if reached != incident.len() {
            flagged[v] = true;
        }
    }
    flagged
}

/// Edge-connected components of the faces; returns a component id per face.
pub fn face_components(faces: &[[usize; 3]]) -> (Vec<usize>, usize) {
    let ef = edge_faces(faces);
    let mut comp = vec![usize::MAX; faces.len()];
    let mut count = 0;
    for seed in 0..faces.len() {
        if comp[seed] != usize::MAX {
            continue;
        }
        comp[seed] = count;
        let mut queue = VecDeque::from([seed]);
        while let Some(fi) = queue.pop_front() {
            let f = faces[fi];
            for k in 0..3 {
                for &g in &ef[&edge_key(f[k], f[(k + 1) % 3])] {
                    if comp[g] == usize::MAX {
                        comp[g] = count;
                        queue.push_back(g);
                    }
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

fn has_directed_edge(f: &[usize; 3], a: usize, b: usize) -> bool {
    (0..3).any(|k| f[k] == a && f[(k + 1) % 3] == b)
}

/// Makes face winding consistent within each edge-connected component.
///
/// Each component is propagated breadth-first from its lowest-index face.
/// The resulting orientation is then compared with the input winding and
/// the whole component is flipped if fewer than half of its faces kept
/// their original orientation. Returns the number of faces whose winding
/// changed.
pub fn normalize_winding(faces: &mut [[usize; 3]]) -> usize {
    let original: Vec<[usize; 3]> = faces.to_vec();
    let ef = edge_faces(&original);
    // flip[f] relative to the input winding.
    let mut flip: Vec<Option<bool>> = vec![None; faces.len()];
    let mut changed = 0;
    for seed in 0..faces.len() {
        if flip[seed].is_some() {
            continue;
        }
        flip[seed] = Some(false);
        let mut members = vec![seed];
        let mut queue = VecDeque::from([seed]);
        while let Some(fi) = queue.pop_front() {
            let fl = flip[fi].unwrap();
            let f = original[fi];
            for k in 0..3 {
                // Directed edge as it appears in the (possibly flipped) face.
                let (a, b) = if fl {
                    (f[(k + 1) % 3], f[k])
                } else {
                    (f[k], f[(k + 1) % 3])
                };
                let users = &ef[&edge_key(a, b)];
                if users.len() != 2 {
                    continue;
                }
                for &g in users {
                    if g == fi || flip[g].is_some() {
                        continue;
                    }
                    // A consistent neighbour traverses the edge as b -> a.
                    let agrees = has_directed_edge(&original[g], b, a);
                    flip[g] = Some(!agrees);
                    members.push(g);
                    queue.push_back(g);
                }
            }
        }
        let kept = members.iter().filter(|&&m| flip[m] == Some(false)).count();
        let invert = kept * 2 < members.len();
        for &m in &members {
            let fl = flip[m].unwrap() ^ invert;
            if fl {
                faces[m].swap(1, 2);
                changed += 1;
            }
        }
    }
    changed
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> Vec<[usize; 3]> {
        vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]]
    }

    fn is_consistent(faces: &[[usize; 3]]) -> bool {
        let mut directed = std::collections::BTreeSet::new();
        for f in faces {
            for k in 0..3 {
                if !directed.insert((f[k], f[(k + 1) % 3])) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn winding_majority_vote() {
        let mut faces = tetra();
        assert!(is_consistent(&faces));
        // Flip one face: the majority keeps the original orientation.
        faces[2].swap(1, 2);
        let changed = normalize_winding(&mut faces);
        assert_eq!(changed, 1);
        assert_eq!(faces, tetra());
    }

    #[test]
    fn winding_majority_flips_minority_seed() {
        let mut faces = tetra();
        for f in faces.iter_mut().take(3) {
            f.swap(1, 2);
        }
        normalize_winding(&mut faces);
        assert!(is_consistent(&faces));
        // Three of four were flipped, so the flipped orientation wins.
        let mut expected = tetra();
        for f in &mut expected {
            f.swap(1, 2);
        }
        assert_eq!(faces, expected);
    }

    #[test]
    fn bowtie_vertex_is_non_manifold() {
        // Two triangles touching at vertex 0 only.
        let faces = vec![[0, 1, 2], [0, 3, 4]];
        let nm = non_manifold_vertices(5, &faces);
        assert!(nm[0]);
        assert!(!nm[1]);
    }

    #[test]
    fn components_counted() {
        let faces = vec![[0, 1, 2], [1, 3, 2], [4, 5, 6]];
        let (comp, n) = face_components(&faces);
        assert_eq!(n, 2);
        assert_eq!(comp, vec![0, 0, 1]);
    }
}
