use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

fn check(j: usize, levels: usize) -> Result<()> {
    if j < 2 || levels < 2 {
        return Err(Error::argument(format!(
            "tree needs branching >= 2 and levels >= 2, got j={j}, levels={levels}"
        )));
    }
    Ok(())
}

/// Vertex count of the complete `j`-ary tree with `levels` levels.
fn tree_size(j: usize, levels: usize) -> usize {
    (0..levels).map(|i| j.pow(i as u32)).sum()
}

/// Complete `j`-ary tree with `levels` levels; level `i` holds `j^(i-1)`
/// vertices. Ids are breadth-first, so the root is `0` and the children of
/// `x` are `j*x + 1 ..= j*x + j`.
pub fn gen_complete_ary_tree(j: usize, levels: usize) -> Result<(Graph, VertexId)> {
    check(j, levels)?;
    let n = tree_size(j, levels);
    let internal = tree_size(j, levels - 1);
    let edges = (0..internal).flat_map(|x| (1..=j).map(move |c| (x, j * x + c)));
    Ok((Graph::from_edges(n, edges)?, 0))
}

/// The complete `j`-ary tree plus `j` extra vertices, each adjacent to every
/// leaf. The extra vertices take the last `j` ids.
pub fn gen_tree_prime(j: usize, levels: usize) -> Result<(Graph, VertexId)> {
    check(j, levels)?;
    let (tree, root) = gen_complete_ary_tree(j, levels)?;
    let n = tree.n();
    let first_leaf = tree_size(j, levels - 1);
    let mut edges: Vec<_> = tree.edges().collect();
    for w in n..n + j {
        edges.extend((first_leaf..n).map(|leaf| (leaf, w)));
    }
    Ok((Graph::from_edges(n + j, edges)?, root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cores::core_decomposition;

    #[test]
    fn tree_shapes() {
        let (t, root) = gen_complete_ary_tree(2, 4).unwrap();
        assert_eq!((t.n(), t.m(), root), (15, 14, 0));
        assert!(core_decomposition(&t).core.iter().all(|&k| k == 1));

        let (s, root) = gen_complete_ary_tree(3, 2).unwrap();
        assert_eq!((s.n(), s.m()), (4, 3));
        assert_eq!(s.degree(root), 3);
        assert!(gen_complete_ary_tree(1, 3).is_err());
        assert!(gen_complete_ary_tree(2, 1).is_err());
    }

    #[test]
    fn tree_prime_shapes() {
        // 14 tree edges plus j * j^(l-1) = 2 * 8 extra
        let (t, _) = gen_tree_prime(2, 4).unwrap();
        assert_eq!((t.n(), t.m()), (17, 30));

        let (t, root) = gen_tree_prime(2, 3).unwrap();
        assert_eq!(core_decomposition(&t).core[root], 2);

        let (t, root) = gen_tree_prime(3, 3).unwrap();
        assert_eq!(t.degree(root), 3);
        assert_eq!(core_decomposition(&t).core[root], 3);
    }
}
