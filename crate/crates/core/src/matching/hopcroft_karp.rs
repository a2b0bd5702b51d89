use std::collections::VecDeque;

use crate::error::Result;
use crate::model::RelevanceMatrix;

const NIL: usize = usize::MAX;

/// Size of a maximum matching between the candidates in `pool` and all
/// slots of `matrix` (Hopcroft-Karp). Repeated pool entries count once.
pub fn mbm(matrix: &RelevanceMatrix, pool: &[usize]) -> Result<usize> {
    matrix.check_pool(pool)?;
    let mut members = vec![false; matrix.candidates()];
    let mut left = Vec::with_capacity(pool.len());
    for &a in pool {
        if !std::mem::replace(&mut members[a], true) {
            left.push(a);
        }
    }
    Ok(HopcroftKarp::new(matrix, left).run())
}

struct HopcroftKarp<'m> {
    matrix: &'m RelevanceMatrix,
    left: Vec<usize>,
    left_match: Vec<usize>,
    slot_match: Vec<usize>,
    layer: Vec<usize>,
    cursor: Vec<usize>,
}

impl<'m> HopcroftKarp<'m> {
    fn new(matrix: &'m RelevanceMatrix, left: Vec<usize>) -> Self {
        let n = left.len();
        Self {
            matrix,
            left,
            left_match: vec![NIL; n],
            slot_match: vec![NIL; matrix.slots()],
            layer: vec![NIL; n],
            cursor: vec![0; n],
        }
    }

    fn run(mut self) -> usize {
        let mut size = 0;
        while self.bfs() {
            self.cursor.fill(0);
            for u in 0..self.left.len() {
                if self.left_match[u] == NIL && self.dfs(u) {
                    size += 1;
                }
            }
        }
        size
    }

    /// Layers the free left vertices; true if some free slot is reachable.
    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for u in 0..self.left.len() {
            if self.left_match[u] == NIL {
                self.layer[u] = 0;
                queue.push_back(u);
            } else {
                self.layer[u] = NIL;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &s in self.matrix.neighbors(self.left[u]) {
                match self.slot_match[s as usize] {
                    NIL => found = true,
                    v if self.layer[v] == NIL => {
                        self.layer[v] = self.layer[u] + 1;
                        queue.push_back(v);
                    }
                    _ => {}
                }
            }
        }
        found
    }

    fn dfs(&mut self, u: usize) -> bool {
        let neighbors = self.matrix.neighbors(self.left[u]);
        while self.cursor[u] < neighbors.len() {
            let s = neighbors[self.cursor[u]] as usize;
            self.cursor[u] += 1;
            let v = self.slot_match[s];
            if v == NIL || (self.layer[v] == self.layer[u] + 1 && self.dfs(v)) {
                self.left_match[u] = s;
                self.slot_match[s] = u;
                return true;
            }
        }
        self.layer[u] = NIL;
        false
    }
}
