/// Prefix sums over a fixed set of positions.
#[derive(Debug, Clone)]
pub(crate) struct Fenwick {
    tree: Vec<u128>,
}

impl Fenwick {
    pub fn new(n: usize) -> Self {
        Fenwick {
            tree: vec![0; n + 1],
        }
    }

    pub fn add(&mut self, pos: usize, value: u128) {
        let mut i = pos + 1;
        while i < self.tree.len() {
            self.tree[i] += value;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over positions `0..pos`.
    pub fn prefix(&self, pos: usize) -> u128 {
        let mut i = pos;
        let mut total = 0;
        while i > 0 {
            total += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        total
    }
}
