use std::collections::{BTreeMap, HashMap};

/// Non-increasing positive parts `n₁ ≥ n₂ ≥ …`, labelling
/// `L₋ₙ₁ L₋ₙ₂ … |h⟩`.
pub type Partition = Vec<u32>;

/// A finite linear combination of basis monomials.
pub(crate) type State = BTreeMap<Partition, f64>;

/// All partitions of `level`, in descending lexicographic order.
pub fn partitions_of(level: u32) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, prefix: &mut Partition, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            prefix.push(p);
            rec(rem - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(level, level, &mut Vec::new(), &mut out);
    out
}

/// Basis of all levels `0..=n`, grouped by level.
pub fn enumerate_basis(n: usize) -> Vec<Partition> {
    (0..=n as u32).flat_map(partitions_of).collect()
}

pub(crate) fn level(p: &[u32]) -> u32 {
    p.iter().sum()
}

/// Action of single modes on PBW monomials, reduced to normal order with
/// the Virasoro relations.
pub(crate) struct ModeAction {
    c: f64,
    h: f64,
    memo: HashMap<(i32, Partition), Vec<(Partition, f64)>>,
}

fn push(acc: &mut State, p: Partition, x: f64) {
    *acc.entry(p).or_insert(0.0) += x;
}

impl ModeAction {
    pub(crate) fn new(c: f64, h: f64) -> Self {
        Self { c, h, memo: HashMap::new() }
    }

    /// `L_m` applied to the monomial `w`.
    pub(crate) fn apply(&mut self, m: i32, w: &[u32]) -> Vec<(Partition, f64)> {
        let key = (m, w.to_vec());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let r = self.compute(m, w);
        self.memo.insert(key, r.clone());
        r
    }

    fn compute(&mut self, m: i32, w: &[u32]) -> Vec<(Partition, f64)> {
        let lvl = level(w) as i32;
        if m == 0 {
            let e = self.h + lvl as f64;
            return if e == 0.0 { vec![] } else { vec![(w.to_vec(), e)] };
        }
        if m > lvl {
            return vec![];
        }
        if w.is_empty() {
            return vec![(vec![(-m) as u32], 1.0)];
        }
        let a = w[0] as i32;
        if m < 0 && -m >= a {
            let mut p = vec![(-m) as u32];
            p.extend_from_slice(w);
            return vec![(p, 1.0)];
        }
        let rest = &w[1..];
        let mut acc = State::new();
        for (p, x) in self.apply(m, rest) {
            for (q, y) in self.apply(-a, &p) {
                push(&mut acc, q, x * y);
            }
        }
        if m + a != 0 {
            let k = (m + a) as f64;
            for (q, y) in self.apply(m - a, rest) {
                push(&mut acc, q, k * y);
            }
        }
        if m == a {
            let mf = m as f64;
            let k = self.c / 12.0 * (mf * mf * mf - mf);
            if k != 0.0 {
                push(&mut acc, rest.to_vec(), k);
            }
        }
        acc.into_iter().filter(|(_, x)| *x != 0.0).collect()
    }
}
