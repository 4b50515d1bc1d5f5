use super::signature::SortId;
use super::term::Var;

/// Source of variables that are new to one query.
///
/// Names render as `#n:Sort` or `%n:Sort`; user modules cannot declare
/// variables starting with either prefix, so minted names never clash.
#[derive(Debug, Clone, Default)]
pub struct FreshScope {
    hash: u64,
    percent: u64,
}

impl FreshScope {
    pub fn new() -> Self {
        Self::default()
    }

    /// `#n` variable (narrowing and variant generation).
    pub fn fresh(&mut self, sort: SortId) -> Var {
        self.hash += 1;
        Var::new(&format!("#{}", self.hash), sort)
    }

    /// `%n` variable (unifier renaming).
    pub fn fresh_pct(&mut self, sort: SortId) -> Var {
        self.percent += 1;
        Var::new(&format!("%{}", self.percent), sort)
    }

    /// Moves past `v` if it looks like a minted name, so later names avoid it.
    pub fn reserve(&mut self, v: &Var) {
        let (counter, digits) = match v.name.split_at(1) {
            ("#", d) => (&mut self.hash, d),
            ("%", d) => (&mut self.percent, d),
            _ => return,
        };
        if let Ok(n) = digits.parse::<u64>() {
            *counter = (*counter).max(n);
        }
    }

    pub fn minted(&self) -> u64 {
        self.hash + self.percent
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reserve_skips_seen_names() {
        let mut f = FreshScope::new();
        f.reserve(&Var::new("%7", SortId(0)));
        f.reserve(&Var::new("#2", SortId(0)));
        f.reserve(&Var::new("X", SortId(0)));
        assert_eq!(&*f.fresh_pct(SortId(0)).name, "%8");
        assert_eq!(&*f.fresh(SortId(0)).name, "#3");
    }
}
