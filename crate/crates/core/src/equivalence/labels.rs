//! Classes of contexts used to restrict the defender's obligations.

use std::fmt;

use crate::congruence::canonical_label;
use crate::error::{Error, Result};
use crate::terms::{Action, Calculus, Label, Proc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelSet {
    /// `-|open n.T`
    Lm,
    /// `-` and `-|a.T`
    La,
    /// every label of the CCS transition system
    Lccs,
    All,
    Empty,
    /// Canonical label patterns; process variables are slots matching any
    /// subterm.
    Patterns(Vec<Label>),
}

impl LabelSet {
    /// Builtin names (`LM`, `LA`, `LCCS`, `ALL`, `EMPTY`, case and
    /// underscores ignored) or `;`/newline separated label patterns.
    pub fn parse(calculus: Calculus, src: &str) -> Result<LabelSet> {
        let entries: Vec<&str> =
            src.split([';', '\n']).map(str::trim).filter(|s| !s.is_empty() && !s.starts_with('#')).collect();
        if let [one] = entries[..] {
            let key = one.chars().filter(|c| *c != '_').collect::<String>().to_ascii_lowercase();
            match key.as_str() {
                "lm" => return Ok(LabelSet::Lm),
                "la" => return Ok(LabelSet::La),
                "lccs" => return Ok(LabelSet::Lccs),
                "all" => return Ok(LabelSet::All),
                "empty" => return Ok(LabelSet::Empty),
                _ => {}
            }
        }
        if entries.is_empty() {
            return Err(Error::InvalidQuery(format!("unknown label set `{}`", src.trim())));
        }
        let pats = entries
            .into_iter()
            .map(|s| Label::parse(calculus, s).map(|l| canonical_label(&l)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LabelSet::Patterns(pats))
    }

    pub fn name(&self) -> String {
        match self {
            LabelSet::Lm => "LM".into(),
            LabelSet::La => "LA".into(),
            LabelSet::Lccs => "LCCS".into(),
            LabelSet::All => "ALL".into(),
            LabelSet::Empty => "EMPTY".into(),
            LabelSet::Patterns(ps) => {
                let ps: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                format!("{{{}}}", ps.join("; "))
            }
        }
    }

    /// Membership of a canonical label.
    pub fn contains(&self, l: &Label) -> bool {
        let tail = || match &l.body {
            Proc::Par(ps) if ps.len() == 2 && ps[0] == Proc::Hole => Some(&ps[1]),
            _ => None,
        };
        match self {
            LabelSet::All => true,
            LabelSet::Empty => false,
            LabelSet::Lm => matches!(tail(), Some(Proc::Prefix(Action::Open(_), _))),
            LabelSet::La => {
                l.calculus == Calculus::Accs
                    && (l.is_identity() || matches!(tail(), Some(Proc::Prefix(Action::Recv(_), _))))
            }
            LabelSet::Lccs => {
                l.calculus == Calculus::Ccs
                    && (l.is_identity() || matches!(tail(), Some(Proc::Prefix(Action::Recv(_) | Action::Send(_), _))))
            }
            LabelSet::Patterns(ps) => ps.iter().any(|p| p.calculus == l.calculus && matches(&p.body, &l.body)),
        }
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn matches(pat: &Proc, p: &Proc) -> bool {
    match (pat, p) {
        (Proc::Var(_), _) => true,
        (Proc::Prefix(a, x), Proc::Prefix(b, y)) => a == b && matches(x, y),
        (Proc::Amb(n, x), Proc::Amb(m, y)) => n == m && matches(x, y),
        (Proc::Nu(n, x), Proc::Nu(m, y)) => n == m && matches(x, y),
        (Proc::Par(xs), Proc::Par(ys)) | (Proc::Sum(xs), Proc::Sum(ys)) => {
            xs.len() == ys.len() && bijection(xs, ys, &mut vec![false; ys.len()])
        }
        _ => pat == p,
    }
}

fn bijection(xs: &[Proc], ys: &[Proc], used: &mut Vec<bool>) -> bool {
    let Some((x, rest)) = xs.split_first() else { return true };
    for j in 0..ys.len() {
        if !used[j] && matches(x, &ys[j]) {
            used[j] = true;
            if bijection(rest, ys, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}
