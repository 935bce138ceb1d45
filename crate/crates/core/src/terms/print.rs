use super::{Action, AmbName, Proc};

pub(crate) fn action(a: &Action) -> String {
    match a {
        Action::Tau => "tau".into(),
        Action::Recv(n) => n.clone(),
        Action::Send(n) => format!("'{n}"),
        Action::In(n) => format!("in {n}"),
        Action::Out(n) => format!("out {n}"),
        Action::Open(n) => format!("open {n}"),
    }
}

/// Concrete syntax accepted back by the parser.
pub fn proc_to_string(p: &Proc) -> String {
    let mut s = String::new();
    write_par(p, " | ", &mut s);
    s
}

/// Same as [`proc_to_string`] with `|` unspaced, the usual way labels are
/// written.
pub fn proc_to_compact_string(p: &Proc) -> String {
    let mut s = String::new();
    write_par(p, "|", &mut s);
    s
}

fn write_par(p: &Proc, bar: &str, out: &mut String) {
    match p {
        Proc::Par(ps) => {
            for (i, q) in ps.iter().enumerate() {
                if i > 0 {
                    out.push_str(bar);
                }
                let last = i + 1 == ps.len();
                match q {
                    Proc::Par(_) => paren(q, bar, out),
                    Proc::Nu(..) if !last => paren(q, bar, out),
                    _ => write_sum(q, bar, out),
                }
            }
        }
        _ => write_sum(p, bar, out),
    }
}

fn write_sum(p: &Proc, bar: &str, out: &mut String) {
    match p {
        Proc::Sum(ps) => {
            for (i, q) in ps.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                match q {
                    Proc::Sum(_) | Proc::Par(_) | Proc::Nu(..) => paren(q, bar, out),
                    _ => write_atom(q, bar, out),
                }
            }
        }
        Proc::Nu(n, body) => {
            out.push_str("(nu ");
            out.push_str(n);
            out.push(')');
            match **body {
                Proc::Par(_) | Proc::Sum(_) => paren(body, bar, out),
                _ => write_sum(body, bar, out),
            }
        }
        _ => write_atom(p, bar, out),
    }
}

fn write_atom(p: &Proc, bar: &str, out: &mut String) {
    match p {
        Proc::Hole => out.push('-'),
        Proc::Nil => out.push('0'),
        Proc::Var(x) => {
            out.push('@');
            out.push_str(x);
        }
        Proc::Output(a) => {
            out.push('\'');
            out.push_str(a);
        }
        Proc::Prefix(a, cont) => {
            out.push_str(&action(a));
            out.push('.');
            match **cont {
                Proc::Par(_) | Proc::Sum(_) | Proc::Nu(..) => paren(cont, bar, out),
                _ => write_atom(cont, bar, out),
            }
        }
        Proc::Amb(n, body) => {
            match n {
                AmbName::Name(n) => out.push_str(n),
                AmbName::Var(x) => {
                    out.push('?');
                    out.push_str(x);
                }
            }
            out.push('[');
            write_par(body, bar, out);
            out.push(']');
        }
        Proc::Par(_) | Proc::Sum(_) | Proc::Nu(..) => paren(p, bar, out),
    }
}

fn paren(p: &Proc, bar: &str, out: &mut String) {
    out.push('(');
    write_par(p, bar, out);
    out.push(')');
}
