//! Canonical text form: terms in descending graded-lex order, explicit `*`
//! between factors, so the output re-parses to the same element.

use std::fmt::{self, Display, Write};

use num_traits::{One, Signed};

use super::coeff::Coefficient;
use super::poly::{glex_cmp, Rec};
use super::{RingElement, Value};

fn write_terms<C>(f: &mut fmt::Formatter<'_>, p: &Rec<C>, vars: &[String]) -> fmt::Result
where
    C: Coefficient + Display + Signed + One,
{
    let mut terms = p.terms(vars.len());
    if terms.is_empty() {
        return f.write_str("0");
    }
    terms.sort_by(|a, b| glex_cmp(&b.0, &a.0));
    let mut out = String::new();
    for (i, (exps, c)) in terms.iter().enumerate() {
        let mut mono = String::new();
        for (v, &e) in vars.iter().zip(exps) {
            if e == 0 {
                continue;
            }
            if !mono.is_empty() {
                mono.push('*');
            }
            mono.push_str(v);
            if e > 1 {
                write!(mono, "^{e}")?;
            }
        }
        let negative = Signed::is_negative(c);
        let mag = c.abs();
        if negative {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        if mono.is_empty() {
            write!(out, "{mag}")?;
        } else if One::is_one(&mag) {
            out.push_str(&mono);
        } else {
            write!(out, "{mag}*{mono}")?;
        }
    }
    f.write_str(&out)
}

impl Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.ring.variables();
        match &self.value {
            Value::Z(p) => write_terms(f, p, vars),
            Value::Q(p) => write_terms(f, p, vars),
        }
    }
}
