use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;
use serde::{Deserialize, Serialize};

use super::connector::{Connector, Direction};

/// A connector expression as written in a dictionary rule.
///
/// `Macro` only appears before substitution; rules stored in a
/// [`Dictionary`](super::Dictionary) are always macro-free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expression {
    Leaf(Connector),
    /// Conjunction; an empty list is the empty expression `()`.
    And(Vec<Expression>),
    Or(Vec<Expression>),
    Optional(Box<Expression>),
    /// `level` counts directly nested bracket pairs, so `[[X+]]` is level 2.
    Cost(Box<Expression>, u32),
    Macro(String),
}

/// One complete legal usage of a word.
///
/// Both lists keep the source order of the expression, which is
/// nearest-word-first: in `{@A-} & D-`, `A` links closer than `D`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Disjunct {
    pub left: Vec<Connector>,
    pub right: Vec<Connector>,
    pub cost: u32,
}

impl Disjunct {
    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    pub fn connectors(&self) -> impl Iterator<Item = &Connector> {
        self.left.iter().chain(self.right.iter())
    }
}

impl fmt::Display for Disjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in self.connectors() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{c}")?;
        }
        if self.cost > 0 {
            write!(f, " [{}]", self.cost)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MacroError {
    #[error("unknown macro <{0}>")]
    UnknownMacro(String),
    #[error("cyclic macro definition: {}", fmt_chain(.0))]
    CyclicMacro(Vec<String>),
}

fn fmt_chain(chain: &[String]) -> String {
    let mut out = String::new();
    for (i, name) in chain.iter().enumerate() {
        if i > 0 {
            out.push_str(" -> ");
        }
        out.push('<');
        out.push_str(name);
        out.push('>');
    }
    out
}

impl Expression {
    pub fn leaf(c: Connector) -> Self {
        Expression::Leaf(c)
    }

    pub fn optional(e: Expression) -> Self {
        Expression::Optional(Box::new(e))
    }

    pub fn cost(e: Expression, level: u32) -> Self {
        Expression::Cost(Box::new(e), level)
    }

    pub fn is_macro_free(&self) -> bool {
        match self {
            Expression::Leaf(_) => true,
            Expression::Macro(_) => false,
            Expression::And(cs) | Expression::Or(cs) => cs.iter().all(Expression::is_macro_free),
            Expression::Optional(e) | Expression::Cost(e, _) => e.is_macro_free(),
        }
    }

    pub fn for_each_connector(&self, f: &mut impl FnMut(&Connector)) {
        match self {
            Expression::Leaf(c) => f(c),
            Expression::Macro(_) => {}
            Expression::And(cs) | Expression::Or(cs) => {
                cs.iter().for_each(|c| c.for_each_connector(f))
            }
            Expression::Optional(e) | Expression::Cost(e, _) => e.for_each_connector(f),
        }
    }
}

/// Replaces every macro reference by its (recursively substituted) definition.
pub fn substitute_macros(
    e: &Expression,
    macros: &BTreeMap<String, Expression>,
) -> Result<Expression, MacroError> {
    let mut active = Vec::new();
    substitute(e, macros, &mut active)
}

fn substitute(
    e: &Expression,
    macros: &BTreeMap<String, Expression>,
    active: &mut Vec<String>,
) -> Result<Expression, MacroError> {
    Ok(match e {
        Expression::Leaf(c) => Expression::Leaf(c.clone()),
        Expression::Macro(name) => {
            if let Some(pos) = active.iter().position(|n| n == name) {
                let mut chain = active[pos..].to_vec();
                chain.push(name.clone());
                return Err(MacroError::CyclicMacro(chain));
            }
            let body = macros
                .get(name)
                .ok_or_else(|| MacroError::UnknownMacro(name.clone()))?;
            active.push(name.clone());
            let out = substitute(body, macros, active)?;
            active.pop();
            out
        }
        Expression::And(cs) => Expression::And(
            cs.iter()
                .map(|c| substitute(c, macros, active))
                .collect::<Result<_, _>>()?,
        ),
        Expression::Or(cs) => Expression::Or(
            cs.iter()
                .map(|c| substitute(c, macros, active))
                .collect::<Result<_, _>>()?,
        ),
        Expression::Optional(inner) => Expression::optional(substitute(inner, macros, active)?),
        Expression::Cost(inner, level) => {
            Expression::cost(substitute(inner, macros, active)?, *level)
        }
    })
}

/// Expands a macro-free expression into its disjuncts.
///
/// Output order is depth-first, first child first. Entries with the same
/// connector lists are merged, keeping the first position and the lowest
/// cost.
pub fn expand_disjuncts(e: &Expression) -> Result<Vec<Disjunct>, MacroError> {
    let mut out = expand(e)?;
    for d in &mut out {
        d.left.shrink_to_fit();
        d.right.shrink_to_fit();
    }
    Ok(out)
}

fn expand(e: &Expression) -> Result<Vec<Disjunct>, MacroError> {
    Ok(match e {
        Expression::Leaf(c) => {
            let mut d = Disjunct {
                left: Vec::new(),
                right: Vec::new(),
                cost: 0,
            };
            match c.direction {
                Direction::Left => d.left.push(c.clone()),
                Direction::Right => d.right.push(c.clone()),
            }
            alloc::vec![d]
        }
        Expression::Macro(name) => return Err(MacroError::UnknownMacro(name.clone())),
        Expression::And(cs) => {
            let mut acc = alloc::vec![Disjunct {
                left: Vec::new(),
                right: Vec::new(),
                cost: 0,
            }];
            for child in cs {
                let picks = expand(child)?;
                let mut next = Vec::with_capacity(acc.len() * picks.len());
                for a in &acc {
                    for b in &picks {
                        let mut left = Vec::with_capacity(a.left.len() + b.left.len());
                        left.extend_from_slice(&a.left);
                        left.extend_from_slice(&b.left);
                        let mut right = Vec::with_capacity(a.right.len() + b.right.len());
                        right.extend_from_slice(&a.right);
                        right.extend_from_slice(&b.right);
                        next.push(Disjunct {
                            left,
                            right,
                            cost: a.cost + b.cost,
                        });
                    }
                }
                acc = dedup(next);
            }
            acc
        }
        Expression::Or(cs) => {
            let mut all = Vec::new();
            for child in cs {
                all.extend(expand(child)?);
            }
            dedup(all)
        }
        Expression::Optional(inner) => {
            let mut all = expand(inner)?;
            all.push(Disjunct {
                left: Vec::new(),
                right: Vec::new(),
                cost: 0,
            });
            dedup(all)
        }
        Expression::Cost(inner, level) => {
            let mut all = expand(inner)?;
            for d in &mut all {
                d.cost += level;
            }
            all
        }
    })
}

pub(crate) fn dedup(items: Vec<Disjunct>) -> Vec<Disjunct> {
    if items.len() < 2 {
        return items;
    }
    let mut seen: HashMap<(Vec<Connector>, Vec<Connector>), usize> =
        HashMap::with_capacity(items.len());
    let mut out: Vec<Disjunct> = Vec::with_capacity(items.len());
    for d in items {
        let key = (d.left, d.right);
        match seen.get(&key) {
            Some(&i) => {
                if d.cost < out[i].cost {
                    out[i].cost = d.cost;
                }
            }
            None => {
                seen.insert(key.clone(), out.len());
                out.push(Disjunct {
                    left: key.0,
                    right: key.1,
                    cost: d.cost,
                });
            }
        }
    }
    out
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Leaf(c) => write!(f, "{c}"),
            Expression::Macro(name) => write!(f, "<{name}>"),
            Expression::And(cs) => write_list(f, cs, " & "),
            Expression::Or(cs) => write_list(f, cs, " or "),
            Expression::Optional(e) => write!(f, "{{{e}}}"),
            Expression::Cost(e, level) => {
                for _ in 0..*level {
                    f.write_str("[")?;
                }
                write!(f, "{e}")?;
                for _ in 0..*level {
                    f.write_str("]")?;
                }
                Ok(())
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, cs: &[Expression], sep: &str) -> fmt::Result {
    f.write_str("(")?;
    for (i, c) in cs.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{c}")?;
    }
    f.write_str(")")
}
