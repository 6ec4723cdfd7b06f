//! CNF formulas and the clause normalization applied before compiling.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A literal in DIMACS convention: `v` is variable `v`, `-v` its negation.
pub type Lit = i32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("clause {0} has {1} literals; at most 3 are allowed")]
    ClauseTooLong(usize, usize),
    #[error("clause {0} mentions variable {1} more than once")]
    RepeatedVariable(usize, u32),
    #[error("literal {lit} in clause {clause} is out of range 1..={num_vars}")]
    LiteralOutOfRange { clause: usize, lit: Lit, num_vars: u32 },
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Vec<Lit>>) -> Result<Self, CnfError> {
        let f = CnfFormula { num_vars, clauses };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), CnfError> {
        for (k, c) in self.clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(CnfError::EmptyClause(k));
            }
            if c.len() > 3 {
                return Err(CnfError::ClauseTooLong(k, c.len()));
            }
            let mut seen = BTreeSet::new();
            for &lit in c {
                let v = lit.unsigned_abs();
                if lit == 0 || v > self.num_vars {
                    return Err(CnfError::LiteralOutOfRange {
                        clause: k,
                        lit,
                        num_vars: self.num_vars,
                    });
                }
                if !seen.insert(v) {
                    return Err(CnfError::RepeatedVariable(k, v));
                }
            }
        }
        Ok(())
    }

    /// `assignment[v - 1]` is the value of variable `v`.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[(l.unsigned_abs() - 1) as usize] == (l > 0))
        })
    }

    /// Truth-table satisfiability; only meant for small formulas.
    pub fn brute_force_model(&self) -> Option<Vec<bool>> {
        let n = self.num_vars as usize;
        assert!(n < 25, "truth table too large");
        (0u32..(1 << n)).find_map(|bits| {
            let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            self.evaluate(&a).then_some(a)
        })
    }

    pub fn is_satisfiable(&self) -> bool {
        self.brute_force_model().is_some()
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c
                    .iter()
                    .map(|&l| {
                        if l > 0 {
                            format!("x{l}")
                        } else {
                            format!("¬x{}", -l)
                        }
                    })
                    .collect();
                format!("({})", lits.join(" ∨ "))
            })
            .collect();
        write!(f, "{}", parts.join(" ∧ "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuxOrigin {
    /// Introduced when splitting the all-positive or all-negative input clause with this index.
    Split(usize),
    /// Only variable of the positive unit clause appended at the end.
    FinalUnit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxVar {
    pub var: u32,
    pub origin: AuxOrigin,
}

/// A formula where no 3-literal clause is monochromatic and the final
/// clause has only positive literals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedFormula {
    pub formula: CnfFormula,
    /// Variables `1..=original_vars` are the input's own.
    pub original_vars: u32,
    pub aux: Vec<AuxVar>,
}

impl NormalizedFormula {
    pub fn num_vars(&self) -> u32 {
        self.formula.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.formula.clauses
    }

    pub fn check(&self) -> bool {
        let mono = |c: &Vec<Lit>| c.len() == 3 && (c.iter().all(|&l| l > 0) || c.iter().all(|&l| l < 0));
        let last_ok = self
            .formula
            .clauses
            .last()
            .is_some_and(|c| c.len() <= 2 && c.iter().all(|&l| l > 0));
        !self.formula.clauses.iter().any(mono) && last_ok
    }

    /// Extend an assignment of the original variables to a model of the
    /// normalized formula, when one exists.
    pub fn extend_assignment(&self, original: &[bool]) -> Option<Vec<bool>> {
        let k = self.aux.len();
        assert!(k < 25);
        (0u32..(1 << k)).find_map(|bits| {
            let mut a = original.to_vec();
            a.extend((0..k).map(|i| bits >> i & 1 == 1));
            self.formula.evaluate(&a).then_some(a)
        })
    }
}

/// Split monochromatic 3-clauses with one fresh variable each and make sure
/// the last clause is a positive unit clause or positive 2-clause.
pub fn normalize_formula(f: &CnfFormula) -> Result<NormalizedFormula, CnfError> {
    f.validate()?;
    let mut next = f.num_vars;
    let mut aux = Vec::new();
    let mut clauses = Vec::with_capacity(f.clauses.len() + 1);
    for (k, c) in f.clauses.iter().enumerate() {
        let all_pos = c.iter().all(|&l| l > 0);
        let all_neg = c.iter().all(|&l| l < 0);
        if c.len() == 3 && (all_pos || all_neg) {
            next += 1;
            let y = next as Lit;
            aux.push(AuxVar {
                var: next,
                origin: AuxOrigin::Split(k),
            });
            if all_pos {
                // x_i ∨ x_j ∨ x_k  =>  (x_k ∨ y ∨ false), (x_i ∨ x_j ∨ ¬y)
                clauses.push(vec![c[2], y]);
                clauses.push(vec![c[0], c[1], -y]);
            } else {
                // ¬x_i ∨ ¬x_j ∨ ¬x_k  =>  (¬x_i ∨ ¬x_j ∨ y), (¬x_k ∨ ¬y ∨ false)
                clauses.push(vec![c[0], c[1], y]);
                clauses.push(vec![c[2], -y]);
            }
        } else {
            clauses.push(c.clone());
        }
    }
    let last_ok = clauses
        .last()
        .is_some_and(|c: &Vec<Lit>| c.len() <= 2 && c.iter().all(|&l| l > 0));
    if !last_ok {
        next += 1;
        aux.push(AuxVar {
            var: next,
            origin: AuxOrigin::FinalUnit,
        });
        clauses.push(vec![next as Lit]);
    }
    let formula = CnfFormula::new(next, clauses)?;
    Ok(NormalizedFormula {
        formula,
        original_vars: f.num_vars,
        aux,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_all_positive() {
        let f = CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap();
        let n = normalize_formula(&f).unwrap();
        // the split ends in a mixed clause, so a fresh unit clause follows
        assert_eq!(n.clauses(), &[vec![3, 4], vec![1, 2, -4], vec![5]]);
        assert!(n.check());
    }

    #[test]
    fn splits_all_negative() {
        let f = CnfFormula::new(3, vec![vec![-1, -2, -3]]).unwrap();
        let n = normalize_formula(&f).unwrap();
        assert_eq!(&n.clauses()[..2], &[vec![-1, -2, 4], vec![-3, -4]]);
        assert_eq!(n.clauses()[2], vec![5]);
        assert!(n.check());
    }

    #[test]
    fn appends_positive_unit() {
        let f = CnfFormula::new(2, vec![vec![1, -2]]).unwrap();
        let n = normalize_formula(&f).unwrap();
        assert_eq!(n.clauses(), &[vec![1, -2], vec![3]]);
        assert_eq!(n.aux, vec![AuxVar { var: 3, origin: AuxOrigin::FinalUnit }]);
        assert!(n.check());
    }

    #[test]
    fn keeps_positive_tail() {
        let f = CnfFormula::new(1, vec![vec![1]]).unwrap();
        let n = normalize_formula(&f).unwrap();
        assert_eq!(n.clauses(), &[vec![1]]);
        assert!(n.aux.is_empty());
    }

    #[test]
    fn rejects_bad_clauses() {
        assert_eq!(CnfFormula::new(1, vec![vec![]]), Err(CnfError::EmptyClause(0)));
        assert!(matches!(CnfFormula::new(2, vec![vec![1, -1]]), Err(CnfError::RepeatedVariable(0, 1))));
        assert!(matches!(CnfFormula::new(1, vec![vec![2]]), Err(CnfError::LiteralOutOfRange { .. })));
        assert!(matches!(CnfFormula::new(4, vec![vec![1, 2, 3, 4]]), Err(CnfError::ClauseTooLong(0, 4))));
    }
}
