//! Exhaustive checks of the gadget properties the reduction relies on.
//!
//! Each check builds a small instance, runs the exact search or a scripted
//! fold schedule, and reports whether the property held.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use crate::cnf::{normalize_formula, CnfFormula, NormalizedFormula};
use crate::fold::{FoldMode, FoldState, SegmentId};
use crate::geom::{Rational, ratio};
use crate::reduce::{
    clause_anchor, compile, current_segment, fold_roles, isolated_clause_gadget, isolated_variable_gadget,
    literal_x, plan_folds, zone_pair, ClausePart, GadgetMap, LayoutParams, Role, VarPart,
};
use crate::solve::{
    enumerate_orders, find_flagged_solution, replay, solve, SearchBudget, SearchOutcome,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

fn parts_of(order: &[Vec<SegmentId>], gm: &GadgetMap) -> Option<Vec<VarPart>> {
    order
        .iter()
        .map(|step| match step.as_slice() {
            [id] => match gm.role(*id)? {
                Role::Var { part, .. } => Some(part),
                _ => None,
            },
            _ => None,
        })
        .collect()
}

/// Which family a 13-step crease order belongs to: `Some(true)` when t is
/// folded first, `Some(false)` when f is, `None` when it fits neither.
///
/// Ignoring t_b3 and f_b3, the order must equal the fixed schedule of its
/// family; t_b3 must come after t_h and f_b3 after f_h, both before b1.
pub fn variable_family(parts: &[VarPart]) -> Option<bool> {
    use VarPart::*;
    let first = match parts.first()? {
        T => true,
        F => false,
        _ => return None,
    };
    let floating = |p: &VarPart| matches!(p, TB3 | FB3);
    let core: Vec<VarPart> = parts.iter().copied().filter(|p| !floating(p)).collect();
    let want: Vec<VarPart> = VarPart::schedule(first).into_iter().filter(|p| !floating(p)).collect();
    let pos = |x: VarPart| parts.iter().position(|p| *p == x);
    let (tb3, fb3, th, fh, b1) = (pos(TB3)?, pos(FB3)?, pos(TH)?, pos(FH)?, pos(B1)?);
    let ok = parts.len() == 13 && core == want && th < tb3 && tb3 < b1 && fh < fb3 && fb3 < b1;
    ok.then_some(first)
}

/// An isolated variable gadget folds in 13 steps in exactly two families.
pub fn variable_lemma(params: &LayoutParams) -> Check {
    let name = "variable gadget folds in exactly two ways";
    let t0 = Instant::now();
    let (inst, gm) = isolated_variable_gadget(params, 1);
    let orders = match enumerate_orders(&inst, FoldMode::Restricted, 13, SearchBudget::depth(13)) {
        Ok(o) => o,
        Err(e) => return Check::new(name, false, format!("search gave up after {} nodes", e.nodes)),
    };
    let mut t_first = 0;
    let mut f_first = 0;
    let mut stray = Vec::new();
    for o in &orders {
        match parts_of(o, &gm).as_deref().and_then(variable_family) {
            Some(true) => t_first += 1,
            Some(false) => f_first += 1,
            None => stray.push(o.clone()),
        }
    }
    let passed = stray.is_empty() && t_first > 0 && f_first > 0;
    let mut detail = format!(
        "{} orders: {t_first} t-first, {f_first} f-first, {} other ({:.2?})",
        orders.len(),
        stray.len(),
        t0.elapsed()
    );
    if let Some(o) = stray.first() {
        detail.push_str(&format!("; first stray order {o:?}"));
    }
    Check::new(name, passed, detail)
}

fn var_roles(var: u32, value: bool) -> Vec<Role> {
    VarPart::schedule(value).into_iter().map(|part| Role::Var { var, part }).collect()
}

/// After each variable gadget is folded (either family), the next
/// variable's t sits exactly d_x left of γ.
pub fn reset_lemma(f: &NormalizedFormula, params: &LayoutParams, assignment: &[bool]) -> Check {
    let name = format!("distance to γ resets to d_x ({})", bits(assignment));
    let (inst, gm) = match compile(f, params) {
        Ok(x) => x,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    let anchor = clause_anchor(&inst, &gm);
    let want = -params.d_x();
    let mut st = FoldState::new(&inst);
    let mut seen = Vec::new();
    for (i, &v) in assignment.iter().enumerate() {
        st = match fold_roles(&st, &gm, &var_roles(i as u32 + 1, v), &anchor) {
            Ok((_, s)) => s,
            Err(e) => return Check::new(name, false, e.to_string()),
        };
        let Some(next_t) = gm.var_id(i as u32 + 2, VarPart::T) else { break };
        let x = current_segment(&st, next_t).map(|s| s.p().x.clone());
        if x.as_ref() != Some(&want) {
            return Check::new(name, false, format!("t of x{} at {x:?} after x{}, want {want}", i + 2, i + 1));
        }
        seen.push(i + 2);
    }
    Check::new(name, true, format!("t at x = {want} for variables {seen:?}"))
}

fn bits(a: &[bool]) -> String {
    a.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

/// Where each literal segment lands after its variable gadget is folded.
///
/// A true literal (positive with t first, negative with f first) lands in
/// its clause's good zone. A false positive literal lands in its clause's
/// bad zone, a false negative one in the bad zone of the next clause. The
/// literal segments of one clause never share a coordinate.
pub fn literal_landing(f: &NormalizedFormula, params: &LayoutParams) -> Check {
    let name = "literal segments land in good or bad zones";
    let (inst, gm) = match compile(f, params) {
        Ok(x) => x,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    let anchor = clause_anchor(&inst, &gm);
    // landing x of (var, clause, negated, value)
    let mut landed: Vec<(u32, usize, bool, bool, Rational)> = Vec::new();
    let mut errors = Vec::new();
    for var in 1..=f.num_vars() {
        for value in [true, false] {
            // earlier gadgets fold the same either way; use all-true
            let mut roles: Vec<Role> = (1..var).flat_map(|v| var_roles(v, true)).collect();
            roles.extend(var_roles(var, value));
            let st = match fold_roles(&FoldState::new(&inst), &gm, &roles, &anchor) {
                Ok((_, s)) => s,
                Err(e) => return Check::new(name, false, e.to_string()),
            };
            for role in gm.roles.values() {
                let Role::Literal { var: v, clause, negated } = *role else { continue };
                if v != var {
                    continue;
                }
                let Some(x) = literal_x(&st, &gm, *role) else {
                    errors.push(format!("{role} is no longer vertical"));
                    continue;
                };
                let (good, bad) = zone_pair(clause, params.w_g);
                let (_, next_bad) = zone_pair(clause + 1, params.w_g);
                let ok = match (value != negated, negated) {
                    (true, _) => good.contains(&x),
                    (false, false) => bad.contains(&x),
                    (false, true) => next_bad.contains(&x),
                };
                if !ok {
                    errors.push(format!("{role} with x{var}={value} at {x}"));
                }
                landed.push((var, clause, negated, value, x));
            }
        }
    }
    for a in &landed {
        for b in &landed {
            if a.1 == b.1 && a.0 < b.0 && a.4 == b.4 {
                errors.push(format!("clause {}: x{} and x{} both land at {}", a.1, a.0, b.0, a.4));
            }
        }
    }
    let detail = if errors.is_empty() {
        format!("{} landings checked", landed.len())
    } else {
        errors.join("; ")
    };
    Check::new(name, errors.is_empty(), detail)
}

/// An isolated clause gadget plus one auxiliary vertical above it folds in
/// 6 steps exactly when the auxiliary line is inside the good zone, and
/// every such solution starts with c1, c2 and ends with c4 or b.
pub fn clause_lemma(params: &LayoutParams, mode: FoldMode) -> Check {
    let name = format!("clause gadget folds iff a literal is in the good zone ({:?}, {mode:?})", params.h_c);
    let (j, m) = (2, 2);
    let good = zone_pair(j, 1).0;
    let mut solvable = Vec::new();
    let mut errors = Vec::new();
    for k in -4..=40 {
        let x = ratio(k, 4);
        let (inst, _) = isolated_clause_gadget(params, j, m, x.clone());
        let r = solve(&inst, mode, SearchBudget::decision(6));
        let ok = match r.outcome {
            SearchOutcome::Solved(_) => true,
            SearchOutcome::Unsolvable => false,
            SearchOutcome::ResourceExhausted => {
                errors.push(format!("search gave up at x = {x}"));
                continue;
            }
        };
        let in_zone = good.contains(&(&x + Rational::from_integer(9.into())));
        if ok {
            solvable.push(x.to_string());
        }
        if ok != in_zone {
            errors.push(format!("x = {x}: solvable {ok}, in good zone {in_zone}"));
        }
        if ok {
            let (inst, gm) = isolated_clause_gadget(params, j, m, x.clone());
            match enumerate_orders(&inst, mode, 6, SearchBudget::depth(6)) {
                Ok(orders) => {
                    for o in orders {
                        let parts: Vec<Option<ClausePart>> = o
                            .iter()
                            .filter_map(|step| match step.as_slice() {
                                [id] => match gm.role(*id) {
                                    Some(Role::Clause { part, .. }) => Some(Some(part)),
                                    _ => None,
                                },
                                _ => Some(None),
                            })
                            .collect();
                        let shape = parts.len() == 5
                            && parts[0] == Some(ClausePart::C1)
                            && parts[1] == Some(ClausePart::C2)
                            && matches!(parts[4], Some(ClausePart::C4) | Some(ClausePart::B));
                        if !shape {
                            errors.push(format!("x = {x}: order {parts:?}"));
                        }
                    }
                }
                Err(e) => errors.push(format!("enumeration gave up after {} nodes", e.nodes)),
            }
        }
    }
    let detail = if errors.is_empty() {
        format!("solvable exactly at {solvable:?} (grid units from the gadget's left edge)")
    } else {
        errors.join("; ")
    };
    Check::new(name, errors.is_empty(), detail)
}

/// Solvable in |S| restricted folds exactly when satisfiable; for
/// satisfiable formulas the scripted plan replays too.
pub fn end_to_end(f0: &CnfFormula, params: &LayoutParams, mode: FoldMode) -> Check {
    let name = format!("{f0}: solvable in |S| iff satisfiable");
    let f = match normalize_formula(f0) {
        Ok(f) => f,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    let (inst, gm) = match compile(&f, params) {
        Ok(x) => x,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    let t0 = Instant::now();
    let sat = f0.brute_force_model();
    let res = solve(&inst, mode, SearchBudget::decision(inst.len()));
    let solved = match res.outcome {
        SearchOutcome::Solved(_) => true,
        SearchOutcome::Unsolvable => false,
        SearchOutcome::ResourceExhausted => {
            return Check::new(name, false, format!("search gave up after {} nodes", res.stats.nodes))
        }
    };
    let mut detail = format!(
        "|S| = {}, satisfiable {}, solvable {solved}, {} nodes, {:.2?}",
        inst.len(),
        sat.is_some(),
        res.stats.nodes,
        t0.elapsed()
    );
    let mut passed = solved == sat.is_some();
    if let Some(model) = sat {
        let full = f.extend_assignment(&model).expect("a model of the input extends");
        let replayed = plan_folds(&f, &inst, &gm, &full)
            .map_err(|e| e.to_string())
            .and_then(|mv| replay(&inst, &mv, mode).map_err(|e| e.to_string()).map(|s| (mv.len(), s)));
        match replayed {
            Ok((n, s)) if s.is_empty() && n == inst.len() => detail.push_str(", plan replays"),
            Ok((n, _)) => {
                passed = false;
                detail.push_str(&format!(", plan of {n} folds leaves segments"));
            }
            Err(e) => {
                passed = false;
                detail.push_str(&format!(", plan failed: {e}"));
            }
        }
    }
    Check::new(name, passed, detail)
}

/// Ordering properties every |S|-fold solution of a compiled instance has.
pub fn ordering_oracles(f: &NormalizedFormula, params: &LayoutParams, budget: SearchBudget) -> Vec<Check> {
    let (inst, gm) = match compile(f, params) {
        Ok(x) => x,
        Err(e) => return vec![Check::new("ordering", false, e.to_string())],
    };
    let n = inst.len();
    let start = FoldState::new(&inst);
    let exists = matches!(solve(&inst, FoldMode::Restricted, SearchBudget::decision(n)).outcome, SearchOutcome::Solved(_));
    if !exists {
        return vec![Check::new("ordering", false, "instance has no |S|-fold solution to inspect")];
    }
    let remaining = |st: &FoldState| -> BTreeSet<SegmentId> {
        st.provenance().values().flat_map(|p| p.iter().copied()).collect()
    };
    let role = |id: &SegmentId| gm.role(*id);
    type Flag<'a> = Box<dyn Fn(&FoldState, &[SegmentId]) -> bool + 'a>;
    let props: Vec<(&str, Flag)> = vec![
        (
            "variables fold in index order",
            Box::new(|st: &FoldState, step: &[SegmentId]| {
                let left = remaining(st);
                step.iter().any(|id| match role(id) {
                    Some(Role::Var { var, .. }) => left
                        .iter()
                        .any(|o| matches!(role(o), Some(Role::Var { var: w, .. }) if w < var)),
                    _ => false,
                })
            }),
        ),
        (
            "clause gadgets fold in order m..1",
            Box::new(|st: &FoldState, step: &[SegmentId]| {
                let left = remaining(st);
                step.iter().any(|id| match role(id) {
                    Some(Role::Clause { clause, .. }) => left
                        .iter()
                        .any(|o| matches!(role(o), Some(Role::Clause { clause: k, .. }) if k > clause)),
                    _ => false,
                })
            }),
        ),
        (
            "negative literals fold before positive ones in a clause",
            Box::new(|st: &FoldState, step: &[SegmentId]| {
                let left = remaining(st);
                step.iter().any(|id| match role(id) {
                    Some(Role::Literal { clause, negated: false, .. })
                    | Some(Role::LiteralBlocker { clause, negated: false, .. }) => left.iter().any(|o| {
                        matches!(role(o), Some(Role::Literal { clause: k, negated: true, .. }) if k == clause)
                    }),
                    _ => false,
                })
            }),
        ),
        (
            "a variable's literals fold from the last clause to the first",
            Box::new(|st: &FoldState, step: &[SegmentId]| {
                let left = remaining(st);
                step.iter().any(|id| match role(id) {
                    Some(Role::Literal { var, clause, .. }) | Some(Role::LiteralBlocker { var, clause, .. }) => {
                        left.iter().any(|o| {
                            matches!(role(o), Some(Role::Literal { var: v, clause: k, .. }) if v == var && k > clause)
                        })
                    }
                    _ => false,
                })
            }),
        ),
        (
            "no literal folds before every variable segment",
            Box::new(|st: &FoldState, step: &[SegmentId]| {
                let left = remaining(st);
                step.iter().any(|id| matches!(role(id), Some(Role::Literal { .. }) | Some(Role::LiteralBlocker { .. })))
                    && left.iter().any(|o| matches!(role(o), Some(Role::Var { .. })))
            }),
        ),
    ];
    props
        .into_iter()
        .map(|(name, flag)| {
            let t0 = Instant::now();
            match find_flagged_solution(&start, FoldMode::Restricted, n, budget, flag) {
                Ok(None) => Check::new(name, true, format!("no |S|-fold solution violates it ({:.2?})", t0.elapsed())),
                Ok(Some(seq)) => {
                    let st = replay(&inst, &seq, FoldMode::Restricted).expect("search returns legal folds");
                    let order: Vec<String> = st
                        .history()
                        .iter()
                        .map(|h| h.consumed.iter().map(|id| role(id).map_or(format!("#{id}"), |r| r.to_string())).collect::<Vec<_>>().join("+"))
                        .collect();
                    Check::new(name, false, format!("counterexample: {}", order.join(" ")))
                }
                Err(e) => Check::new(name, false, format!("search gave up after {} nodes", e.nodes)),
            }
        })
        .collect()
}
