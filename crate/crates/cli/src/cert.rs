//! JSON encodings of certificate pieces shared by the producers and `check`.
//!
//! Sets travel as their canonical one-line text (`level 2: x0 in {0}`),
//! tuples as arrays of integers.

use idealforge::quasisys::{ConditionCViolation, Index};
use idealforge::{QuasiHomSystem, SumSymbolicSet, SymbolicSet};
use serde_json::{json, Value};

use crate::parse::{parse_level, print_level};

/// Why a document failed to check.
pub type Reject = String;
pub type CheckResult<T> = std::result::Result<T, Reject>;

pub fn set_text(s: &SymbolicSet) -> String {
    print_level(s).trim_end().to_string()
}

/// `(c+1, ..., c+1)` for the largest constant `c` of `s`. Every predicate
/// treats the values above `c` alike, so `s` is small iff this point is
/// missing from it.
pub fn generic_point(s: &SymbolicSet) -> Vec<u64> {
    let c = s.max_constant().map_or(0, |c| c + 1);
    vec![c; s.level()]
}

pub fn core<T>(r: idealforge::Result<T>) -> CheckResult<T> {
    r.map_err(|e| e.to_string())
}

pub fn field<'a>(v: &'a Value, key: &str) -> CheckResult<&'a Value> {
    v.get(key).ok_or_else(|| format!("certificate lacks `{key}`"))
}

pub fn get_u64(v: &Value, key: &str) -> CheckResult<u64> {
    field(v, key)?
        .as_u64()
        .ok_or_else(|| format!("`{key}` is not an integer"))
}

pub fn get_usize(v: &Value, key: &str) -> CheckResult<usize> {
    usize::try_from(get_u64(v, key)?).map_err(|_| format!("`{key}` is too large"))
}

pub fn get_bool(v: &Value, key: &str) -> CheckResult<bool> {
    field(v, key)?
        .as_bool()
        .ok_or_else(|| format!("`{key}` is not a boolean"))
}

pub fn get_str<'a>(v: &'a Value, key: &str) -> CheckResult<&'a str> {
    field(v, key)?
        .as_str()
        .ok_or_else(|| format!("`{key}` is not a string"))
}

pub fn get_array<'a>(v: &'a Value, key: &str) -> CheckResult<&'a Vec<Value>> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| format!("`{key}` is not an array"))
}

pub fn as_tuple(v: &Value) -> CheckResult<Vec<u64>> {
    v.as_array()
        .and_then(|xs| xs.iter().map(Value::as_u64).collect::<Option<Vec<u64>>>())
        .ok_or_else(|| "expected an array of integers".to_string())
}

pub fn get_tuple(v: &Value, key: &str) -> CheckResult<Vec<u64>> {
    as_tuple(field(v, key)?).map_err(|e| format!("`{key}`: {e}"))
}

pub fn get_set(v: &Value, key: &str) -> CheckResult<SymbolicSet> {
    parse_level(get_str(v, key)?).map_err(|e| format!("`{key}`: {e}"))
}

pub fn expect_kind(cert: &Value, kind: &str) -> CheckResult<()> {
    let found = get_str(cert, "kind")?;
    if found == kind {
        Ok(())
    } else {
        Err(format!("expected a `{kind}` certificate, found `{found}`"))
    }
}

pub fn ensure(ok: bool, msg: impl FnOnce() -> String) -> CheckResult<()> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn limit_json(i: usize, p: &SymbolicSet) -> Value {
    json!({"kind": "limit", "index": i, "dual": set_text(p)})
}

/// The tail projections `U_1, ..., U_bound` all contain their generic
/// points, so none of them is small and no index up to `bound` certifies.
pub fn no_limit_json(
    bound: usize,
    tails: impl Fn(usize) -> idealforge::Result<SymbolicSet>,
) -> idealforge::Result<Value> {
    let witnesses = (1..=bound)
        .map(|i| Ok(json!({"index": i, "point": generic_point(&tails(i)?)})))
        .collect::<idealforge::Result<Vec<Value>>>()?;
    Ok(json!({"kind": "no-limit", "bound": bound, "witnesses": witnesses}))
}

pub fn check_no_limit(
    cert: &Value,
    needed: usize,
    tails: impl Fn(usize) -> idealforge::Result<SymbolicSet>,
) -> CheckResult<()> {
    expect_kind(cert, "no-limit")?;
    let bound = get_usize(cert, "bound")?;
    ensure(bound >= needed, || {
        format!("bound {bound} is below the search bound {needed}")
    })?;
    let witnesses = get_array(cert, "witnesses")?;
    ensure(witnesses.len() == bound, || "one witness per index is required".into())?;
    for (w, i) in witnesses.iter().zip(1..) {
        ensure(get_usize(w, "index")? == i, || format!("witness {i} is out of order"))?;
        let u = core(tails(i))?;
        let point = get_tuple(w, "point")?;
        ensure(point == generic_point(&u), || {
            format!("witness {i} is not the generic point")
        })?;
        ensure(core(u.contains(&point))?, || {
            format!("the tail projection at {i} misses its witness")
        })?;
    }
    Ok(())
}

fn index_json(k: Index) -> Value {
    match k {
        Index::Finite(k) => json!(k),
        Index::Infinity => json!("inf"),
    }
}

fn index_from(v: &Value) -> CheckResult<Index> {
    match v {
        Value::String(s) if s == "inf" => Ok(Index::Infinity),
        _ => v
            .as_u64()
            .map(|k| Index::Finite(k as usize))
            .ok_or_else(|| "index must be an integer or \"inf\"".to_string()),
    }
}

pub fn condition_c_json(system: &QuasiHomSystem, v: &ConditionCViolation) -> Value {
    json!({
        "kind": "condition-c-violation",
        "system": system.name(),
        "i": v.i,
        "j": index_json(v.j),
        "k": index_json(v.k),
        "summand": v.summand,
        "point": v.point,
    })
}

/// Re-checks `a ∈ π_{j,k}^{-1}[dom π_{i,j}] ∖ dom π_{i,k}` at the recorded point.
pub fn check_condition_c_violation(system: &QuasiHomSystem, cert: &Value) -> CheckResult<()> {
    expect_kind(cert, "condition-c-violation")?;
    ensure(get_str(cert, "system")? == system.name(), || {
        "system name differs".into()
    })?;
    let i = get_usize(cert, "i")?;
    let j = match index_from(field(cert, "j")?)? {
        Index::Finite(j) => j,
        Index::Infinity => return Err("j must be finite".into()),
    };
    let point = get_tuple(cert, "point")?;
    ensure(1 <= i && i <= j, || "indices must satisfy 1 <= i <= j".into())?;
    let dom_ij = core(system.dom(i, j))?;
    match index_from(field(cert, "k")?)? {
        Index::Finite(k) => {
            ensure(j <= k && point.len() == k, || "point does not live at level k".into())?;
            let pre = core(system.preimage(j, k, &dom_ij))?;
            ensure(pre.contains(&point).unwrap_or(false), || {
                "point is outside the pulled-back domain".into()
            })?;
            ensure(!core(system.dom(i, k))?.contains(&point).unwrap_or(false), || {
                "point lies in dom(i, k)".into()
            })?;
        }
        Index::Infinity => {
            ensure(system.is_extended(), || "system has no top index".into())?;
            let s = get_usize(cert, "summand")?;
            ensure(
                core(system.top_preimage(j, &dom_ij))?
                    .sum_contains(s, &point)
                    .unwrap_or(false),
                || "point is outside the pulled-back domain".into(),
            )?;
            ensure(
                !core(system.top_domain(i))?.sum_contains(s, &point).unwrap_or(false),
                || "point lies in the top domain".into(),
            )?;
        }
    }
    Ok(())
}

pub fn sum_tails(m: &SumSymbolicSet) -> impl Fn(usize) -> idealforge::Result<SymbolicSet> + '_ {
    move |i| m.tail_union_projection(i)
}

pub fn system_tails<'a>(
    sys: &'a QuasiHomSystem,
    m: &'a SumSymbolicSet,
) -> impl Fn(usize) -> idealforge::Result<SymbolicSet> + 'a {
    move |i| sys.tail_image(m, i)
}
