//! Symmetric powers of the binary motive in the split model.
//!
//! Over a field where the symbol dies, `μ = 0` and the binary motive splits
//! as `M = Z_(p) ⊕ Z_(p)(b)` with basis `1` (twist 0) and `h` (twist `b`).
//! `Sym^i(M)` has basis `e_t = 1^(i-t) h^t` at twist `t·b`, and every
//! morphism below becomes a matrix over `Z_(p)`. The exact triangles become
//! split short exact sequences of graded modules.
//!
//! Basis of `Sym^i(M) ⊗ M`: `e_t ⊗ 1` at index `2t`, `e_t ⊗ h` at `2t + 1`.
//!
//! `b_i` is `Sym^(i-1) ⊗ M -> Sym^i`. With this indexing the first
//! identity reads `y_i∘b_i - b_(i-1)∘(y_(i-1) ⊗ id) = id ⊗ y`, both sides
//! being maps `Sym^(i-1) ⊗ M -> Sym^(i-1)`.

use crate::arith::{FpScalar, LocalInt, Prime};
use crate::error::{Error, Result};
use crate::report::{Check, Status};
use crate::split_algebra::SymbolParams;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    twists: Vec<u64>,
}

impl GradedModule {
    pub fn new(twists: Vec<u64>) -> GradedModule {
        GradedModule { twists }
    }

    /// `Sym^i(M)`.
    pub fn sym(i: u32, b: u64) -> GradedModule {
        GradedModule::new((0..=i as u64).map(|t| t * b).collect())
    }

    /// The unit motive `Z_(p)(twist)`.
    pub fn unit(twist: u64) -> GradedModule {
        GradedModule::new(vec![twist])
    }

    /// `self ⊗ M`.
    pub fn tensor_m(&self, b: u64) -> GradedModule {
        GradedModule::new(self.twists.iter().flat_map(|&t| [t, t + b]).collect())
    }

    pub fn dim(&self) -> usize {
        self.twists.len()
    }

    pub fn twists(&self) -> &[u64] {
        &self.twists
    }
}

/// A morphism that raises twists by `twist_shift`. `coh_shift` records the
/// cohomological shift `[2·]` and does not take part in equality.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub source: GradedModule,
    pub target: GradedModule,
    pub twist_shift: u64,
    pub coh_shift: u64,
    /// `matrix[row][col]`, rows indexed by the target basis.
    pub matrix: Vec<Vec<LocalInt>>,
}

impl PartialEq for GradedMap {
    fn eq(&self, other: &GradedMap) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.twist_shift == other.twist_shift
            && self.matrix == other.matrix
    }
}

impl GradedMap {
    pub fn zero(source: GradedModule, target: GradedModule, twist_shift: u64) -> GradedMap {
        let matrix = vec![vec![LocalInt::zero(); source.dim()]; target.dim()];
        GradedMap { source, target, twist_shift, coh_shift: 2 * twist_shift, matrix }
    }

    fn set(&mut self, row: usize, col: usize, v: impl Into<LocalInt>) {
        self.matrix[row][col] = v.into();
    }

    pub fn entry(&self, row: usize, col: usize) -> &LocalInt {
        &self.matrix[row][col]
    }

    /// Image of the `col`-th basis vector.
    pub fn column(&self, col: usize) -> Vec<LocalInt> {
        self.matrix.iter().map(|row| row[col].clone()).collect()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GradedMap) -> Result<GradedMap> {
        if first.target != self.source {
            return Err(Error::ParamsMismatch);
        }
        let mut out = GradedMap::zero(
            first.source.clone(),
            self.target.clone(),
            self.twist_shift + first.twist_shift,
        );
        out.coh_shift = self.coh_shift + first.coh_shift;
        for r in 0..self.target.dim() {
            for c in 0..first.source.dim() {
                let v: LocalInt = (0..self.source.dim())
                    .map(|k| &self.matrix[r][k] * &first.matrix[k][c])
                    .sum();
                out.matrix[r][c] = v;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.source != other.source
            || self.target != other.target
            || self.twist_shift != other.twist_shift
        {
            return Err(Error::ParamsMismatch);
        }
        let mut out = self.clone();
        for (row, orow) in out.matrix.iter_mut().zip(&other.matrix) {
            for (x, y) in row.iter_mut().zip(orow) {
                *x = &*x - y;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &LocalInt) -> GradedMap {
        let mut out = self.clone();
        for row in out.matrix.iter_mut() {
            for x in row.iter_mut() {
                *x = &*x * s;
            }
        }
        out
    }

    /// `self ⊗ id_M`.
    pub fn tensor_id_m(&self, b: u64) -> GradedMap {
        let mut out = GradedMap::zero(self.source.tensor_m(b), self.target.tensor_m(b), self.twist_shift);
        out.coh_shift = self.coh_shift;
        for r in 0..self.target.dim() {
            for c in 0..self.source.dim() {
                for s in 0..2 {
                    out.matrix[2 * r + s][2 * c + s] = self.matrix[r][c].clone();
                }
            }
        }
        out
    }

    /// Every nonzero entry joins basis vectors whose twists differ by `twist_shift`.
    pub fn is_homogeneous(&self) -> bool {
        self.matrix.iter().enumerate().all(|(r, row)| {
            row.iter().enumerate().all(|(c, x)| {
                x.is_zero() || self.target.twists[r] == self.source.twists[c] + self.twist_shift
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(LocalInt::is_zero)
    }

    /// Rank of the reduction mod `p`.
    pub fn rank_mod_p(&self, p: Prime) -> Result<usize> {
        let mut rows: Vec<Vec<FpScalar>> = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|x| x.reduce_mod_p(p)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let cols = self.source.dim();
        let mut rank = 0;
        for c in 0..cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = rows[rank][c].inv().expect("nonzero in a field");
            for r in 0..rows.len() {
                if r != rank && !rows[r][c].is_zero() {
                    let factor = rows[r][c] * inv;
                    for k in 0..cols {
                        let v = rows[rank][k];
                        rows[r][k] = rows[r][k] - factor * v;
                    }
                }
            }
            rank += 1;
        }
        Ok(rank)
    }

    fn render(&self) -> String {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        format!("[{}]", rows.join("; "))
    }
}

fn check_index(i: u32, params: &SymbolParams) -> Result<()> {
    let top = params.top();
    if i < 1 || i > top {
        return Err(Error::IndexOutOfRange { index: i as i64, min: 1, max: top as i64 });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Morphisms {
    pub a: GradedMap,
    pub b: GradedMap,
    pub x: GradedMap,
    pub y: GradedMap,
    pub r: GradedMap,
}

/// `a_i: e_t ↦ (i-t) e_t⊗1 + t e_(t-1)⊗h`.
pub fn a_map(i: u32, params: &SymbolParams) -> Result<GradedMap> {
    check_index(i, params)?;
    let b = params.b();
    let mut f = GradedMap::zero(GradedModule::sym(i, b), GradedModule::sym(i - 1, b).tensor_m(b), 0);
    for t in 0..=i as usize {
        if t < i as usize {
            f.set(2 * t, t, (i as usize - t) as u64);
        }
        if t > 0 {
            f.set(2 * (t - 1) + 1, t, t as u64);
        }
    }
    Ok(f)
}

/// `b_i: e_t⊗1 ↦ e_t`, `e_t⊗h ↦ e_(t+1)`.
pub fn b_map(i: u32, params: &SymbolParams) -> Result<GradedMap> {
    check_index(i, params)?;
    let b = params.b();
    let mut f = GradedMap::zero(GradedModule::sym(i - 1, b).tensor_m(b), GradedModule::sym(i, b), 0);
    for t in 0..i as usize {
        f.set(t, 2 * t, 1u64);
        f.set(t + 1, 2 * t + 1, 1u64);
    }
    Ok(f)
}

/// `x_i = b_i∘(1⊗x): Sym^(i-1)(b)[2b] -> Sym^i`, `e_t ↦ e_(t+1)`.
pub fn x_map(i: u32, params: &SymbolParams) -> Result<GradedMap> {
    check_index(i, params)?;
    let b = params.b();
    let mut f = GradedMap::zero(GradedModule::sym(i - 1, b), GradedModule::sym(i, b), b);
    for t in 0..i as usize {
        f.set(t + 1, t, 1u64);
    }
    Ok(f)
}

/// `y_i = (1⊗y)∘a_i: Sym^i -> Sym^(i-1)`, `e_t ↦ (i-t) e_t`.
pub fn y_map(i: u32, params: &SymbolParams) -> Result<GradedMap> {
    check_index(i, params)?;
    let b = params.b();
    let mut f = GradedMap::zero(GradedModule::sym(i, b), GradedModule::sym(i - 1, b), 0);
    for t in 0..i as usize {
        f.set(t, t, (i as usize - t) as u64);
    }
    Ok(f)
}

/// `r_i = Sym^i(y): Sym^i -> Z_(p)`, `e_t ↦ [t = 0]`.
pub fn r_map(i: u32, params: &SymbolParams) -> Result<GradedMap> {
    check_index(i, params)?;
    let mut f = GradedMap::zero(GradedModule::sym(i, params.b()), GradedModule::unit(0), 0);
    f.set(0, 0, 1u64);
    Ok(f)
}

pub fn build_morphisms(i: u32, params: &SymbolParams) -> Result<Morphisms> {
    Ok(Morphisms {
        a: a_map(i, params)?,
        b: b_map(i, params)?,
        x: x_map(i, params)?,
        y: y_map(i, params)?,
        r: r_map(i, params)?,
    })
}

/// `id ⊗ y: Sym^i ⊗ M -> Sym^i`.
fn id_tensor_y(i: u32, b: u64) -> GradedMap {
    let sym = GradedModule::sym(i, b);
    let mut f = GradedMap::zero(sym.tensor_m(b), sym, 0);
    for t in 0..=i as usize {
        f.set(t, 2 * t, 1u64);
    }
    f
}

/// `Sym^(p-1)(x): Z_(p)(d)[2d] -> Sym^(p-1)`, the inclusion of `e_(p-1)`.
pub fn top_inclusion(params: &SymbolParams) -> GradedMap {
    let top = params.top();
    let mut f = GradedMap::zero(GradedModule::unit(0), GradedModule::sym(top, params.b()), params.d());
    f.set(top as usize, 0, 1u64);
    f
}

pub fn identity(module: GradedModule) -> GradedMap {
    let mut f = GradedMap::zero(module.clone(), module, 0);
    for t in 0..f.source.dim() {
        f.set(t, t, 1u64);
    }
    f
}

fn factorial(n: u64) -> LocalInt {
    (1..=n).fold(LocalInt::one(), |acc, k| &acc * &LocalInt::from(k))
}

/// `s = y_2∘…∘y_(p-1) / (p-2)!: Sym^(p-1) -> M`; the identity of `M` when `p = 2`.
pub fn s_map(params: &SymbolParams) -> Result<GradedMap> {
    let top = params.top();
    let b = params.b();
    let mut acc = identity(GradedModule::sym(top, b));
    for i in (2..=top).rev() {
        acc = y_map(i, params)?.after(&acc)?;
    }
    let scale = factorial(top as u64 - 1).inv_unit(params.prime())?;
    Ok(acc.scale(&scale))
}

/// The scalar by which `y∘s` acts on the bottom generator `e_0`; equals `p - 1`.
pub fn boundary_scale(params: &SymbolParams) -> Result<LocalInt> {
    let composite = y_map(1, params)?.after(&s_map(params)?)?;
    Ok(composite.entry(0, 0).clone())
}

fn identity_check(name: String, lhs: &GradedMap, rhs: &GradedMap) -> Check {
    if lhs == rhs {
        Check::pass(name)
    } else {
        let detail = match lhs.sub(rhs) {
            Ok(diff) => format!("difference {}", diff.render()),
            Err(_) => format!("shape mismatch: {} vs {}", lhs.render(), rhs.render()),
        };
        Check::new(name, Status::Fail, detail)
    }
}

/// The three identities relating `y_i`, `b_i` and `r_i` for `2 ≤ i ≤ p-1`.
pub fn verify_sym_identities(params: &SymbolParams) -> Result<Vec<Check>> {
    let top = params.top();
    let b = params.b();
    if top < 2 {
        return Ok(vec![Check::new(
            "sym identities",
            Status::Vacuous,
            "range 2 <= i <= p-1 is empty",
        )]);
    }
    let mut checks = Vec::new();
    for i in 2..=top {
        let lhs = y_map(i, params)?
            .after(&b_map(i, params)?)?
            .sub(&b_map(i - 1, params)?.after(&y_map(i - 1, params)?.tensor_id_m(b))?)?;
        checks.push(identity_check(
            format!("y_i∘b_i - b_(i-1)∘(y_(i-1)⊗id) = id⊗y, i={i}"),
            &lhs,
            &id_tensor_y(i - 1, b),
        ));

        let lhs = r_map(i - 1, params)?.after(&y_map(i, params)?)?;
        let rhs = r_map(i, params)?.scale(&LocalInt::from(i as u64));
        checks.push(identity_check(format!("r_(i-1)∘y_i = i·r_i, i={i}"), &lhs, &rhs));

        let mut chain = y_map(i, params)?;
        for k in (1..i).rev() {
            chain = y_map(k, params)?.after(&chain)?;
        }
        let rhs = r_map(i, params)?.scale(&factorial(i as u64));
        checks.push(identity_check(format!("y_1∘…∘y_i = i!·r_i, i={i}"), &chain, &rhs));
    }
    Ok(checks)
}

/// Both commuting squares for each `2 ≤ i ≤ p-1`, then the square for `s`.
pub fn verify_squares(params: &SymbolParams) -> Result<Vec<Check>> {
    let top = params.top();
    let mut checks = Vec::new();
    if top < 2 {
        checks.push(Check::new(
            "x/y/r squares",
            Status::Vacuous,
            "range 2 <= i <= p-1 is empty",
        ));
    }
    for i in 2..=top {
        let lhs = y_map(i, params)?.after(&x_map(i, params)?)?;
        let rhs = x_map(i - 1, params)?.after(&y_map(i - 1, params)?)?;
        checks.push(identity_check(format!("y_i∘x_i = x_(i-1)∘y_(i-1), i={i}"), &lhs, &rhs));
        let lhs = r_map(i - 1, params)?.after(&y_map(i, params)?)?;
        let rhs = r_map(i, params)?.scale(&LocalInt::from(i as u64));
        checks.push(identity_check(format!("r_(i-1)∘y_i = i·r_i (square), i={i}"), &lhs, &rhs));
    }

    let s = s_map(params)?;
    let x = x_map(1, params)?;
    let y = y_map(1, params)?;
    let lhs = y.after(&s)?;
    let rhs = r_map(top, params)?.scale(&LocalInt::from(params.p() - 1));
    if top < 2 {
        let ok = lhs == rhs && s == identity(GradedModule::sym(1, params.b()));
        let status = if ok { Status::Degenerate } else { Status::Fail };
        checks.push(Check::new("y∘s = (p-1)·r_(p-1)", status, "s is the identity of M"));
        return Ok(checks);
    }
    checks.push(identity_check("y∘s = (p-1)·r_(p-1)".into(), &lhs, &rhs));
    let lhs = s.after(&x_map(top, params)?)?;
    let rhs = x.after(&r_map(top - 1, params)?)?;
    checks.push(identity_check("s∘x_(p-1) = x∘r_(p-2)".into(), &lhs, &rhs));
    Ok(checks)
}

/// `A -f-> B -g-> C` is split exact over `Z_(p)`.
///
/// With `g∘f = 0`, `f` injective mod `p`, `g` surjective mod `p` and
/// `dim A + dim C = dim B`, Nakayama gives split exactness.
pub fn split_exact(f: &GradedMap, g: &GradedMap, p: Prime) -> Result<(bool, String)> {
    let gf = g.after(f)?;
    let rank_f = f.rank_mod_p(p)?;
    let rank_g = g.rank_mod_p(p)?;
    let (a, bb, c) = (f.source.dim(), f.target.dim(), g.target.dim());
    let ok = gf.is_zero() && rank_f == a && rank_g == c && a + c == bb;
    let detail = format!(
        "g∘f zero: {}, rank f = {rank_f}/{a}, rank g = {rank_g}/{c}, dims {a}+{c} vs {bb}",
        gf.is_zero()
    );
    Ok((ok, detail))
}

/// Split exactness of `Z(d) -> Sym^(p-1) -> Sym^(p-2)` and
/// `Sym^(p-2)(b) -> Sym^(p-1) -> Z`.
pub fn verify_triangles(params: &SymbolParams) -> Result<Vec<Check>> {
    let top = params.top();
    let p = params.prime();
    let mut checks = Vec::new();
    let (ok, detail) = split_exact(&top_inclusion(params), &y_map(top, params)?, p)?;
    checks.push(Check::from_result(
        "Z(d) -Sym(x)-> Sym^(p-1) -y-> Sym^(p-2) split exact",
        ok,
        detail,
    ));
    let (ok, detail) = split_exact(&x_map(top, params)?, &r_map(top, params)?, p)?;
    checks.push(Check::from_result(
        "Sym^(p-2)(b) -x-> Sym^(p-1) -r-> Z split exact",
        ok,
        detail,
    ));
    Ok(checks)
}
