//! Per-level computation: Brandt module, operators, Eisenstein split, old
//! space from the lower levels, constituents and records.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;

use crate::analysis::record::{hnf_data, integral_coordinates, rational_value};
use crate::analysis::{detect_base_change, detect_cm, BaseChangeVerdict, CmVerdict, NewformRecord};
use crate::arith::ideal::{factor_ideal, ideals_in_range, primes_up_to};
use crate::arith::{BaseField, Ideal, PrimeIdeal};
use crate::brandt::{BrandtModule, HeckeOperator};
use crate::db::config::FieldConfig;
use crate::db::format::record_order;
use crate::linalg::{decompose, old_new_split, Elem, HeckeConstituent, LabeledOp, QMat};
use crate::quat::classes::neighbor_prime;
use crate::quat::{IdealClassSet, QuaternionOrder};
use crate::{par, Error, Result};

/// Wall-clock time per stage of one level.
#[derive(Clone, Debug, Default)]
pub struct StageTimings {
    pub module: Duration,
    pub operators: Duration,
    pub split: Duration,
    pub old_new: Duration,
    pub decompose: Duration,
}

#[derive(Clone, Debug)]
pub struct LevelResult {
    pub level: Ideal,
    pub dim: usize,
    pub eisenstein_dim: usize,
    pub cusp_dim: usize,
    pub old_dim: usize,
    /// Stabilizer orders of the basis orbits.
    pub stabilizers: Vec<usize>,
    /// Hecke and Atkin–Lehner operators on the whole module.
    pub operators: Vec<HeckeOperator>,
    /// The same operators restricted to the cusp part.
    pub cusp_ops: Vec<LabeledOp>,
    /// Operators on the new quotient, Hecke first, then Atkin–Lehner.
    pub new_ops: Vec<LabeledOp>,
    pub constituents: Vec<HeckeConstituent>,
    pub timings: StageTimings,
}

impl LevelResult {
    pub fn new_dim(&self) -> usize {
        self.cusp_dim - self.old_dim
    }
}

/// All ideal divisors of `n`, sorted.
pub fn ideal_divisors(field: &BaseField, n: &Ideal) -> Result<Vec<Ideal>> {
    let mut out = vec![Ideal::unit()];
    for (p, e) in factor_ideal(field, n)? {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = *d;
            for _ in 0..=e {
                next.push(pk);
                pk = pk.mul(field, &p.ideal);
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

/// Shared per-field state: the order, class sets keyed by neighbor prime
/// and the results of every level computed so far.
pub struct Pipeline {
    field: BaseField,
    order: QuaternionOrder,
    prime_bound: i64,
    primes: Vec<PrimeIdeal>,
    classes: Mutex<HashMap<String, Arc<IdealClassSet>>>,
    levels: Mutex<BTreeMap<Ideal, Arc<LevelResult>>>,
}

impl Pipeline {
    pub fn new(config: &FieldConfig, prime_bound: i64) -> Self {
        Pipeline {
            field: config.field.clone(),
            order: config.order.clone(),
            prime_bound,
            primes: primes_up_to(&config.field, prime_bound),
            classes: Mutex::new(HashMap::new()),
            levels: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn order(&self) -> &QuaternionOrder {
        &self.order
    }

    pub fn prime_bound(&self) -> i64 {
        self.prime_bound
    }

    /// Tabulated primes, in label order.
    pub fn primes(&self) -> &[PrimeIdeal] {
        &self.primes
    }

    pub fn disc(&self) -> &Ideal {
        self.order.discriminant()
    }

    /// Class set whose representatives have norms coprime to `level`.
    pub fn classes_for(&self, level: &Ideal) -> Result<Arc<IdealClassSet>> {
        let q = neighbor_prime(&self.order, level.norm());
        if let Some(c) = self.classes.lock().expect("lock").get(&q.label()) {
            return Ok(c.clone());
        }
        let set = Arc::new(IdealClassSet::compute(&self.order, level.norm())?);
        Ok(self.classes.lock().expect("lock").entry(q.label()).or_insert(set).clone())
    }

    pub fn module(&self, level: &Ideal) -> Result<BrandtModule> {
        BrandtModule::new(self.classes_for(level)?, level)
    }

    /// Every computed level, in ideal order.
    pub fn computed_levels(&self) -> Vec<Arc<LevelResult>> {
        self.levels.lock().expect("lock").values().cloned().collect()
    }

    pub fn level(&self, level: &Ideal) -> Option<Arc<LevelResult>> {
        self.levels.lock().expect("lock").get(level).cloned()
    }

    /// Tabulated primes coprime to `D·M` together with enough further good
    /// primes for the Eisenstein test.
    fn hecke_primes(&self, module: &BrandtModule) -> Vec<PrimeIdeal> {
        let f = &self.field;
        let bad = module.level().mul(f, self.disc());
        let mut out: Vec<PrimeIdeal> = self.primes.iter().filter(|p| p.ideal.is_coprime(f, &bad)).copied().collect();
        for p in module.good_primes(3) {
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    /// Atkin–Lehner operators at `p^e ∥ M` and at the primes of `D`.
    pub fn atkin_lehner_operators(&self, module: &BrandtModule) -> Result<Vec<HeckeOperator>> {
        let mut out = Vec::new();
        for (p, e) in module.level_factors()? {
            out.push(module.atkin_lehner(&p, e)?);
        }
        for (p, _) in factor_ideal(&self.field, self.disc())? {
            out.push(module.atkin_lehner_ramified(&p)?);
        }
        Ok(out)
    }

    /// Computes one level; every proper divisor must already be present.
    pub fn run_level(&self, level: &Ideal) -> Result<Arc<LevelResult>> {
        if let Some(r) = self.level(level) {
            return Ok(r);
        }
        let f = &self.field;
        if !level.is_coprime(f, self.disc()) {
            return Err(Error::Precondition(format!("level {level} is not coprime to the discriminant")));
        }
        let mut timings = StageTimings::default();
        let t = Instant::now();
        let module = self.module(level)?;
        timings.module = t.elapsed();

        let t = Instant::now();
        let hecke = module.hecke_operators(&self.hecke_primes(&module))?;
        for op in &hecke {
            if !module.is_self_adjoint(&op.matrix) {
                return Err(Error::Verification(format!("{} is not self-adjoint at level {level}", op.label)));
            }
        }
        let al = self.atkin_lehner_operators(&module)?;
        timings.operators = t.elapsed();

        let t = Instant::now();
        let split = module.eisenstein_and_cusp(&hecke)?;
        let cusp_ops: Vec<LabeledOp> = hecke
            .iter()
            .chain(&al)
            .map(|op| Ok(LabeledOp::new(op.label.clone(), split.restrict(op)?)))
            .collect::<Result<_>>()?;
        timings.split = t.elapsed();

        let t = Instant::now();
        let cusp_dim = split.cusp_dim();
        let (old_dim, new_ops) = self.old_new(level, &cusp_ops, cusp_dim)?;
        timings.old_new = t.elapsed();

        let t = Instant::now();
        let constituents = decompose(&new_ops)?;
        timings.decompose = t.elapsed();

        let result = Arc::new(LevelResult {
            level: *level,
            dim: module.dim(),
            eisenstein_dim: split.eisenstein_dim(),
            cusp_dim,
            old_dim,
            stabilizers: module.stabilizers().to_vec(),
            operators: hecke.into_iter().chain(al).collect(),
            cusp_ops,
            new_ops,
            constituents,
            timings,
        });
        self.levels.lock().expect("lock").insert(*level, result.clone());
        Ok(result)
    }

    /// Old dimension `Σ new(M')·τ(M/M')` over proper divisors, the old space
    /// as the joint kernel of their characteristic polynomials, and the
    /// operators on the quotient.
    fn old_new(&self, level: &Ideal, cusp_ops: &[LabeledOp], cusp_dim: usize) -> Result<(usize, Vec<LabeledOp>)> {
        let f = &self.field;
        let mut expected = 0;
        let mut lower: Vec<Arc<LevelResult>> = Vec::new();
        for d in ideal_divisors(f, level)? {
            if d == *level {
                continue;
            }
            let r = self.level(&d).ok_or_else(|| {
                Error::Precondition(format!("lower level {d} of {level} has not been computed"))
            })?;
            let quotient = level.div(f, &d)?;
            expected += r.new_dim() * ideal_divisors(f, &quotient)?.len();
            if r.new_dim() > 0 {
                lower.push(r);
            }
        }
        // block-diagonal lower operators for the Hecke labels of this level
        let mut lower_ops = Vec::new();
        for op in cusp_ops.iter().filter(|o| o.label.starts_with("T_")) {
            let blocks: Option<Vec<&QMat>> = lower
                .iter()
                .map(|r| r.new_ops.iter().find(|l| l.label == op.label).map(|l| &l.matrix))
                .collect();
            let Some(blocks) = blocks else { continue };
            lower_ops.push(LabeledOp::new(op.label.clone(), block_diagonal(&blocks)));
        }
        let split = old_new_split(cusp_ops, &lower_ops, cusp_dim, expected).map_err(|e| match e {
            Error::Linalg(m) => Error::Linalg(format!("level {level}: {m}")),
            other => other,
        })?;
        Ok((expected, split.new_ops))
    }

    /// Every level in the norm range coprime to `D`, with their divisors,
    /// processed in norm-increasing groups.
    pub fn run_range(&self, min_norm: i64, max_norm: i64) -> Result<Vec<Ideal>> {
        let f = &self.field;
        let targets: Vec<Ideal> =
            ideals_in_range(f, min_norm, max_norm).into_iter().filter(|n| n.is_coprime(f, self.disc())).collect();
        let mut needed = std::collections::BTreeSet::new();
        for t in &targets {
            needed.extend(ideal_divisors(f, t)?);
        }
        let mut by_norm: BTreeMap<i64, Vec<Ideal>> = BTreeMap::new();
        for n in needed {
            by_norm.entry(n.norm()).or_default().push(n);
        }
        for group in by_norm.values() {
            // class sets first so workers do not duplicate them
            for l in group {
                self.classes_for(l)?;
            }
            par::map(group, |l| self.run_level(l)).into_iter().collect::<Result<Vec<_>>>()?;
        }
        Ok(targets)
    }

    /// Records of one computed level, ordered by constituent.
    pub fn records(&self, level: &Ideal) -> Result<Vec<NewformRecord>> {
        let r = self.level(level).ok_or_else(|| Error::Precondition(format!("level {level} has not been computed")))?;
        let f = &self.field;
        let disc_primes: Vec<PrimeIdeal> = factor_ideal(f, self.disc())?.into_iter().map(|(p, _)| p).collect();
        let bad = level.mul(f, self.disc());
        let mut out = Vec::new();
        for (index, c) in r.constituents.iter().enumerate() {
            let k = c.field();
            let values: Vec<Option<Elem>> = self
                .primes
                .iter()
                .map(|p| {
                    if !p.ideal.is_coprime(f, &bad) {
                        return Ok(None);
                    }
                    let a = c
                        .eigenvalues
                        .get(&format!("T_{}", p.label()))
                        .ok_or_else(|| Error::Verification(format!("no eigenvalue at {}", p.label())))?;
                    let bound = 2.0 * (p.norm() as f64).sqrt() + 1e-9;
                    if k.embeddings(a).iter().any(|x| x.abs() > bound) {
                        return Err(Error::Verification(format!("Ramanujan bound fails at {} on level {level}", p.label())));
                    }
                    Ok(Some(a.clone()))
                })
                .collect::<Result<_>>()?;
            let mut al = Vec::new();
            for (label, a) in c.eigenvalues.iter().filter(|(l, _)| l.starts_with("W_")) {
                let sign = rational_value(a).and_then(|x| x.to_i64()).filter(|s| s.abs() == 1).ok_or_else(|| {
                    Error::Verification(format!("{label} does not act by a sign on constituent {index} of {level}"))
                })?;
                let name = label.trim_start_matches("W_").split('^').next().unwrap_or_default().to_string();
                // the ramified involution carries the opposite sign
                let ramified = disc_primes.iter().any(|p| p.label() == name);
                al.push((name, if ramified { -sign } else { sign } as i8));
            }
            let (denominator, eigenvalues) = integral_coordinates(&values);
            let mut rec = NewformRecord {
                field: f.label().to_string(),
                level: hnf_data(level),
                disc: hnf_data(self.disc()),
                index,
                // over Q the generator is irrelevant, store x
                heckefield: if c.dim() == 1 { vec![0.into(), 1.into()] } else { c.poly.coeffs().to_vec() },
                denominator,
                al,
                primes: self.primes.iter().map(PrimeIdeal::label).collect(),
                eigenvalues,
                cm: CmVerdict::Untested,
                base_change: BaseChangeVerdict::None,
                prime_bound: self.prime_bound,
            };
            rec.al.sort_by_key(|(l, _)| self.primes.iter().position(|p| p.label() == *l).unwrap_or(usize::MAX));
            rec.cm = detect_cm(f, &rec).unwrap_or(CmVerdict::Untested);
            rec.base_change = detect_base_change(f, &rec, None)?;
            out.push(rec);
        }
        Ok(out)
    }
}

fn block_diagonal(blocks: &[&QMat]) -> QMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = QMat::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        for i in 0..b.nrows() {
            for j in 0..b.nrows() {
                m.set(at + i, at + j, b.get(i, j).clone());
            }
        }
        at += b.nrows();
    }
    m
}

/// Output of a database build.
pub struct BuildOutput {
    pub records: Vec<NewformRecord>,
    pub levels: Vec<Arc<LevelResult>>,
    pub report: String,
}

pub fn build_database(config: &FieldConfig, min_norm: i64, max_norm: i64, prime_bound: i64) -> Result<BuildOutput> {
    let start = Instant::now();
    let pipe = Pipeline::new(config, prime_bound);
    let targets = pipe.run_range(min_norm, max_norm)?;
    let mut records = Vec::new();
    let mut levels = Vec::new();
    for t in &targets {
        records.extend(pipe.records(t)?);
        levels.push(pipe.level(t).expect("computed"));
    }
    records.sort_by(record_order);
    let mut report = String::new();
    let _ = writeln!(
        report,
        "field {} algebra {} disc {} norms {min_norm}..={max_norm} prime bound {prime_bound}",
        config.field.label(),
        config.algebra,
        pipe.disc()
    );
    let _ = writeln!(report, "level dim eis cusp old new constituents | module operators split old/new decompose (ms)");
    let ms = |d: Duration| d.as_millis();
    for l in &levels {
        let dims: Vec<String> = l.constituents.iter().map(|c| c.dim().to_string()).collect();
        let t = &l.timings;
        let _ = writeln!(
            report,
            "{} {} {} {} {} {} [{}] | {} {} {} {} {}",
            l.level,
            l.dim,
            l.eisenstein_dim,
            l.cusp_dim,
            l.old_dim,
            l.new_dim(),
            dims.join(","),
            ms(t.module),
            ms(t.operators),
            ms(t.split),
            ms(t.old_new),
            ms(t.decompose)
        );
    }
    let _ = writeln!(report, "levels {} records {} total {} ms", levels.len(), records.len(), ms(start.elapsed()));
    Ok(BuildOutput { records, levels, report })
}

