//! Re-verification of stored eigenvalues and the two-algebra cross-check
//! over `Q`.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::record::ideal_from_data;
use crate::analysis::NewformRecord;
use crate::arith::ideal::{is_prime, primes_up_to};
use crate::arith::{BaseField, Ideal};
use crate::brandt::BrandtModule;
use crate::db::config::FieldConfig;
use crate::db::pipeline::Pipeline;
use crate::linalg::{Elem, IntPoly, NumberField, QMat, Rat};
use crate::quat::classes::neighbor_prime;
use crate::quat::IdealClassSet;
use crate::{Error, Result};

/// Whether some nonzero `x ∈ V ⊗ E` has `T_r·x = a_r·x` for every pair.
pub fn joint_eigenvector_exists(k: &NumberField, ops: &[(QMat, Elem)]) -> bool {
    let Some((first, _)) = ops.first() else { return true };
    let (n, d) = (first.nrows(), k.degree());
    let mut rows = Vec::new();
    for (t, a) in ops {
        let m = k.mul_matrix(a);
        // (T ⊗ I − I ⊗ M) on index i·d + c
        for i in 0..n {
            for c in 0..d {
                let mut row = vec![Rat::from_integer(0.into()); n * d];
                for j in 0..n {
                    row[j * d + c] += t.get(i, j);
                }
                for l in 0..d {
                    row[i * d + l] -= m.get(c, l);
                }
                rows.push(row);
            }
        }
    }
    QMat::from_rows(rows, n * d).kernel().nrows() > 0
}

#[derive(Clone, Debug)]
pub struct SpotCheck {
    pub record: String,
    pub prime: String,
    pub passed: bool,
}

/// Recomputes `T_p` for a random stored prime of each sampled record, on a
/// module whose class representatives come from a different neighbor prime,
/// and confirms the stored eigenvalue jointly with two further stored
/// primes.
pub fn spot_check(config: &FieldConfig, records: &[NewformRecord], samples: usize, seed: u64) -> Result<Vec<SpotCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = &config.field;
    let mut out = Vec::new();
    if records.is_empty() {
        return Ok(out);
    }
    for _ in 0..samples {
        let r = records.choose(&mut rng).expect("nonempty");
        if r.field != f.label() || ideal_from_data(f, &r.disc)? != *config.order.discriminant() {
            return Err(Error::Precondition(format!("record {} does not belong to this configuration", r.label())));
        }
        let level = ideal_from_data(f, &r.level)?;
        let stored: Vec<usize> = (0..r.primes.len()).filter(|&i| !r.eigenvalues[i].is_empty()).collect();
        let Some(&pick) = stored.choose(&mut rng) else { continue };
        let mut chosen = vec![pick];
        chosen.extend(stored.iter().filter(|&&i| i != pick).take(2));
        let usual = neighbor_prime(&config.order, level.norm());
        let classes = Arc::new(IdealClassSet::compute(&config.order, level.norm() * usual.p)?);
        let module = BrandtModule::new(classes, &level)?;
        let table = primes_up_to(f, r.prime_bound);
        let k = r.hecke_field();
        let mut ops = Vec::new();
        for &i in &chosen {
            let p = table
                .iter()
                .find(|p| p.label() == r.primes[i])
                .ok_or_else(|| Error::Precondition(format!("unknown prime label {}", r.primes[i])))?;
            let t = module.hecke_operator(p)?;
            ops.push((t.to_qmat(), r.eigenvalue(&r.primes[i]).expect("stored")));
        }
        out.push(SpotCheck { record: r.label(), prime: r.primes[pick].clone(), passed: joint_eigenvector_exists(&k, &ops) });
    }
    Ok(out)
}

/// Per-constituent fingerprint: dimension and the characteristic
/// polynomial of each stored `a_r` at the compared labels.
type Fingerprint = (usize, Vec<IntPoly>);

fn fingerprint(r: &NewformRecord, labels: &[String]) -> Result<Fingerprint> {
    let k = r.hecke_field();
    let polys = labels
        .iter()
        .map(|l| {
            let a = r.eigenvalue(l).ok_or_else(|| Error::Insufficient(format!("no eigenvalue at {l}")))?;
            IntPoly::from_rat_exact(&k.charpoly(&a)?)
        })
        .collect::<Result<_>>()?;
    Ok((r.dim(), polys))
}

#[derive(Clone, Debug)]
pub struct CrosscheckReport {
    pub level: i64,
    pub p: i64,
    pub q: i64,
    /// Compared prime labels `r ∤ N`.
    pub primes: Vec<String>,
    pub via_p: Vec<Fingerprint>,
    pub via_q: Vec<Fingerprint>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.via_p == self.via_q
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "level {} via D=({}) and D=({}), primes {}", self.level, self.p, self.q, self.primes.join(","));
        let show = |fp: &Fingerprint| {
            let polys: Vec<String> = fp.1.iter().map(|p| format!("({p})")).collect();
            format!("dim {}: {}", fp.0, polys.join(" "))
        };
        for (name, side) in [(self.p, &self.via_p), (self.q, &self.via_q)] {
            let _ = writeln!(s, "D=({name}): {} doubly-new eigensystems", side.len());
            for fp in side {
                let _ = writeln!(s, "  {}", show(fp));
            }
        }
        let a: BTreeSet<&Fingerprint> = self.via_p.iter().collect();
        let b: BTreeSet<&Fingerprint> = self.via_q.iter().collect();
        for fp in a.difference(&b) {
            let _ = writeln!(s, "only via D=({}): {}", self.p, show(fp));
        }
        for fp in b.difference(&a) {
            let _ = writeln!(s, "only via D=({}): {}", self.q, show(fp));
        }
        let _ = writeln!(s, "{}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

/// Newforms of level `N` from the algebra ramified at `D`, as records.
fn new_records(d: i64, n: i64, prime_bound: i64) -> Result<Vec<NewformRecord>> {
    let cfg = FieldConfig::pizer(d)?;
    let pipe = Pipeline::new(&cfg, prime_bound);
    let m = n / d;
    pipe.run_range(m, m)?;
    pipe.records(&Ideal::rational(&cfg.field, m))
}

/// Compares the `p`-path and `q`-path eigensystems of level `N` over `Q`.
pub fn crosscheck_pnew(n: i64, p: i64, q: i64, prime_bound: i64) -> Result<CrosscheckReport> {
    if p == q {
        return Err(Error::Precondition("the two primes must differ".into()));
    }
    for r in [p, q] {
        if !is_prime(r) || n % r != 0 || (n / r) % r == 0 {
            return Err(Error::Precondition(format!("{r} must be a prime exactly dividing {n}")));
        }
    }
    let f = BaseField::rationals();
    let primes: Vec<String> = primes_up_to(&f, prime_bound).iter().filter(|r| n % r.p != 0).map(|r| r.label()).collect();
    let side = |d: i64| -> Result<Vec<Fingerprint>> {
        let mut v = new_records(d, n, prime_bound)?.iter().map(|r| fingerprint(r, &primes)).collect::<Result<Vec<_>>>()?;
        v.sort();
        Ok(v)
    };
    let via_p = side(p)?;
    let via_q = side(q)?;
    Ok(CrosscheckReport { level: n, p, q, primes, via_p, via_q })
}

