//! The analysis record behind `leftq analyze`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::commutator::{self, AbelianReport};
use crate::congruence::{self, CongruenceLattice, Partition};
use crate::error::Result;
use crate::galois::{self, Groups};
use crate::maltsev::{self, MaltsevReport, MaltsevStatus};
use crate::perm::GroupReport;
use crate::table::{LeftQuasigroup, PropertyReport};

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceSummary {
    pub count: usize,
    pub distributive: bool,
    pub list: Vec<Partition>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisSummary {
    pub pool_size: usize,
    pub checks: usize,
    pub holds: bool,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub properties: PropertyReport,
    pub cayley_kernel: Partition,
    pub lmlt: GroupReport,
    pub dis: GroupReport,
    pub semiregular: bool,
    pub sigma: Partition,
    pub congruences: CongruenceSummary,
    pub galois: GaloisSummary,
    pub commutator: AbelianReport,
    pub maltsev: MaltsevReport,
}

impl Analysis {
    pub fn budget_exhausted(&self) -> bool {
        self.maltsev.maltsev == MaltsevStatus::Unknown
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let p = &self.properties;
        let c = &self.commutator;
        let m = &self.maltsev;
        let mut out = String::new();
        let mut line = |k: &str, v: String| writeln!(out, "{k:<16} {v}").unwrap();
        line("order", self.order.to_string());
        for (k, v) in [
            ("idempotent", p.idempotent),
            ("projection", p.projection),
            ("rack", p.rack),
            ("quandle", p.quandle),
            ("latin", p.latin),
            ("faithful", p.faithful),
            ("superfaithful", p.superfaithful),
            ("fix-property", p.fix_property),
            ("semiregular", self.semiregular),
        ] {
            line(k, v.to_string());
        }
        line("cayley-kernel", format!("[{}]", self.cayley_kernel));
        line("sigma", format!("[{}]", self.sigma));
        line("|LMlt|", self.lmlt.order.to_string());
        line("|Dis|", self.dis.order.to_string());
        line("congruences", format!("{} (distributive: {})", self.congruences.count, self.congruences.distributive));
        for a in &self.congruences.list {
            line("", format!("[{a}]"));
        }
        line("galois", format!("{} checks, holds: {}", self.galois.checks, self.galois.holds));
        line("abelian", c.abelian.to_string());
        line("center", format!("[{}]", c.center_blocks));
        line("nilpotent", opt_len(c.nilpotent, c.nilpotency_length));
        line("solvable", opt_len(c.solvable, c.solvable_length));
        line("connected", m.connected.to_string());
        line("superconnected", m.superconnected.to_string());
        line("maltsev", m.maltsev.name().to_string());
        if let Some(e) = m.equivalence_holds {
            line("nilpotent-latin", format!("equivalence holds: {e}"));
        }
        out
    }
}

fn opt_len(flag: bool, len: Option<usize>) -> String {
    match (flag, len) {
        (true, Some(k)) => format!("true (length {k})"),
        _ => flag.to_string(),
    }
}

pub fn analyze(q: &LeftQuasigroup, budget: usize) -> Result<Analysis> {
    let groups = Groups::new(q)?;
    let lattice = CongruenceLattice::build(q, congruence::DEFAULT_LATTICE_CAP)?;
    let galois = galois::galois_verify_with(&groups, &lattice)?;
    Ok(Analysis {
        order: q.order(),
        table: q.rows(),
        properties: q.classify(),
        cayley_kernel: galois::cayley_kernel(q),
        lmlt: groups.lmlt().report(),
        dis: groups.dis().report(),
        semiregular: groups.dis().is_semiregular(),
        sigma: groups.sigma_q()?,
        congruences: CongruenceSummary {
            count: lattice.len(),
            distributive: lattice.is_distributive(),
            list: lattice.congruences().to_vec(),
        },
        galois: GaloisSummary {
            pool_size: galois.pool_size,
            checks: galois.checks,
            holds: galois.holds(),
            violations: galois.violations.clone(),
        },
        commutator: commutator::classify_abelianness_with(q, &lattice)?,
        maltsev: maltsev::maltsev_report(q, budget)?,
    })
}
