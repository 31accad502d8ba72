//! Run configuration, the stable serialization schema, and the parameter
//! sweep. Identical configuration and inputs produce byte-identical output.

use serde::Serialize;

use crate::audit::TableAuditRow;
use crate::certify::Certificate;
use crate::construction::family_a::{emit_params_a, validate_params_a, ParamsA};
use crate::construction::family_b::{
    emit_params_b, validate_params_b, B0Mode, CaseB, ParamsB,
};
use crate::construction::{divisors, ConstructionError, SearchConfig};
use crate::eaqec::EaqecParams;
use crate::field::FieldSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub cap_enum: u64,
    pub cap_minors: u64,
    pub format: OutputFormat,
    pub b0_mode: B0Mode,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            cap_enum: 1 << 20,
            cap_minors: 1 << 20,
            format: OutputFormat::Json,
            b0_mode: B0Mode::ZeroTrace,
        }
    }
}

impl RunConfig {
    pub fn search(&self) -> SearchConfig {
        SearchConfig {
            seed: self.seed,
            cap_enum: self.cap_enum,
            ..SearchConfig::default()
        }
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct CertificateJson {
    pub pattern_predicted: Vec<[usize; 2]>,
    pub pattern_found: Vec<[usize; 2]>,
    pub rank: usize,
    pub pattern_match: bool,
    pub largest_verified: usize,
    pub warnings: Vec<String>,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        CertificateJson {
            pattern_predicted: c.pattern_predicted.iter().map(|&(i, j)| [i, j]).collect(),
            pattern_found: c.pattern_found.iter().map(|&(i, j)| [i, j]).collect(),
            rank: c.rank,
            pattern_match: c.pattern_match,
            largest_verified: c.largest_verified,
            warnings: c.warnings.clone(),
        }
    }
}

/// One certified code, in the stable output schema.
#[derive(Serialize, Clone, Debug)]
pub struct CodeReport {
    pub q: u64,
    pub n: usize,
    pub kappa: i64,
    pub d: usize,
    pub c_computed: usize,
    pub c_claimed: usize,
    pub construction: String,
    pub inputs: serde_json::Value,
    pub certificate: CertificateJson,
    pub primitive_element: String,
    pub seed: u64,
}

impl CodeReport {
    pub fn new(params: &EaqecParams, cert: &Certificate, inputs: serde_json::Value, seed: u64) -> Self {
        CodeReport {
            q: params.q,
            n: params.n,
            kappa: params.kappa,
            d: params.d,
            c_computed: params.c,
            c_claimed: cert.c_claimed,
            construction: params.provenance.construction.to_string(),
            inputs,
            certificate: CertificateJson::from(cert),
            primitive_element: params.provenance.primitive_element.clone(),
            seed,
        }
    }

    pub fn verdict(&self) -> &'static str {
        if self.certificate.pattern_match && self.c_computed == self.c_claimed {
            "ok"
        } else if self.certificate.pattern_match {
            "c-mismatch"
        } else {
            "partial"
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }

    pub const CSV_HEADER: &'static str = "q,n,kappa,d,c_computed,c_claimed,construction,verdict";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.q,
            self.n,
            self.kappa,
            self.d,
            self.c_computed,
            self.c_claimed,
            self.construction,
            self.verdict()
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "[[{}, {}, {}; {}]]_{}  construction {}  ({})\n  inputs: {}\n  pattern predicted {:?} found {:?}  rank {}  largest verified {}\n",
            self.n,
            self.kappa,
            self.d,
            self.c_computed,
            self.q,
            self.construction,
            self.verdict(),
            self.inputs,
            self.certificate.pattern_predicted,
            self.certificate.pattern_found,
            self.certificate.rank,
            self.certificate.largest_verified,
        );
        for w in &self.certificate.warnings {
            out.push_str("  warning: ");
            out.push_str(w);
            out.push('\n');
        }
        out
    }
}

pub fn inputs_a(p: &ParamsA, d: usize) -> serde_json::Value {
    serde_json::json!({
        "q": p.q, "s": p.s, "t": p.t, "h": p.h, "r": p.r, "d": d,
    })
}

pub fn inputs_b(p: &ParamsB, k: usize, mode: B0Mode) -> serde_json::Value {
    serde_json::json!({
        "q": p.q, "s": p.s, "e": p.e, "case": p.case.to_string(), "k": k,
        "b0_mode": mode.to_string(),
    })
}

/// Audit row in the stable output schema.
#[derive(Serialize, Clone, Debug)]
pub struct AuditRowJson {
    pub table: u8,
    pub row: usize,
    pub printed: String,
    pub printed_params: PrintedParamsJson,
    pub recomputed: RecomputedJson,
    pub certificate: CertificateJson,
    pub notes: Vec<String>,
    pub exact_match: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct PrintedParamsJson {
    pub n: usize,
    pub kappa: i64,
    pub d: usize,
    pub c: usize,
}

#[derive(Serialize, Clone, Debug)]
pub struct RecomputedJson {
    pub n: usize,
    pub kappa: i64,
    pub d: usize,
    pub c: usize,
}

impl From<&TableAuditRow> for AuditRowJson {
    fn from(a: &TableAuditRow) -> Self {
        AuditRowJson {
            table: a.table,
            row: a.row,
            printed: a.printed.clone(),
            printed_params: PrintedParamsJson {
                n: a.printed_n,
                kappa: a.printed_kappa,
                d: a.printed_d,
                c: a.printed_c,
            },
            recomputed: RecomputedJson {
                n: a.recomputed.n,
                kappa: a.recomputed.kappa,
                d: a.recomputed.d,
                c: a.recomputed.c,
            },
            certificate: CertificateJson::from(&a.certificate),
            notes: a.notes.clone(),
            exact_match: a.exact_match,
        }
    }
}

impl AuditRowJson {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "table {} row {}: printed {}\n  recomputed [[{}, {}, {}; {}]]  largest verified {}  {}\n",
            self.table,
            self.row,
            self.printed,
            self.recomputed.n,
            self.recomputed.kappa,
            self.recomputed.d,
            self.recomputed.c,
            self.certificate.largest_verified,
            if self.exact_match { "EXACT MATCH" } else { "DISCREPANCIES" },
        );
        for n in &self.notes {
            out.push_str("  note: ");
            out.push_str(n);
            out.push('\n');
        }
        for w in &self.certificate.warnings {
            out.push_str("  warning: ");
            out.push_str(w);
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize, Clone, Debug, Default)]
pub struct AuditSummary {
    pub rows: usize,
    pub exact_matches: usize,
    pub partial_verifications: usize,
    pub source_inconsistencies: usize,
}

impl AuditSummary {
    pub fn absorb(&mut self, row: &TableAuditRow) {
        self.rows += 1;
        if row.exact_match {
            self.exact_matches += 1;
        } else {
            self.partial_verifications += 1;
        }
        if row
            .notes
            .iter()
            .any(|n| n.contains("disagrees with n - 2k + c"))
        {
            self.source_inconsistencies += 1;
        }
    }
}

/// Enumerates every valid parameter tuple of both families with n <= max_n,
/// runs each pipeline at its maximal distance parameter, and reports one
/// certified code per tuple in a fixed deterministic order.
pub fn sweep(q: u64, max_n: usize, cfg: &RunConfig) -> Result<Vec<CodeReport>, ConstructionError> {
    let field = FieldSpec::for_q_squared(q)?;
    let search = cfg.search();
    let mut out = Vec::new();

    for s in divisors(q + 1) {
        for t in divisors(q - 1) {
            for h in 1..=s / 2 {
                for r in 2..=t / 2 {
                    let p = ParamsA { q, s, t, h, r };
                    if p.n() > max_n || validate_params_a(&p).is_err() {
                        continue;
                    }
                    let d = p.max_d();
                    if d < 1 {
                        continue;
                    }
                    let (params, cert) = emit_params_a(&field, &p, d, &search)?;
                    out.push(CodeReport::new(&params, &cert, inputs_a(&p, d), cfg.seed));
                }
            }
        }
    }

    for case in [CaseB::Odd, CaseB::EvenLong, CaseB::EvenShort] {
        for s in 1..=(q + 1) / 2 {
            for e in 0..s {
                let p = ParamsB { q, s, e, case };
                if (q + 1) % p.modulus_m() != 0 {
                    continue;
                }
                if validate_params_b(&p).is_err() || p.n() > max_n {
                    continue;
                }
                let k = p.k_max();
                if k < 1 {
                    continue;
                }
                let (params, cert) = emit_params_b(&field, &p, k, cfg.b0_mode, &search)?;
                out.push(CodeReport::new(
                    &params,
                    &cert,
                    inputs_b(&p, k, cfg.b0_mode),
                    cfg.seed,
                ));
            }
        }
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_q13_contains_table_rows() {
        let cfg = RunConfig {
            seed: 42,
            ..RunConfig::default()
        };
        let reports = sweep(13, 200, &cfg).unwrap();
        assert!(!reports.is_empty());
        let find = |n: usize, kappa: i64, d: usize, c: usize| {
            reports
                .iter()
                .any(|r| r.n == n && r.kappa == kappa && r.d == d && r.c_computed == c)
        };
        assert!(find(121, 103, 12, 4), "missing [[121, 103, 12; 4]]");
        assert!(find(128, 114, 9, 2), "missing [[128, 114, 9; 2]]");
    }

    #[test]
    fn sweep_q13_reaches_length_140() {
        // (q-3)(q+1) = 140 at q = 13 is hit by the first family with
        // s = 14, t = 6, h = 7, r = 2.
        let cfg = RunConfig {
            seed: 42,
            ..RunConfig::default()
        };
        let reports = sweep(13, 168, &cfg).unwrap();
        assert!(reports.iter().any(|r| r.n == 140));
    }

    #[test]
    fn sweep_q5_is_small_and_deterministic() {
        let cfg = RunConfig::default();
        let a = sweep(5, 30, &cfg).unwrap();
        let b = sweep(5, 30, &cfg).unwrap();
        let lines_a: Vec<String> = a.iter().map(|r| r.to_json_line()).collect();
        let lines_b: Vec<String> = b.iter().map(|r| r.to_json_line()).collect();
        assert_eq!(lines_a, lines_b);
        assert!(a.iter().all(|r| r.n <= 30));
    }

    #[test]
    fn csv_row_shape() {
        let cfg = RunConfig::default();
        let reports = sweep(5, 30, &cfg).unwrap();
        if let Some(r) = reports.first() {
            let row = r.to_csv_row();
            assert_eq!(row.split(',').count(), 8);
        }
    }
}
