use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use qcob_core::abelian::{determinant, to_int_matrix};
use qcob_core::dfun::{certify_metabolizer, check_setting, compatibility_profile, PropositionCertificate};
use qcob_core::exact::gcd_u64;
use qcob_core::linking::{diagonal_form, linking_from_presentation, quadratic_refinement, rho_surgery, LinkingForm};
use qcob_core::metab::{enumerate_metabolizers, k_profile};
use qcob_core::obstruct::{
    check_independence, check_knot_family, check_knot_main, check_surgery_infinite_order, check_theorem_main,
    connected_sum, validate_d_axioms, KnotRecord, ManifoldDescriptor,
};

use crate::cli::{Cli, Command, Format, FormArgs, MainArgs};
use crate::formats::{self, DescriptorFile, FamilyFile, FormFile, KnotFile, DESCRIPTOR_KEYS};
use crate::report::*;

/// Largest group whose refinement is listed in full.
const REFINEMENT_LISTING_LIMIT: u64 = 729;

/// Run one command; returns the exit status and the rendered report.
pub fn run(cli: &Cli) -> Result<(Status, String)> {
    let format = cli.format;
    match &cli.command {
        Command::RhoSurgery { n } => emit(Status::Conclusive, &rho_table(*n)?, format),
        Command::AnalyzePresentation { file } => emit(Status::Conclusive, &presentation(file)?, format),
        Command::EnumerateMetabolizers { form } => {
            let (form, _) = load_form(form, cli.seed)?;
            emit(Status::Conclusive, &metabolizers(&form)?, format)
        }
        Command::VerifyProposition { form } => {
            let r = proposition(form, cli.seed)?;
            emit(Status::from_bool(r.holds), &r, format)
        }
        Command::CheckSurgery { n } => {
            let r = VerdictReport::from(&check_surgery_infinite_order(*n)?);
            emit(Status::from_bool(r.conclusion != "inconclusive"), &r, format)
        }
        Command::CheckIndependence { file, main } => {
            let family: FamilyFile = formats::parse_str(&formats::read(file)?, &file.display().to_string())?;
            let r = independence(&family.descriptors()?, main)?;
            emit(independence_status(&r), &r, format)
        }
        Command::CheckKnots { file, main } => {
            let knots: KnotFile = formats::parse_str(&formats::read(file)?, &file.display().to_string())?;
            let records = knots.knots.iter().map(|k| k.to_record()).collect::<Result<Vec<_>>>()?;
            let r = knot_family(&records, main)?;
            emit(independence_status(&r), &r, format)
        }
        Command::ValidateDtable { file, n } => {
            let reports = dtables(file, *n)?;
            emit(Status::from_bool(reports.iter().all(|r| r.valid)), &reports, format)
        }
    }
}

fn emit<R: Serialize + Render>(status: Status, report: &R, format: Format) -> Result<(Status, String)> {
    let out = match format {
        Format::Text => report.text(),
        // through Value, whose maps are sorted
        Format::Json => serde_json::to_string_pretty(&serde_json::to_value(report)?)? + "\n",
    };
    Ok((status, out))
}

fn independence_status(r: &IndependenceReport) -> Status {
    match &r.main {
        Some(m) => Status::from_bool(m.conclusion != "inconclusive"),
        None => Status::from_bool(r.independent),
    }
}

fn rho_table(n: i64) -> Result<RhoSurgeryReport> {
    let rho = rho_surgery(n)?;
    let g = rho.group();
    let mut values: Vec<RhoEntry> = rho
        .table()
        .into_iter()
        .map(|(x, v)| Ok(RhoEntry { x: g.cyclic_label(&x)?, rho: v.to_string() }))
        .collect::<Result<_>>()?;
    values.sort_by_key(|e| e.x);
    Ok(RhoSurgeryReport { n, group: g.triples(), rho0: rho.rho0().to_string(), values })
}

fn presentation(file: &Path) -> Result<PresentationReport> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct MatrixFile {
        matrix: Vec<Vec<i64>>,
    }
    let m: MatrixFile = formats::parse_str(&formats::read(file)?, &file.display().to_string())?;
    ensure!(m.matrix.iter().all(|r| r.len() == m.matrix.len()), "matrix must be square");
    let a = to_int_matrix(&m.matrix);
    let pres = linking_from_presentation(&a)?;
    let g = pres.group();
    let refinement = if g.is_odd_order() && g.order() <= REFINEMENT_LISTING_LIMIT.into() {
        let q = quadratic_refinement(pres.form())?;
        Some(g.elements().map(|x| RefinementEntry { q: q.value(&x).to_string(), x: x.label() }).collect())
    } else {
        None
    };
    Ok(PresentationReport {
        determinant: determinant(&a).to_string(),
        group: g.triples(),
        invariant_factors: g.invariant_factors(),
        gram: gram_strings(pres.form()),
        square_order: qcob_core::obstruct::square_order_test(g),
        refinement,
        matrix: m.matrix,
    })
}

fn gram_strings(form: &LinkingForm) -> Vec<Vec<String>> {
    form.gram().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

/// Form from `--file`, or from `--form` with `--p` and `--n`. Also returns the
/// diagonal units when known.
fn load_form(args: &FormArgs, seed: u64) -> Result<(LinkingForm, Vec<i64>)> {
    if let Some(file) = &args.file {
        let f: FormFile = formats::parse_str(&formats::read(file)?, &file.display().to_string())?;
        let units = match &f {
            FormFile::Diagonal { units, .. } => units.clone(),
            _ => Vec::new(),
        };
        return Ok((f.to_form()?, units));
    }
    let spec = args.form.as_deref().ok_or_else(|| anyhow!("give --form or --file"))?;
    let (p, n) = match (args.p, args.n) {
        (Some(p), Some(n)) => (p, n),
        _ => bail!("--form needs --p and --n"),
    };
    let units = form_units(spec, p, n, args.m, seed)?;
    Ok((diagonal_form(p, n, &units)?, units))
}

/// Units of a diagonal form spec.
pub fn form_units(spec: &str, p: u64, n: u32, m: Option<u32>, seed: u64) -> Result<Vec<i64>> {
    let bad = || anyhow!("bad form {spec:?}: expected sum<k>-unit<u>, diag:<u1>,<u2>,... or random");
    if spec == "random" {
        let m = m.ok_or_else(|| anyhow!("--form random needs --m"))?;
        let modulus = p.checked_pow(n).ok_or_else(|| anyhow!("{p}^{n} does not fit in 64 bits"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((0..2 * m)
            .map(|_| loop {
                let u = rng.gen_range(1..modulus);
                if gcd_u64(u, p) == 1 {
                    break u as i64;
                }
            })
            .collect());
    }
    if let Some(list) = spec.strip_prefix("diag:") {
        return list.split(',').map(|u| u.trim().parse::<i64>().map_err(|_| bad())).collect();
    }
    let (k, u) = spec.strip_prefix("sum").and_then(|r| r.split_once("-unit")).ok_or_else(bad)?;
    let k: usize = k.parse().map_err(|_| bad())?;
    let u: i64 = u.parse().map_err(|_| bad())?;
    Ok(vec![u; k])
}

fn metabolizers(form: &LinkingForm) -> Result<MetabolizerReport> {
    let search = enumerate_metabolizers(form)?;
    let homogeneous = form.group().homogeneous_type().is_some();
    Ok(MetabolizerReport {
        group: form.group().triples(),
        candidates: search.candidates,
        square_obstruction: search.square_obstruction.map(|o| o.to_string()),
        metabolizers: search
            .metabolizers
            .iter()
            .map(|m| MetabolizerEntry {
                generators: m.subgroup().generators().iter().map(|g| g.label()).collect(),
                invariants: m.subgroup().isomorphism_type().invariant_factors(),
                k_profile: if homogeneous { k_profile(m).ok().map(|k| k.counts) } else { None },
            })
            .collect(),
    })
}

fn proposition(args: &FormArgs, seed: u64) -> Result<PropositionReport> {
    let (form, units) = load_form(args, seed)?;
    let (Some(p), Some(n)) = (args.p, args.n) else { bail!("verify-proposition needs --p and --n") };
    let copies = check_setting(p, n, &form)?;
    if let Some(m) = args.m {
        ensure!(copies == 2 * m as usize, "--m {m} does not match a form with {copies} summands");
    }
    let search = enumerate_metabolizers(&form)?;
    let compatible = compatibility_profile(&form)?;
    let metabolizers =
        search.metabolizers.par_iter().map(|m| certify_metabolizer(p, n, m, compatible.as_deref())).collect();
    let cert = PropositionCertificate { p, n, copies, candidates: search.candidates, metabolizers };
    Ok(PropositionReport::new(&cert, units))
}

fn independence(family: &[ManifoldDescriptor], main: &MainArgs) -> Result<IndependenceReport> {
    let cert = check_independence(family);
    let verdict = match (main.p, main.n, main.m) {
        (Some(p), Some(n), Some(m)) => {
            let (y, rest) = family.split_first().ok_or_else(|| anyhow!("the family is empty"))?;
            Some(check_theorem_main(y, &connected_sum(rest), m, p, n))
        }
        _ => None,
    };
    Ok(IndependenceReport::new(&cert, verdict.as_ref()))
}

fn knot_family(knots: &[KnotRecord], main: &MainArgs) -> Result<IndependenceReport> {
    let cert = check_knot_family(knots)?;
    let verdict = match (main.p, main.n, main.m) {
        (Some(p), Some(n), Some(m)) => {
            let k = knots.first().ok_or_else(|| anyhow!("no knots given"))?;
            let unknot = KnotRecord::from_determinant("unknot", 1, true);
            Some(check_knot_main(k, knots.get(1).unwrap_or(&unknot), m, p, n)?)
        }
        _ => None,
    };
    Ok(IndependenceReport::new(&cert, verdict.as_ref()))
}

/// A d-table file holds a family, one descriptor, or a bare table for
/// `n`-surgery (or `S^3`).
fn dtables(file: &Path, n: Option<i64>) -> Result<Vec<DTableReport>> {
    let text = formats::read(file)?;
    let origin = file.display().to_string();
    let value: Value = formats::parse_str(&text, &origin)?;
    let object = value.as_object().ok_or_else(|| anyhow!("{origin}: expected a JSON object"))?;
    let family: Vec<ManifoldDescriptor> = if object.contains_key("manifolds") {
        let family = formats::parse_str::<FamilyFile>(&text, &origin)?.descriptors()?;
        // members without a table are listed, not rejected
        return family
            .par_iter()
            .map(|y| match y.d_table() {
                Some(_) => Ok(DTableReport::new(y.name(), &validate_d_axioms(y)?)),
                None => Ok(DTableReport {
                    name: y.name().into(),
                    valid: true,
                    violations: Vec::new(),
                    skipped: vec!["no d-table".into()],
                }),
            })
            .collect();
    } else if !object.is_empty() && object.keys().all(|k| DESCRIPTOR_KEYS.contains(&k.as_str())) {
        vec![formats::parse_str::<DescriptorFile>(&text, &origin)?.to_descriptor("Y")?]
    } else {
        let table: std::collections::BTreeMap<String, String> = formats::parse_str(&text, &origin)?;
        let y = match n {
            Some(n) => ManifoldDescriptor::surgery(format!("S^3_{n}(U)"), n)?,
            None => ManifoldDescriptor::sphere(),
        };
        let t = formats::d_table(y.h1(), &table).with_context(|| format!("{origin}: d-table"))?;
        vec![y.with_d_table(t)?]
    };
    family
        .par_iter()
        .map(|y| Ok(DTableReport::new(y.name(), &validate_d_axioms(y)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_specs() {
        assert_eq!(form_units("sum4-unit1", 3, 1, None, 0).unwrap(), vec![1; 4]);
        assert_eq!(form_units("diag:1,26", 3, 3, None, 0).unwrap(), vec![1, 26]);
        assert!(form_units("sum4", 3, 1, None, 0).is_err());
        assert!(form_units("random", 3, 1, None, 0).is_err());
        let a = form_units("random", 7, 1, Some(2), 11).unwrap();
        assert_eq!(a, form_units("random", 7, 1, Some(2), 11).unwrap());
        assert_eq!(a.len(), 4);
        assert!(a.iter().all(|&u| u % 7 != 0 && (1..7).contains(&u)));
    }

    #[test]
    fn rho_tables() {
        let r = rho_table(5).unwrap();
        assert_eq!(r.rho0, "1");
        assert_eq!(r.values.len(), 5);
        assert_eq!(r.values.iter().map(|e| e.x).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        assert!(rho_table(0).is_err());
    }
}
