//! Human-readable and machine-readable reports for the command line tool.

use serde::Serialize;

use crate::diagram::ArrowDiagram;
use crate::homology::{h1, homology_class, manifold_h1, AbelianGroup, HImage};
use crate::presentation::{build_presentation, GroupPresentation};
use crate::twisted::{twisted_alexander, SigmaSelector, TwistedError, TwistedResult};

#[derive(Debug, Serialize)]
pub struct GroupReport {
    pub generators: Vec<String>,
    pub relators: Vec<RelatorReport>,
}

#[derive(Debug, Serialize)]
pub struct RelatorReport {
    pub family: String,
    pub word: String,
}

#[derive(Debug, Serialize)]
pub struct ImageReport {
    pub generator: String,
    pub torsion: Vec<String>,
    pub free: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct HomologyReport {
    pub structure: String,
    pub rank: usize,
    pub torsion: Vec<String>,
    pub images: Vec<ImageReport>,
}

#[derive(Debug, Serialize)]
pub struct ClassReport {
    pub component: u32,
    pub eta_a: Vec<i64>,
    pub eta_b: Vec<i64>,
    pub eta_h: i64,
    pub eta_l: Vec<i64>,
    pub ambient_torsion: Vec<String>,
    pub ambient_free: Vec<String>,
    pub trivial: bool,
}

#[derive(Debug, Serialize)]
pub struct PolynomialReport {
    pub sigma: Vec<u64>,
    pub description: String,
    pub convention: String,
    pub polynomial: String,
}

#[derive(Debug, Serialize)]
pub struct FullReport {
    pub components: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manifold_homology: Option<HomologyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alexander: Option<Vec<PolynomialReport>>,
}

fn image_strings(img: &HImage) -> (Vec<String>, Vec<String>) {
    (
        img.torsion.iter().map(|x| x.to_string()).collect(),
        img.free.iter().map(|x| x.to_string()).collect(),
    )
}

pub fn group_report(p: &GroupPresentation) -> GroupReport {
    GroupReport {
        generators: p.generators.iter().map(|g| g.to_string()).collect(),
        relators: p
            .relators
            .iter()
            .map(|r| RelatorReport { family: r.family.to_string(), word: r.word.to_string() })
            .collect(),
    }
}

pub fn homology_report(h: &AbelianGroup) -> HomologyReport {
    HomologyReport {
        structure: h.structure_string(),
        rank: h.rank,
        torsion: h.torsion.iter().map(|d| d.to_string()).collect(),
        images: h
            .images
            .iter()
            .map(|(g, img)| {
                let (torsion, free) = image_strings(img);
                ImageReport { generator: g.to_string(), torsion, free }
            })
            .collect(),
    }
}

pub fn class_reports(d: &ArrowDiagram) -> Result<Vec<ClassReport>, crate::homology::HomologyError> {
    let comp = d.components();
    let ambient = manifold_h1(&d.seifert);
    let mut out = Vec::new();
    for c in 1..=comp.nu {
        let cls = homology_class(d, c)?;
        let img = ambient.image_of_combination(&cls.combination());
        let (ambient_torsion, ambient_free) = image_strings(&img);
        out.push(ClassReport {
            component: c,
            eta_a: cls.eta_a.clone(),
            eta_b: cls.eta_b.clone(),
            eta_h: cls.eta_h,
            eta_l: cls.eta_l.clone(),
            ambient_torsion,
            ambient_free,
            trivial: img.is_zero(),
        });
    }
    Ok(out)
}

pub fn polynomial_reports(res: &TwistedResult) -> Vec<PolynomialReport> {
    res.polynomials
        .iter()
        .map(|tp| PolynomialReport {
            sigma: tp.character.exps.clone(),
            description: tp.character.describe(),
            convention: tp.convention.to_string(),
            polynomial: tp.value.to_string(),
        })
        .collect()
}

/// Which pieces of the report to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Group,
    Homology,
    Class,
    Alexander,
    All,
}

pub fn build_full_report(
    d: &ArrowDiagram,
    command: Command,
    selector: SigmaSelector,
) -> Result<FullReport, TwistedError> {
    let comp = d.components();
    let want = |c: Command| command == c || command == Command::All;
    let mut report = FullReport {
        components: comp.nu,
        group: None,
        homology: None,
        manifold_homology: None,
        classes: None,
        alexander: None,
    };
    if want(Command::Group) {
        let p = build_presentation(d)?;
        report.group = Some(group_report(&p));
    }
    if want(Command::Homology) {
        let p = build_presentation(d)?;
        report.homology = Some(homology_report(&h1(&p, &comp)));
        report.manifold_homology = Some(homology_report(&manifold_h1(&d.seifert)));
    }
    if want(Command::Class) {
        report.classes = Some(class_reports(d).map_err(|e| match e {
            crate::homology::HomologyError::Presentation(p) => TwistedError::Presentation(p),
            crate::homology::HomologyError::UnknownComponent(_) => unreachable!("components enumerated"),
        })?);
    }
    if want(Command::Alexander) {
        let res = twisted_alexander(d, selector)?;
        if report.homology.is_none() && command == Command::All {
            report.homology = Some(homology_report(&res.h1));
        }
        report.alexander = Some(polynomial_reports(&res));
    }
    Ok(report)
}

/// Deterministic plain-text rendering.
pub fn render_text(report: &FullReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("components = {}\n", report.components));
    if let Some(g) = &report.group {
        out.push_str("\n[group]\n");
        out.push_str(&format!("generators: {}\n", g.generators.join(" ")));
        for r in &g.relators {
            out.push_str(&format!("{}: {} = 1\n", r.family, r.word));
        }
    }
    if let Some(h) = &report.homology {
        out.push_str("\n[homology]\n");
        out.push_str(&format!("H1 = {}\n", h.structure));
        for img in &h.images {
            out.push_str(&format!(
                "{} -> torsion ({}) free ({})\n",
                img.generator,
                img.torsion.join(", "),
                img.free.join(", ")
            ));
        }
    }
    if let Some(h) = &report.manifold_homology {
        out.push_str("\n[manifold]\n");
        out.push_str(&format!("H1(M) = {}\n", h.structure));
    }
    if let Some(classes) = &report.classes {
        out.push_str("\n[classes]\n");
        for c in classes {
            out.push_str(&format!(
                "component {}: eta_a = {:?} eta_b = {:?} eta_h = {} eta_l = {:?}\n",
                c.component, c.eta_a, c.eta_b, c.eta_h, c.eta_l
            ));
            out.push_str(&format!(
                "class: {}\n",
                if c.trivial { "trivial".to_string() } else {
                    format!("torsion ({}) free ({})", c.ambient_torsion.join(", "), c.ambient_free.join(", "))
                }
            ));
        }
    }
    if let Some(polys) = &report.alexander {
        out.push_str("\n[alexander]\n");
        for p in polys {
            let sigma_label = if p.sigma.is_empty() {
                "1".to_string()
            } else if p.sigma.iter().all(|&e| e == 0) {
                "1".to_string()
            } else if p.sigma.len() == 1 && p.description.contains("-1") {
                "-1".to_string()
            } else {
                p.sigma.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
            };
            out.push_str(&format!("Delta[sigma={}] = {}\n", sigma_label, p.polynomial));
            out.push_str(&format!("  character: {}; convention: {}\n", p.description, p.convention));
        }
    }
    out
}

pub fn render_json(report: &FullReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}
