//! Named verification commands over an [`AlgebraFile`], each producing a [`Report`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bialgebra::{bicharacter_law_check, cocycle_check, twist_form, twisted_product_relations, LinearForm};
use crate::corep::{
    check_grouplike, coideal_check, factorize_theta, frt_relations, homomorphism_check, tilde_is_grouplike,
    validate_theta,
};
use crate::input::{AlgebraFile, InputError};
use crate::integrability::{check_trace_ansatz, first_integrability, second_integrability};
use crate::nc::{abcd_name, basic_resolver, parse_nc, row_space_compare, Containment, Generator, Label, NcPoly};
use crate::nc::{Family, RelationSet, Word};
use crate::qplane::{
    d_commutations, equal_modulo, gamma_table, limit_chain, master_relation_check, verify_antipode, Context,
    QPlaneError,
};
use crate::report::{Check, Report, Status};
use crate::rewrite::{RewriteSystem, TermOrder};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("substitution {name} = {value} failed: {source}")]
    Substitution {
        name: String,
        value: String,
        source: QPlaneError,
    },
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("bad expression `{text}`: {message}")]
    Expression { text: String, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    ValidateTheta,
    Ybe,
    Relations,
    CompareIdeals,
    Det,
    NormalForm,
    Confluence,
    PbwCount,
    DCommutations,
    Antipode,
    GammaTable,
    Cocycle,
    TwistR,
    Integrability,
    FullReport,
}

impl Command {
    pub const ALL: [Command; 15] = [
        Command::ValidateTheta,
        Command::Ybe,
        Command::Relations,
        Command::CompareIdeals,
        Command::Det,
        Command::NormalForm,
        Command::Confluence,
        Command::PbwCount,
        Command::DCommutations,
        Command::Antipode,
        Command::GammaTable,
        Command::Cocycle,
        Command::TwistR,
        Command::Integrability,
        Command::FullReport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::ValidateTheta => "validate-theta",
            Command::Ybe => "ybe",
            Command::Relations => "relations",
            Command::CompareIdeals => "compare-ideals",
            Command::Det => "det",
            Command::NormalForm => "normal-form",
            Command::Confluence => "confluence",
            Command::PbwCount => "pbw-count",
            Command::DCommutations => "d-commutations",
            Command::Antipode => "antipode",
            Command::GammaTable => "gamma-table",
            Command::Cocycle => "cocycle",
            Command::TwistR => "twist-r",
            Command::Integrability => "integrability",
            Command::FullReport => "full-report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, SuiteError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| SuiteError::UnknownCommand(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub substitutions: Vec<(String, Scalar)>,
    pub order: Option<TermOrder>,
    pub max_degree: usize,
    /// Expressions for `normal-form`.
    pub exprs: Vec<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            substitutions: Vec::new(),
            order: None,
            max_degree: 3,
            exprs: Vec::new(),
        }
    }
}

/// Run `command` on a parsed file. `input` names the file in the report.
pub fn run(command: Command, file: &AlgebraFile, input: &str, opts: &Options) -> Result<Report, SuiteError> {
    let mut ctx = file.context.clone();
    for (name, value) in &opts.substitutions {
        ctx = ctx.substitute(name, value).map_err(|source| SuiteError::Substitution {
            name: name.clone(),
            value: value.to_string(),
            source,
        })?;
    }
    let subs = opts.substitutions.iter().map(|(n, v)| format!("{n}={v}")).collect();
    let mut report = Report::new(command.name(), input, subs);
    let s = Session { file, ctx, opts };
    let commands: Vec<Command> = if command == Command::FullReport {
        if file.suite.is_empty() {
            Command::ALL[..Command::ALL.len() - 1].to_vec()
        } else {
            file.suite.iter().map(|c| c.parse()).collect::<Result<_, _>>()?
        }
    } else {
        vec![command]
    };
    for c in commands {
        report.extend(s.dispatch(c)?);
    }
    if command == Command::FullReport && (opts.substitutions.is_empty() || file.at_limit(&s.ctx)) {
        report.extend(s.limit_checks());
    }
    Ok(report)
}

struct Session<'a> {
    file: &'a AlgebraFile,
    ctx: Context,
    opts: &'a Options,
}

/// Converts an internal failure into a failed check.
fn failed(check: &str, relation: &str, err: impl fmt::Display) -> Vec<Check> {
    vec![Check::new(check, Status::Fail, relation).artifact("error", err.to_string())]
}

type NormalD = (NcPoly, RewriteSystem, Vec<(Generator, Option<Scalar>, NcPoly)>);

fn not_confluent(check: &str, relation: &str) -> Check {
    Check::info(check, relation).artifact("skipped", "the quadratic rewriting system is not confluent")
}

fn verdict_name(c: Containment) -> &'static str {
    match c {
        Containment::Equal => "equal",
        Containment::AinB => "first inside second",
        Containment::BinA => "second inside first",
        Containment::Incomparable => "incomparable",
    }
}

impl Session<'_> {
    fn dim(&self) -> usize {
        self.ctx.dim()
    }

    fn show(&self, p: &NcPoly) -> String {
        if self.dim() == 2 {
            p.display_with(&abcd_name)
        } else {
            p.to_string()
        }
    }

    fn show_gen(&self, g: &Generator) -> String {
        if self.dim() == 2 {
            abcd_name(g)
        } else {
            g.to_string()
        }
    }

    fn show_all(&self, ps: &[NcPoly]) -> Vec<String> {
        ps.iter().map(|p| self.show(p)).collect()
    }

    fn rule_strings(&self, rs: &RewriteSystem) -> Vec<String> {
        let mut rules: Vec<_> = rs.rules().collect();
        rules.sort_by(|a, b| rs.order().cmp_words(a.0, b.0));
        rules
            .into_iter()
            .map(|(l, r)| format!("{} -> {}", self.show(&NcPoly::word(l.clone())), self.show(r)))
            .collect()
    }

    fn order_string(&self, o: &TermOrder) -> String {
        o.precedence()
            .iter()
            .map(|g| self.show_gen(g))
            .collect::<Vec<_>>()
            .join("<")
    }

    fn tensor_entries(&self, t: &Tensor) -> Vec<Vec<String>> {
        t.nonzero_entries()
            .into_iter()
            .map(|(idx, c)| idx.iter().map(|i| i.to_string()).chain([c.to_string()]).collect())
            .collect()
    }

    fn dispatch(&self, c: Command) -> Result<Vec<Check>, SuiteError> {
        Ok(match c {
            Command::ValidateTheta => self.validate_theta(),
            Command::Ybe => self.ybe(),
            Command::Relations => self.relations()?,
            Command::CompareIdeals => self.compare_ideals(),
            Command::Det => self.det()?,
            Command::NormalForm => self.normal_form()?,
            Command::Confluence => self.confluence(),
            Command::PbwCount => self.pbw_count(),
            Command::DCommutations => self.d_commutations()?,
            Command::Antipode => self.antipode()?,
            Command::GammaTable => self.gamma_table()?,
            Command::Cocycle => self.cocycle(),
            Command::TwistR => self.twist_r()?,
            Command::Integrability => self.integrability(),
            Command::FullReport => Vec::new(),
        })
    }

    fn validate_theta(&self) -> Vec<Check> {
        let theta = self.ctx.theta.tensor();
        let v = validate_theta(theta);
        let mut out = vec![
            Check::pass_if("theta-validity", v.valid, "theta_{ij}^{kl} coassociative and counital").residuals(
                v.violations
                    .iter()
                    .map(|x| format!("{:?} at {:?}: {}", x.condition, x.index, x.residual)),
            ),
        ];
        let mut fac = Check::info("theta-factorization", "theta_{ij}^{kl} = rho_i^l rhobar_j^k");
        match factorize_theta(theta) {
            Some((rho, rhobar)) => {
                fac = fac
                    .artifact("factorized", true)
                    .artifact("rho", rows(&rho))
                    .artifact("rhobar", rows(&rhobar));
            }
            None => fac = fac.artifact("factorized", false),
        }
        out.push(fac);
        match check_grouplike(&self.ctx.m()) {
            Ok(g) => out.push(
                Check::pass_if("grouplike-M", g.holds, "Delta M = M (x) M, epsilon(M) = 1")
                    .residuals(g.coproduct_failures.iter().map(|i| format!("coproduct at {i:?}")))
                    .residuals(g.counit_failures.iter().map(|i| format!("counit at {i:?}"))),
            ),
            Err(e) => out.extend(failed("grouplike-M", "Delta M = M (x) M", e)),
        }
        match tilde_is_grouplike(theta) {
            Ok(ok) => out.push(Check::pass_if("grouplike-tilde", ok, "Delta T~ = T~ (x) T~")),
            Err(e) => out.extend(failed("grouplike-tilde", "Delta T~ = T~ (x) T~", e)),
        }
        out
    }

    fn ybe(&self) -> Vec<Check> {
        let mut out = Vec::new();
        match self.ctx.b.ybe_residual() {
            Ok(r) => out.push(
                Check::pass_if("ybe-B", r.is_zero(), "B12 B23 B12 = B23 B12 B23")
                    .residuals(self.tensor_entries(&r).iter().map(|e| e.join(" "))),
            ),
            Err(e) => out.extend(failed("ybe-B", "B12 B23 B12 = B23 B12 B23", e)),
        }
        if let Some(bp) = &self.ctx.bprime {
            let relation = "B'12 B'23 B'12 = B'23 B'12 B'23";
            match bp.ybe_residual() {
                Ok(r) => {
                    let solves = r.is_zero();
                    let status = match self.file.expect_bool(&self.ctx, "bprime_solves_ybe") {
                        Some(want) => Status::from_bool(want == solves),
                        None => Status::Info,
                    };
                    out.push(
                        Check::new("ybe-Bprime", status, relation)
                            .artifact("solves", solves)
                            .artifact("nonzero_residual_entries", r.nonzero_entries().len()),
                    );
                }
                Err(e) => out.extend(failed("ybe-Bprime", relation, e)),
            }
            if let Ok(sq) = bp.compose(bp) {
                let n = self.dim();
                let mut transposed = Tensor::zeros(n, 2, 2);
                for (idx, c) in bp.nonzero_entries() {
                    transposed.set(&[idx[2], idx[3], idx[0], idx[1]], c);
                }
                out.push(
                    Check::info("Bprime-square", "B' B' = I")
                        .artifact("involutive", sq == Tensor::identity(n, 2))
                        .artifact("idempotent", &sq == bp)
                        .artifact("symmetric", &transposed == bp),
                );
            }
        }
        out
    }

    fn expected_relations(&self, key: &str) -> Result<Option<RelationSet>, SuiteError> {
        match self.file.expect_polys(&self.ctx, key) {
            None => Ok(None),
            Some(ps) => {
                let set = RelationSet::new(Family::matrix(self.dim()), ps?).map_err(|e| SuiteError::Expression {
                    text: key.to_string(),
                    message: e.to_string(),
                })?;
                Ok(Some(set))
            }
        }
    }

    fn relations(&self) -> Result<Vec<Check>, SuiteError> {
        let relation = "I(BM - MB)";
        let rel = match self.ctx.relations() {
            Ok(r) => r,
            Err(e) => return Ok(failed("relations", relation, e)),
        };
        let basis = rel.echelon_basis();
        let mut out = vec![Check::info("relations", relation)
            .artifact("rank", rel.rank())
            .artifact("basis", self.show_all(&basis))];
        if let Some(want) = self.expected_relations("relations")? {
            let cmp = row_space_compare(&rel, &want).map_err(|e| SuiteError::Expression {
                text: "relations".into(),
                message: e.to_string(),
            })?;
            let mut c = Check::pass_if(
                "relations-expected",
                cmp.verdict == Containment::Equal,
                "span(BM - MB) = span(expected)",
            )
            .artifact("verdict", verdict_name(cmp.verdict))
            .artifact("expected_rank", want.rank());
            if cmp.verdict != Containment::Equal {
                c = c.artifact("expected_basis", self.show_all(&want.echelon_basis()));
            }
            out.push(c);
        }
        if let Some(r) = self.file.expect_usize(&self.ctx, "rank") {
            out.push(
                Check::pass_if("relations-rank", rel.rank() == r, format!("rank = {r}")).artifact("rank", rel.rank()),
            );
        }
        let m = self.ctx.m();
        match coideal_check(&self.ctx.b, &m, &m) {
            Ok(c) => out.push(
                Check::pass_if(
                    "coideal",
                    c.holds,
                    "Delta Rel = Rel (x) M + M (x) Rel, epsilon(Rel) = 0",
                )
                .residuals(c.coproduct_failures.iter().map(|i| format!("coproduct at {i:?}")))
                .residuals(c.counit_failures.iter().map(|i| format!("counit at {i:?}"))),
            ),
            Err(e) => out.extend(failed("coideal", "Delta Rel = Rel (x) M + M (x) Rel", e)),
        }
        let spaces = std::iter::once(("bosonic", &self.ctx.bosonic))
            .chain(self.ctx.grassmann.as_ref().map(|g| ("grassmann", g)));
        for (name, space) in spaces {
            let check = format!("comodule-{name}");
            match homomorphism_check(space, self.ctx.theta.tensor(), &rel) {
                Ok(h) => out.push(
                    Check::pass_if(
                        &check,
                        h.holds,
                        "delta(I(space)) lies in I(BM - MB) (x) V + H (x) I(space)",
                    )
                    .residuals(h.residuals.iter().map(|r| self.show(r))),
                ),
                Err(e) => out.extend(failed(&check, "delta(I(space)) inside the ideal", e)),
            }
        }
        Ok(out)
    }

    fn compare_ideals(&self) -> Vec<Check> {
        let mut out = Vec::new();
        let rel = match self.ctx.relations() {
            Ok(r) => r,
            Err(e) => return failed("ideal-vs-frt", "span(BM - MB) vs span(BTT - TTB)", e),
        };
        match frt_relations(&self.ctx.b).and_then(|f| Ok(row_space_compare(&rel, &f)?)) {
            Ok(cmp) => out.push(
                Check::info("ideal-vs-frt", "span(BM - MB) vs span(BTT - TTB)")
                    .artifact("verdict", verdict_name(cmp.verdict))
                    .artifact("ranks", [cmp.rank_a, cmp.rank_b]),
            ),
            Err(e) => out.extend(failed("ideal-vs-frt", "span(BM - MB) vs span(BTT - TTB)", e)),
        }
        if let Some(bp) = &self.ctx.bprime {
            match master_relation_check(&self.ctx.b, bp, &self.ctx.m()) {
                Ok(m) => {
                    out.push(
                        Check::pass_if(
                            "bprime-ideal",
                            m.bprime_vs_b.verdict == Containment::Equal,
                            "span(B'M - MB') = span(BM - MB)",
                        )
                        .artifact("verdict", verdict_name(m.bprime_vs_b.verdict)),
                    );
                    out.push(
                        Check::pass_if(
                            "master-one-sided",
                            m.one_sided_vs_bprime.verdict == Containment::AinB,
                            "span((I - B')M(I + B')) inside span(B'M - MB')",
                        )
                        .artifact("verdict", verdict_name(m.one_sided_vs_bprime.verdict))
                        .artifact("ranks", [m.one_sided_vs_bprime.rank_a, m.one_sided_vs_bprime.rank_b]),
                    );
                    out.push(
                        Check::pass_if(
                            "master-two-sided",
                            m.two_sided_vs_bprime.verdict == Containment::Equal,
                            "span((I - B')M(I + B'), (I + B')M(I - B')) = span(B'M - MB')",
                        )
                        .artifact("verdict", verdict_name(m.two_sided_vs_bprime.verdict)),
                    );
                }
                Err(e) => out.extend(failed("bprime-ideal", "span(B'M - MB') = span(BM - MB)", e)),
            }
        }
        out
    }

    fn grassmann_swap(&self) -> Option<Scalar> {
        let g = self.ctx.grassmann.as_ref()?;
        let span = g.span();
        let w = |a, b| NcPoly::word(Word::new(vec![Generator::xi(a), Generator::xi(b)]));
        let normal = g.normal_words();
        let top = normal.first()?;
        let x = span.reduce(&w(2, 1)).coefficient(top);
        let y = span.reduce(&w(1, 2)).coefficient(top);
        x.checked_div(&y).ok()
    }

    fn det(&self) -> Result<Vec<Check>, SuiteError> {
        let relation = "delta(xi_1 xi_2) = D (x) xi_1 xi_2";
        let d = match self.ctx.determinant() {
            Ok(d) => d,
            Err(e) => return Ok(failed("determinant", relation, e)),
        };
        let mut out = vec![Check::new("determinant", Status::Pass, relation).artifact("D", self.show(&d))];
        if let Some(kappa) = self.grassmann_swap() {
            let m = self.ctx.m();
            let form = m.get(1, 2, 1, 2).add(&m.get(1, 2, 2, 1).scale(&kappa));
            out.push(
                Check::pass_if(
                    "determinant-m-form",
                    form == d,
                    format!("D = M_12^12 + ({kappa}) M_12^21"),
                )
                .residuals((!(form == d)).then(|| self.show(&form.sub(&d)))),
            );
        }
        if let Some(want) = self.file.expect_single_poly(&self.ctx, "det") {
            let want = want?;
            let rel = self.ctx.relations().ok();
            let exact = want == d;
            let modulo = exact || rel.as_ref().is_some_and(|r| equal_modulo(&d, &want, r));
            out.push(
                Check::pass_if("determinant-expected", modulo, "D = expected in H = k<T>/I(BM - MB)")
                    .artifact("expected", self.show(&want))
                    .artifact("equal_in_free_algebra", exact)
                    .residuals((!modulo).then(|| self.show(&d.sub(&want)))),
            );
        }
        Ok(out)
    }

    fn rewrite_system(&self) -> Result<RewriteSystem, QPlaneError> {
        self.ctx.rewrite_system(self.opts.order.clone())
    }

    fn parse_expr(&self, text: &str) -> Result<NcPoly, SuiteError> {
        let p = parse_nc(text, &self.ctx.params, &basic_resolver(self.dim())).map_err(|e| SuiteError::Expression {
            text: text.to_string(),
            message: e.to_string(),
        })?;
        self.ctx.specialize_poly(&p).map_err(|e| SuiteError::Expression {
            text: text.to_string(),
            message: e.to_string(),
        })
    }

    fn normal_form(&self) -> Result<Vec<Check>, SuiteError> {
        let rs = match self.rewrite_system() {
            Ok(rs) => rs,
            Err(e) => return Ok(failed("rewrite-rules", "rules oriented from BM - MB", e)),
        };
        let mut out = vec![Check::info("rewrite-rules", "rules oriented from BM - MB")
            .artifact("order", self.order_string(rs.order()))
            .artifact("rules", self.rule_strings(&rs))];
        for text in &self.opts.exprs {
            let x = self.parse_expr(text)?;
            out.push(
                Check::info("normal-form", format!("nf({text})"))
                    .artifact("input", self.show(&x))
                    .artifact("normal_form", self.show(&rs.normal_form(&x))),
            );
        }
        if let Some(want) = self.expected_relations("relations")? {
            let left: Vec<NcPoly> = want
                .relations()
                .iter()
                .map(|r| rs.normal_form(r))
                .filter(|r| !r.is_zero())
                .collect();
            out.push(
                Check::pass_if(
                    "expected-relations-reduce",
                    left.is_empty(),
                    "nf(expected relation) = 0",
                )
                .residuals(self.show_all(&left)),
            );
        }
        Ok(out)
    }

    fn confluence(&self) -> Vec<Check> {
        let relation = format!("all overlaps up to degree {} resolve", self.opts.max_degree);
        let rs = match self.rewrite_system() {
            Ok(rs) => rs,
            Err(e) => return failed("confluence", &relation, e),
        };
        let rep = rs.confluence_check(self.opts.max_degree);
        vec![Check::pass_if("confluence", rep.confluent, relation)
            .residuals(
                rep.ambiguities
                    .iter()
                    .map(|a| format!("{}: {}", a.word, self.show(&a.difference))),
            )
            .artifact("order", self.order_string(rs.order()))
            .artifact("rules", self.rule_strings(&rs))
            .artifact("overlaps_checked", rep.overlaps_checked)]
    }

    fn pbw_count(&self) -> Vec<Check> {
        let n2 = (self.dim() * self.dim()) as u64;
        let relation = format!("irreducible words of degree d = C(d + {}, {})", n2 - 1, n2 - 1);
        let rs = match self.rewrite_system() {
            Ok(rs) => rs,
            Err(e) => return failed("pbw-count", &relation, e),
        };
        let counts: Vec<u64> = (0..=self.opts.max_degree).map(|d| rs.count_irreducible(d)).collect();
        let commutative: Vec<u64> = (0..=self.opts.max_degree as u64)
            .map(|d| binomial(d + n2 - 1, n2 - 1))
            .collect();
        vec![Check::pass_if("pbw-count", counts == commutative, relation)
            .artifact("counts", &counts)
            .artifact("commutative", &commutative)]
    }

    /// `D`, the confluent system it lives in, and its commutation factors when every
    /// generator commutes with `D` up to a scalar.
    /// `Ok(None)` when the rewriting system is not confluent, so normal forms are not canonical.
    fn normal_d(&self) -> Result<Option<NormalD>, String> {
        let d = self.ctx.determinant().map_err(|e| e.to_string())?;
        let rs = self.rewrite_system().map_err(|e| e.to_string())?;
        if !rs.confluence_check(3).confluent {
            return Ok(None);
        }
        let gens: Vec<Generator> = rs.order().precedence().to_vec();
        let cs = d_commutations(&rs, &d, &gens)
            .into_iter()
            .zip(gens)
            .map(|(c, g)| (g, c.factor, c.residual))
            .collect();
        Ok(Some((d, rs, cs)))
    }

    fn d_commutations(&self) -> Result<Vec<Check>, SuiteError> {
        if self.dim() != 2 {
            return Ok(vec![
                Check::info("d-commutations", "D g = c g D").artifact("skipped", "needs dimension 2")
            ]);
        }
        let (_, _, cs) = match self.normal_d() {
            Ok(Some(x)) => x,
            Ok(None) => return Ok(vec![not_confluent("d-commutations", "D g = c g D")]),
            Err(e) => return Ok(failed("d-commutations", "D g = c g D", e)),
        };
        let want = self.file.expect_factors(&self.ctx, "d_commutations").transpose()?;
        let mut out = Vec::new();
        for (g, factor, residual) in cs {
            let name = self.show_gen(&g);
            let check = format!("d-commutation-{name}");
            let normal = residual.is_zero() && factor.is_some();
            let expected = want.as_ref().and_then(|w| w.get(&name));
            let status = match expected {
                Some(c) => Status::from_bool(normal && factor.as_ref() == Some(c)),
                None if normal => Status::Pass,
                None => Status::Info,
            };
            let shown = factor.as_ref().map(|c| c.to_string()).unwrap_or_else(|| "none".into());
            let mut c = Check::new(&check, status, format!("D {name} = ({shown}) {name} D"))
                .artifact("factor", factor.as_ref().map(|c| c.to_string()));
            if let Some(e) = expected {
                c = c.artifact("expected", e.to_string());
            }
            if !residual.is_zero() {
                c = c.residual(self.show(&residual)).artifact("normal", false);
            }
            out.push(c);
        }
        Ok(out)
    }

    fn antipode(&self) -> Result<Vec<Check>, SuiteError> {
        let relation = "S(T_i^k) T_k^j = delta_i^j = T_i^k S(T_k^j)";
        if self.dim() != 2 {
            return Ok(vec![
                Check::info("antipode", relation).artifact("skipped", "needs dimension 2")
            ]);
        }
        let Some(images) = &self.file.antipode else {
            return Ok(vec![
                Check::info("antipode", relation).artifact("skipped", "no [antipode] section")
            ]);
        };
        let (d, rs, cs) = match self.normal_d() {
            Ok(Some(x)) => x,
            Ok(None) => return Ok(vec![not_confluent("antipode", relation)]),
            Err(e) => return Ok(failed("antipode", relation, e)),
        };
        if cs.iter().any(|(_, f, r)| f.is_none() || !r.is_zero()) {
            return Ok(vec![Check::info("antipode", relation).artifact(
                "skipped",
                "D does not commute with every generator up to a scalar",
            )]);
        }
        let comm: Vec<(Generator, Scalar)> = cs.into_iter().map(|(g, f, _)| (g, f.unwrap())).collect();
        let ext = match rs.extend_with_determinant(&d, &comm) {
            Ok(e) => e,
            Err(e) => return Ok(failed("antipode", relation, e)),
        };
        let mut s = BTreeMap::new();
        for (g, p) in images {
            let p = self.ctx.specialize_poly(p).map_err(|e| SuiteError::Expression {
                text: format!("antipode of {}", self.show_gen(g)),
                message: e.to_string(),
            })?;
            s.insert(*g, p);
        }
        let rep = verify_antipode(&ext, &s, 2);
        let images: BTreeMap<String, String> = s.iter().map(|(g, p)| (self.show_gen(g), self.show(p))).collect();
        Ok(vec![
            Check::pass_if("antipode", rep.holds, relation)
                .residuals(
                    rep.identities
                        .iter()
                        .filter(|i| !i.residual.is_zero())
                        .map(|i| format!("{}: {}", i.identity, self.show(&i.residual))),
                )
                .artifact("images", images)
                .artifact("extended_rules", self.rule_strings(&ext)),
            Check::pass_if(
                "antipode-counit",
                rep.counit_compatible,
                "epsilon(S(T_i^j)) = delta_i^j",
            ),
        ])
    }

    fn gamma_table(&self) -> Result<Vec<Check>, SuiteError> {
        let table = gamma_table(&self.ctx.theta);
        let fmt_factor = |f: &Option<Scalar>| f.as_ref().map(|c| c.to_string());
        let rows: Vec<BTreeMap<&str, Option<String>>> = table
            .iter()
            .map(|r| {
                BTreeMap::from([
                    ("generator", Some(r.generator.clone())),
                    ("image", Some(self.show(&r.image))),
                    ("factor", fmt_factor(&r.factor)),
                    ("tilde_image", Some(self.show(&r.tilde_image))),
                    ("tilde_factor", fmt_factor(&r.tilde_factor)),
                ])
            })
            .collect();
        let mut out = vec![Check::info("gamma-table", "gamma(e_i (x) X) = X~ (x) e_i").artifact("rows", rows)];
        let names: Vec<String> = table
            .iter()
            .map(|r| {
                if self.dim() == 2 {
                    r.generator.clone()
                } else {
                    String::new()
                }
            })
            .collect();
        for (key, tilde) in [("gamma", false), ("gamma_tilde", true)] {
            let Some(want) = self.file.expect_factors(&self.ctx, key).transpose()? else {
                continue;
            };
            for (row, name) in table.iter().zip(&names) {
                let Some(c) = want.get(name) else { continue };
                let (got, what) = if tilde {
                    (
                        &row.tilde_factor,
                        format!("gamma(e_i (x) {name}~) = ({c}) {name}~ (x) e_i"),
                    )
                } else {
                    (&row.factor, format!("gamma(e_i (x) {name}) = ({c}) {name} (x) e_i"))
                };
                let check = if tilde {
                    format!("gamma-{name}~")
                } else {
                    format!("gamma-{name}")
                };
                out.push(Check::pass_if(&check, got.as_ref() == Some(c), what).artifact("factor", fmt_factor(got)));
            }
        }
        if let Some(want) = self.file.expect_poly_matrix(&self.ctx, "tilde_matrix").transpose()? {
            let n = self.dim();
            let mut bad = Vec::new();
            for i in 1..=n {
                for j in 1..=n {
                    let got = self.ctx.theta.tilde(i, j, None);
                    match want.get(i - 1).and_then(|r| r.get(j - 1)) {
                        Some(w) if *w == got => {}
                        Some(w) => bad.push(format!(
                            "T~[{i},{j}] = {} but expected {}",
                            self.show(&got),
                            self.show(w)
                        )),
                        None => bad.push(format!("T~[{i},{j}] missing from expectation")),
                    }
                }
            }
            out.push(Check::pass_if("tilde-matrix", bad.is_empty(), "T~_i^j = theta_{im}^{jn} T_n^m").residuals(bad));
        }
        Ok(out)
    }

    fn phi(&self) -> Option<LinearForm> {
        let rho = match self.ctx.theta.rho() {
            Some(r) => r.clone(),
            None => factorize_theta(self.ctx.theta.tensor())?.0,
        };
        Some(LinearForm::from_rho(&rho))
    }

    fn cocycle(&self) -> Vec<Check> {
        let relation = "phi12 * phi(m (x) id) = phi23 * phi(id (x) m)";
        let Some(phi) = self.phi() else {
            return vec![Check::info("cocycle", relation).artifact("skipped", "theta has no rho factorization")];
        };
        match cocycle_check(&phi) {
            Ok(c) => vec![Check::pass_if("cocycle", c.holds, relation)
                .residuals(c.residuals.iter().map(|(i, r)| format!("{i:?}: {r}")))],
            Err(e) => failed("cocycle", relation, e),
        }
    }

    fn twist_r(&self) -> Result<Vec<Check>, SuiteError> {
        let mut out = Vec::new();
        let relation = "R^phi = phibar21 * R * phi solves R12 R13 R23 = R23 R13 R12";
        match (LinearForm::from_braid(&self.ctx.b), self.phi()) {
            (Ok(r), Some(phi)) => match twist_form(&r, &phi).and_then(|f| Ok((f.generator_table()?, f))) {
                Ok((table, form)) => {
                    let solves = table.qybe_residual().map(|x| x.is_zero()).unwrap_or(false);
                    let status = match self.file.expect_bool(&self.ctx, "twist_qybe") {
                        Some(want) => Status::from_bool(want == solves),
                        None => Status::Info,
                    };
                    out.push(
                        Check::new("twist-qybe", status, relation)
                            .artifact("solves", solves)
                            .artifact("R_phi", self.tensor_entries(&table)),
                    );
                    match bicharacter_law_check(&form) {
                        Ok(b) => out.push(
                            Check::info("twist-bicharacter", "R^phi agrees with its bicharacter extension")
                                .artifact("pairs_checked", b.pairs_checked)
                                .artifact("mismatches", b.mismatches.len()),
                        ),
                        Err(e) => out.push(
                            Check::info("twist-bicharacter", "bicharacter laws").artifact("error", e.to_string()),
                        ),
                    }
                }
                Err(e) => out.extend(failed("twist-qybe", relation, e)),
            },
            (Err(e), _) => out.extend(failed("twist-qybe", relation, e)),
            (_, None) => {
                out.push(Check::info("twist-qybe", relation).artifact("skipped", "theta has no rho factorization"))
            }
        }
        let relation = "span(m_theta^op - R * m_theta * Rbar) = span(BM - MB)";
        match (
            twisted_product_relations(&self.ctx.b, self.ctx.theta.tensor()),
            self.ctx.relations(),
        ) {
            (Ok(tw), Ok(rel)) => match row_space_compare(&tw, &rel) {
                Ok(cmp) => out.push(
                    Check::pass_if("twisted-product", cmp.verdict == Containment::Equal, relation)
                        .artifact("verdict", verdict_name(cmp.verdict)),
                ),
                Err(e) => out.extend(failed("twisted-product", relation, e)),
            },
            (Err(e), _) => out.extend(failed("twisted-product", relation, e)),
            (_, Err(e)) => out.extend(failed("twisted-product", relation, e)),
        }
        Ok(out)
    }

    fn integrability(&self) -> Vec<Check> {
        let (lam, mu) = match self.ctx.labels.as_slice() {
            [a, b] => (*a, *b),
            _ => (Label::new("lam"), Label::new("mu")),
        };
        let mut out = Vec::new();
        let ansatz = check_trace_ansatz(&self.ctx.theta);
        out.push(Check::pass_if("trace-ansatz", ansatz, "theta_{mj}^{mk} = delta_j^k"));
        let first_rel =
            format!("sum (B^-1)_{{kl}}^{{ij}} Rel_{{ij}}^{{kl}} = trT({lam}) trT({mu}) - trT({mu}) trT({lam})");
        if ansatz {
            match first_integrability(&self.ctx.b, &self.ctx.theta, lam, mu) {
                Ok(f) => {
                    out.push(
                        Check::pass_if("first-integrability", f.identity_holds, first_rel)
                            .artifact("commutator", f.commutator.to_string())
                            .residuals((!f.identity_holds).then(|| f.contraction.sub(&f.commutator).to_string())),
                    );
                    out.push(Check::pass_if(
                        "trace-commutator-in-span",
                        f.in_span,
                        format!("trT({lam}) trT({mu}) - trT({mu}) trT({lam}) in span(Rel)"),
                    ));
                    out.push(Check::pass_if(
                        "spectral-coideal",
                        f.coideal_holds,
                        format!("Delta Rel = Rel (x) M({lam},{mu}) + M({mu},{lam}) (x) Rel"),
                    ));
                }
                Err(e) => out.extend(failed("first-integrability", &first_rel, e)),
            }
        }
        let second_rel = "B (w (x) 1) = (w (x) 1) B implies weighted traces commute";
        match second_integrability(&self.ctx.b, &self.ctx.theta, lam, mu) {
            Ok(s) => {
                let status = match (s.weight_is_identity, s.identity_holds) {
                    (true, _) => Status::Info,
                    (false, Some(ok)) => Status::from_bool(ok),
                    (false, None) => Status::Info,
                };
                out.push(
                    Check::new("second-integrability", status, second_rel)
                        .artifact(
                            "weight",
                            s.weight
                                .iter()
                                .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                                .collect::<Vec<_>>(),
                        )
                        .artifact("weight_is_identity", s.weight_is_identity)
                        .artifact("commutation_holds", s.commutation_holds)
                        .artifact("identity_holds", s.identity_holds),
                );
            }
            Err(e) => out.extend(failed("second-integrability", second_rel, e)),
        }
        out
    }

    fn limit_checks(&self) -> Vec<Check> {
        let Some(limit) = &self.file.limit else {
            return Vec::new();
        };
        let steps = limit
            .steps
            .iter()
            .map(|(n, v)| format!("{n}={v}"))
            .collect::<Vec<_>>()
            .join(" then ");
        let outcome = match limit_chain(&self.file.context, &limit.steps) {
            Ok(o) => o,
            Err(e) => return failed("limit-chain", &steps, e),
        };
        let mut out = vec![Check::pass_if(
            "limit-coherence",
            outcome.coherent,
            format!("relations({steps}) = relations specialized entrywise"),
        )];
        if let Some(want) = self.file.expect_bool(&outcome.limit, "reverse_fails") {
            let failed_rev = outcome.reversed_error.is_some();
            out.push(
                Check::pass_if(
                    "limit-reverse-order",
                    want == failed_rev,
                    "the reversed substitution order is rejected",
                )
                .artifact("error", outcome.reversed_error.as_ref().map(|e| e.to_string())),
            );
        }
        let at = Session {
            file: self.file,
            ctx: outcome.limit.clone(),
            opts: self.opts,
        };
        let n = self.dim();
        if let Some(Ok(want)) = self.file.expect_matrix(&outcome.limit, "theta", n * n) {
            let got = outcome.limit.theta.tensor();
            let want = Tensor::from_matrix(n, 2, 2, &crate::linalg::Matrix::from_rows(want));
            out.push(
                Check::pass_if("limit-theta", got == &want, "theta at the limit")
                    .artifact("theta", at.tensor_entries(got)),
            );
        }
        if let Some(Ok(want)) = self.file.expect_matrix(&outcome.limit, "rho", n) {
            let want = Tensor::from_rows(want);
            let got = outcome.limit.theta.rho();
            out.push(
                Check::pass_if("limit-rho", got == Some(&want), "rho at the limit").artifact("rho", got.map(rows)),
            );
        }
        if let Ok(Some(want)) = at.expected_relations("relations") {
            if let Ok(rel) = outcome.limit.relations() {
                if let Ok(cmp) = row_space_compare(&rel, &want) {
                    out.push(
                        Check::pass_if(
                            "limit-relations",
                            cmp.verdict == Containment::Equal,
                            "span(BM - MB) at the limit = span(expected)",
                        )
                        .artifact("basis", at.show_all(&rel.echelon_basis())),
                    );
                }
            }
        }
        out
    }
}

fn rows(t: &Tensor) -> Vec<Vec<String>> {
    let n = t.dim();
    (1..=n)
        .map(|i| (1..=n).map(|j| t.get(&[i, j]).to_string()).collect())
        .collect()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
