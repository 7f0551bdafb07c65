use anyhow::{bail, Context};
use padyn::conjugacy::drift_bound;
use padyn::context::InvarianceEvidence;
use padyn::symbolic::{decode, decode_disk, itinerary, julia_point, QuadraticCoding};
use padyn::text::{parse_disk, parse_number, parse_polynomial, parse_radius, parse_region};
use padyn::{
    find_repelling_fixed_point, newton_profile, unique_root_in_disk, ConjugacyProblem, Error,
    ExpansionContext, ItineraryWord, PadicNumber, PadicPolynomial, Radius, Region,
    UnicriticalConjugacy,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigFile, RunConfig};
use crate::report::{Field, Record};
use crate::{Command, MapArgs, RegionArgs};

const DEFAULT_TARGET: i64 = -10;
const DEFAULT_DEPTH: usize = 10;

struct Inputs<'a> {
    rc: &'a RunConfig,
    file: &'a ConfigFile,
}

impl Inputs<'_> {
    fn poly(&self, flag: &Option<String>, key: &str) -> anyhow::Result<PadicPolynomial> {
        let s = self.file.require(flag, key)?;
        parse_polynomial(&s, self.rc.prime, self.rc.precision).with_context(|| format!("--{key}"))
    }

    /// The map and its source text.
    fn map(&self, m: &MapArgs) -> anyhow::Result<(PadicPolynomial, String)> {
        Ok((self.poly(&m.f, "f")?, self.file.require(&m.f, "f")?))
    }

    fn number(&self, flag: &Option<String>, key: &str) -> anyhow::Result<PadicNumber> {
        let s = self.file.require(flag, key)?;
        parse_number(&s, self.rc.prime, self.rc.precision).with_context(|| format!("--{key}"))
    }

    fn disk(&self, flag: &Option<String>, key: &str) -> anyhow::Result<padyn::Disk> {
        let s = self.file.require(flag, key)?;
        parse_disk(&s, self.rc.prime, self.rc.precision).with_context(|| format!("--{key}"))
    }

    fn region(&self, r: &RegionArgs) -> anyhow::Result<Region> {
        let s = self.file.require(&r.region, "region")?;
        parse_region(&s, self.rc.prime, self.rc.precision).context("--region")
    }

    fn target(&self, flag: &Option<String>) -> anyhow::Result<Radius> {
        match self.file.pick(flag, "target") {
            Some(s) => Ok(parse_radius(&s).context("--target")?),
            None => Ok(Radius::from_int_log(DEFAULT_TARGET)),
        }
    }

    fn count(&self, flag: &Option<String>, key: &str, default: usize) -> anyhow::Result<usize> {
        match self.file.pick(flag, key) {
            Some(s) => s
                .trim()
                .parse()
                .with_context(|| format!("--{key} must be a non-negative integer")),
            None => Ok(default),
        }
    }

    fn word(&self, flag: &Option<String>) -> anyhow::Result<Option<ItineraryWord>> {
        match self.file.pick(flag, "word") {
            Some(s) => Ok(Some(s.parse().context("--word")?)),
            None => Ok(None),
        }
    }
}

pub fn dispatch(cmd: &Command, rc: &RunConfig, file: &ConfigFile) -> anyhow::Result<Vec<Record>> {
    let inp = Inputs { rc, file };
    match cmd {
        Command::Eval { map, z } => {
            let (f, text) = inp.map(map)?;
            let z = inp.number(z, "z")?;
            let v = f.evaluate(&z);
            Ok(vec![Record::new("eval")
                .with("f", text)
                .with("z", z)
                .with("norm_bound", v.norm_bound())
                .with("vanishing", v.is_zero_at_precision())
                .with("value", v)])
        }
        Command::NewtonCount { map, disk } => {
            let (f, text) = inp.map(map)?;
            let disk = inp.disk(disk, "disk")?;
            let prof = newton_profile(&f, &disk)?;
            let mut out = vec![Record::new("newton_count")
                .with("f", text)
                .with("disk", disk)
                .with("count", prof.count)
                .with("open_count", prof.open_count)
                .with("max", prof.max)];
            for t in prof.terms {
                out.push(
                    Record::new("term")
                        .with("index", t.index)
                        .with("value", t.value)
                        .with("exact", t.exact),
                );
            }
            Ok(out)
        }
        Command::RootInDisk { map, disk } => {
            let (f, text) = inp.map(map)?;
            let disk = inp.disk(disk, "disk")?;
            let root = unique_root_in_disk(&f, &disk)?;
            let residual = f.evaluate(&root).norm_bound();
            Ok(vec![Record::new("root")
                .with("f", text)
                .with("disk", disk)
                .with("residual", residual)
                .with("root", root)])
        }
        Command::Preimages {
            map,
            region,
            target,
        } => {
            let ctx = ExpansionContext::certify(&inp.map(map)?.0, &inp.region(region)?)?;
            let target = inp.disk(target, "target")?;
            let pre = ctx.preimage_disks(&target)?;
            let mut out = vec![Record::new("preimages")
                .with("target", target)
                .with("mu", ctx.mu())
                .with("count", pre.len())];
            for (k, d) in pre.into_iter().enumerate() {
                out.push(
                    Record::new("preimage")
                        .with("index", k)
                        .with("center", d.center)
                        .with("radius", d.radius)
                        .with("derivative_norm", d.derivative_norm)
                        .with(
                            "member",
                            d.member.map_or(Field::Text("none".into()), Field::from),
                        ),
                );
            }
            Ok(out)
        }
        Command::Certify { map, region } => {
            let (f, text) = inp.map(map)?;
            let ctx = ExpansionContext::certify(&f, &inp.region(region)?)?;
            Ok(certificate_records(&ctx, text))
        }
        Command::Tau { map, region, g } => tau(&inp, map, region, g),
        Command::Conjugate {
            map,
            g,
            region,
            z,
            target,
            route,
        } => {
            let ctx = ExpansionContext::certify(&inp.map(map)?.0, &inp.region(region)?)?;
            let g = inp.poly(g, "g")?;
            let route = file.pick(route, "route").unwrap_or_else(|| "drift".into());
            let problem = match route.as_str() {
                "drift" => ConjugacyProblem::from_drift(&ctx, &g)?,
                "strict" => ConjugacyProblem::neighborhood_check(&ctx, &g)?,
                other => bail!("--route must be drift or strict, got {other}"),
            };
            let z = inp.number(z, "z")?;
            let target = inp.target(target)?;
            let trace = problem.trace(&z, target)?;
            let residual = problem.semiconjugacy_residual(&z, target)?;
            let mut out = vec![Record::new("conjugacy")
                .with("route", route)
                .with("z", z)
                .with("target", target)
                .with("drift", problem.drift())
                .with("lambda", problem.lambda())
                .with("mu", ctx.mu())
                .with("depth", trace.depth)
                .with("certified_error", trace.certified_error)
                .with("semiconjugacy_residual", residual)
                .with("value", trace.value.clone())];
            for k in 0..trace.depth {
                out.push(
                    Record::new("step")
                        .with("k", k)
                        .with("orbit", trace.forward_orbit[k].clone())
                        .with("correction", trace.corrections[k])
                        .with("bound", trace.correction_bounds[k]),
                );
            }
            Ok(out)
        }
        Command::Thm23 {
            d,
            c,
            c2,
            z,
            target,
        } => {
            let d = inp.count(d, "d", 2)?;
            let c = inp.number(c, "c")?;
            let c2 = inp.number(c2, "c2")?;
            let target = inp.target(target)?;
            let uc = UnicriticalConjugacy::new(d, &c, &c2)?;
            let pr = &uc.problem;
            let head = Record::new("thm23")
                .with("d", d)
                .with("c", c)
                .with("c2", c2)
                .with("sphere_radius", uc.sphere_radius)
                .with("lambda", pr.lambda())
                .with("mu", pr.ctx().mu())
                .with("drift", pr.drift())
                .with("target", target);
            match file.pick(z, "z") {
                Some(_) => {
                    let z = inp.number(z, "z")?;
                    let t = uc.trace(&z, target)?;
                    let residual = pr.semiconjugacy_residual(&z, target)?;
                    Ok(vec![head
                        .with("z", z)
                        .with("depth", t.depth)
                        .with("certified_error", t.certified_error)
                        .with("semiconjugacy_residual", residual)
                        .with("value", t.value)])
                }
                None => {
                    let w = find_repelling_fixed_point(pr.f(), pr.ctx().region())?;
                    let (h, residual) = pr.transport_fixed_point(&w, target)?;
                    if residual > target {
                        return Err(Error::Violation {
                            inequality: "|g(h(w)) - h(w)| <= target".into(),
                            lhs: residual,
                            rhs: target,
                        }
                        .into());
                    }
                    Ok(vec![head
                        .with("fixed_point", w)
                        .with("fixed_point_residual", residual)
                        .with("value", h)])
                }
            }
        }
        Command::Itinerary { z, depth } => {
            let z = inp.number(z, "z")?;
            let n = inp.count(depth, "depth", DEFAULT_DEPTH)?;
            let word = itinerary(&z, n)?;
            Ok(vec![Record::new("itinerary")
                .with("z", z)
                .with("depth", n)
                .with("word", word)])
        }
        Command::Decode { word } => {
            let word = inp
                .word(word)?
                .context("missing input --word (flag or config entry)")?;
            let disks = if word.is_empty() {
                match decode(&word, rc.prime)? {
                    Region::UnionOfDisks { disks } => disks,
                    Region::Sphere { .. } => unreachable!("branch disks"),
                }
            } else {
                vec![decode_disk(&word, rc.prime)?]
            };
            let mut out = vec![Record::new("decode")
                .with("word", word)
                .with("disks", disks.len())];
            for d in disks {
                out.push(
                    Record::new("disk")
                        .with("center", d.center().clone())
                        .with("radius", d.radius()),
                );
            }
            Ok(out)
        }
        Command::Cor42 { c, depth, z, word } => cor42(&inp, c, depth, z, word),
    }
}

fn certificate_records(ctx: &ExpansionContext, map: String) -> Vec<Record> {
    let cert = ctx.certificate();
    let mut out = vec![Record::new("certificate")
        .with("map", map)
        .with("region", cert.region.clone())
        .with("lambda", cert.lambda)
        .with("delta", cert.delta)
        .with("mu", cert.mu)
        .with("big_m", cert.big_m)
        .with(
            "derivative_norms",
            Field::List(
                cert.derivative_norms
                    .iter()
                    .map(|r| Field::Radius(*r))
                    .collect(),
            ),
        )];
    for ev in &cert.invariance {
        out.push(match ev {
            InvarianceEvidence::Preimages { target, preimages } => Record::new("invariance")
                .with("kind", "preimages")
                .with("target", target.clone())
                .with(
                    "preimages",
                    Field::List(preimages.iter().map(|d| Field::Disk(d.disk())).collect()),
                ),
            InvarianceEvidence::Counts { target, counts } => Record::new("invariance")
                .with("kind", "counts")
                .with("target", target.clone())
                .with(
                    "counts",
                    Field::List(counts.iter().map(|&n| Field::from(n)).collect()),
                ),
            InvarianceEvidence::Sphere {
                radius,
                constant_term,
                leading_term,
            } => Record::new("invariance")
                .with("kind", "sphere")
                .with("radius", *radius)
                .with("constant_term", *constant_term)
                .with("leading_term", *leading_term),
        });
    }
    out
}

fn tau(
    inp: &Inputs,
    map: &MapArgs,
    region: &RegionArgs,
    g: &Option<String>,
) -> anyhow::Result<Vec<Record>> {
    let ctx = ExpansionContext::certify(&inp.map(map)?.0, &inp.region(region)?)?;
    let mut out = vec![Record::new("thresholds")
        .with("mu", ctx.mu())
        .with("lambda", ctx.lambda())
        .with("big_m", ctx.big_m())
        .with("tau_min", ctx.tau_min())];
    for i in 0..=ctx.degree() {
        out.push(Record::new("tau").with("i", i).with("tau", ctx.tau(i)));
    }
    if inp.file.pick(g, "g").is_some() {
        let text = inp.file.require(g, "g")?;
        let g = inp.poly(g, "g")?;
        ctx.verify_s_membership(&g)?;
        let (strict, index) = match ConjugacyProblem::neighborhood_check(&ctx, &g) {
            Ok(_) => (true, Field::Text("none".into())),
            Err(Error::CoefficientBound { index, .. }) => (false, Field::from(index)),
            Err(e) => return Err(e.into()),
        };
        let drift = drift_bound(&ctx, &g);
        out.push(
            Record::new("perturbation")
                .with("g", text)
                .with("in_s", true)
                .with("strict", strict)
                .with("failing_index", index)
                .with("drift", drift)
                .with("drift_ok", drift <= ctx.mu()),
        );
    }
    Ok(out)
}

fn cor42(
    inp: &Inputs,
    c: &Option<String>,
    depth: &Option<String>,
    z: &Option<String>,
    word: &Option<String>,
) -> anyhow::Result<Vec<Record>> {
    let c = inp.number(c, "c")?;
    let n = inp.count(depth, "depth", DEFAULT_DEPTH)?;
    if n == 0 {
        bail!("--depth must be positive");
    }
    let coding = QuadraticCoding::new(&c)?;
    let (z, source) = match inp.file.pick(z, "z") {
        Some(_) => (inp.number(z, "z")?, None),
        None => {
            let w = match inp.word(word)? {
                Some(w) if w.len() < n => bail!("--word needs at least {n} symbols"),
                Some(w) => w,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(inp.rc.seed);
                    ItineraryWord::new((0..n + 4).map(|_| rng.gen_range(0..2u8)).collect())?
                }
            };
            let y = julia_point(&w, inp.rc.prime)?;
            let back = coding.problem().reversed()?;
            let z = back.conjugate_point(&y, Radius::from_int_log(-(w.len() as i64)))?;
            (z, Some(w))
        }
    };
    let code = coding.word(&z, n, Radius::ONE)?;
    let next = coding.word(&coding.map().evaluate(&z), n - 1, Radius::ONE)?;
    let equivariant = next == code.shift()?;
    if !equivariant {
        bail!("equivariance self-check failed: {next} vs shift of {code}");
    }
    let mut r = Record::new("cor42")
        .with("c", c)
        .with("depth", n)
        .with("z", z);
    if let Some(w) = source {
        r = r
            .with("decoded_from", w.clone())
            .with("matches_source", code == w.prefix(n));
    }
    Ok(vec![r.with("equivariant", equivariant).with("word", code)])
}

/// The error as a record, with exponent fields for violated inequalities.
pub fn failure_record(err: &anyhow::Error, mathematical: bool) -> Record {
    let mut r = Record::new("failure")
        .with("mathematical", mathematical)
        .with("message", format!("{err:#}"));
    let mut inner = err.downcast_ref::<Error>();
    while let Some(Error::NotInS(e)) = inner {
        inner = Some(e);
    }
    match inner {
        Some(Error::Violation {
            inequality,
            lhs,
            rhs,
        }) => {
            r = r
                .with("inequality", inequality.clone())
                .with("lhs", *lhs)
                .with("rhs", *rhs);
        }
        Some(Error::CoefficientBound { index, diff, tau }) => {
            r = r.with("index", *index).with("lhs", *diff).with("rhs", *tau);
        }
        _ => {}
    }
    r
}
