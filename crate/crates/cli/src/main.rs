//! `nilp`: exact computation in nilpotent groups from the shell.
//!
//! Exit status 0 means the answer was computed (and is positive for decision
//! commands), 1 a negative answer, 2 bad input.

mod input;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use input::{element, elements, load_finite, load_group, load_hom, show, CliResult, Repr};
use nilpotent::finite::WordWitness;
use nilpotent::{
    check_consistency, compress_presentation, express_in_input_generators, free_nilpotent, from_finite_presentation,
    kernel_and_image, membership, parse_named_word, preimage, reduce_to_full_form, subgroup_presentation,
    ConjugacySolver, ConsistencyReport, Error, Homomorphism,
};

#[derive(Parser)]
#[command(name = "nilp", version, about = "Exact computation in finitely generated nilpotent groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupArgs {
    /// Nilpotent presentation file.
    #[arg(long, short)]
    group: PathBuf,
    /// Read elements as coordinate tuples `(c1, ..., cm)`.
    #[arg(long, conflicts_with = "slp")]
    coords: bool,
    /// Read elements as paths to straight-line program files.
    #[arg(long)]
    slp: bool,
}

impl GroupArgs {
    fn repr(&self) -> Repr {
        if self.coords {
            Repr::Coords
        } else if self.slp {
            Repr::Slp
        } else {
            Repr::Word
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of an element: coordinates, then the normal-form word.
    Nf {
        #[command(flatten)]
        g: GroupArgs,
        element: String,
    },
    /// Product of the given elements.
    Mul {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(required = true)]
        elements: Vec<String>,
    },
    /// `x^n` for a signed integer `n`.
    Pow {
        #[command(flatten)]
        g: GroupArgs,
        element: String,
        #[arg(allow_hyphen_values = true)]
        exponent: BigInt,
    },
    /// Check that the presentation is consistent.
    Consistency {
        #[arg(long, short)]
        group: PathBuf,
    },
    /// Presentation of the free nilpotent group of given class and rank.
    FreeNilpotent {
        #[arg(short, long)]
        class: u32,
        #[arg(short, long)]
        rank: usize,
    },
    /// Nilpotent presentation of the class-c quotient of a finite presentation.
    FromPresentation {
        #[arg(short, long)]
        class: u32,
        presentation: PathBuf,
    },
    /// Full form of the subgroup generated by the elements.
    Fullform {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(required = true)]
        generators: Vec<String>,
    },
    /// Subgroup membership: `member --group G --sub x y -- h`.
    Member {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, num_args = 1.., required = true)]
        sub: Vec<String>,
        /// Print a word in the given generators instead of the full-form exponents.
        #[arg(long)]
        express: bool,
        #[arg(last = true, required = true)]
        element: String,
    },
    /// Consistent nilpotent presentation of a subgroup.
    Subpres {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(required = true)]
        generators: Vec<String>,
    },
    /// Rewrite a finite presentation with relators of length at most 3.
    CompressPres { presentation: PathBuf },
    /// Full form of the kernel of a homomorphism file.
    Kernel {
        #[arg(long)]
        hom: PathBuf,
    },
    /// Full form of the image of a homomorphism file.
    Image {
        #[arg(long)]
        hom: PathBuf,
    },
    /// Some element mapping to the given target element.
    Preimage {
        #[arg(long)]
        hom: PathBuf,
        #[arg(long, conflicts_with = "slp")]
        coords: bool,
        #[arg(long)]
        slp: bool,
        element: String,
    },
    /// Check a homomorphism file on the relators of its domain subgroup.
    HomCheck {
        #[arg(long)]
        hom: PathBuf,
    },
    /// Full form of the centralizer of an element.
    Centralizer {
        #[command(flatten)]
        g: GroupArgs,
        element: String,
    },
    /// Decide whether `u^-1 g u = h` has a solution and print one.
    Conjugate {
        #[command(flatten)]
        g: GroupArgs,
        first: String,
        second: String,
    },
    /// Decide whether a word is trivial in the class-c quotient and, if so,
    /// write it as a product of conjugates of relators.
    WitnessWord {
        #[arg(short, long)]
        class: u32,
        presentation: PathBuf,
        word: String,
        /// Largest conjugator length to print before giving up.
        #[arg(long, default_value_t = 1_000_000)]
        limit: usize,
    },
}

/// Output text and whether the answer was positive.
struct Answer {
    text: String,
    positive: bool,
}

impl Answer {
    fn yes(text: impl Into<String>) -> Self {
        Answer {
            text: text.into(),
            positive: true,
        }
    }

    fn no(text: impl Into<String>) -> Self {
        Answer {
            text: text.into(),
            positive: false,
        }
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn run(cmd: Command) -> CliResult<Answer> {
    match cmd {
        Command::Nf { g, element: e } => {
            let grp = load_group(&g.group)?;
            let x = element(&grp, &e, g.repr())?;
            Ok(Answer::yes(format!("{x}\n{}", show(&grp, &x))))
        }
        Command::Mul { g, elements: es } => {
            let grp = load_group(&g.group)?;
            let xs = elements(&grp, &es, g.repr())?;
            Ok(Answer::yes(grp.product(&xs).to_string()))
        }
        Command::Pow { g, element: e, exponent } => {
            let grp = load_group(&g.group)?;
            let x = element(&grp, &e, g.repr())?;
            Ok(Answer::yes(grp.power(&x, &exponent).to_string()))
        }
        Command::Consistency { group } => {
            let grp = load_group(&group)?;
            match check_consistency(grp.presentation()) {
                ConsistencyReport::Consistent => Ok(Answer::yes("consistent")),
                ConsistencyReport::Inconsistent { witness, overlap } => Ok(Answer::no(format!(
                    "inconsistent\noverlap {overlap}\nwitness {witness} = {}",
                    show(&grp, &witness)
                ))),
            }
        }
        Command::FreeNilpotent { class, rank } => {
            let (p, basis) = free_nilpotent(class, rank).map_err(err)?;
            let mut out = String::new();
            for i in 0..basis.len() {
                writeln!(out, "# a{} = {}", i + 1, basis.describe(i)).unwrap();
            }
            out.push_str(&p.to_text());
            Ok(Answer::yes(out.trim_end()))
        }
        Command::FromPresentation { class, presentation } => {
            let fp = load_finite(&presentation)?;
            let q = from_finite_presentation(&fp, class).map_err(err)?;
            let mut out = String::new();
            for (k, (name, x)) in fp.generators.iter().zip(q.generator_images()).enumerate() {
                writeln!(out, "# {name} -> {} (generator {})", show(&q.group, &x), k + 1).unwrap();
            }
            out.push_str(&q.group.presentation().to_text());
            Ok(Answer::yes(out.trim_end()))
        }
        Command::Fullform { g, generators } => {
            let grp = load_group(&g.group)?;
            let xs = elements(&grp, &generators, g.repr())?;
            let form = reduce_to_full_form(&grp, &xs).map_err(err)?;
            Ok(Answer::yes(form.to_text().trim_end()))
        }
        Command::Member {
            g,
            sub,
            express,
            element: e,
        } => {
            let grp = load_group(&g.group)?;
            let gens = elements(&grp, &sub, g.repr())?;
            let h = element(&grp, &e, g.repr())?;
            if express {
                return match express_in_input_generators(&grp, &gens, &h) {
                    Ok(expr) => {
                        let w = expr.to_word(10_000_000).map_err(err)?;
                        let names: Vec<String> = (1..=gens.len()).map(|k| format!("g{k}")).collect();
                        Ok(Answer::yes(format!("YES {}", w.display_with(&names))))
                    }
                    Err(Error::NotMember) => Ok(Answer::no("NO")),
                    Err(e) => Err(err(e)),
                };
            }
            let form = reduce_to_full_form(&grp, &gens).map_err(err)?;
            match membership(&grp, &form, &h).map_err(err)? {
                Some(gamma) => {
                    let parts: Vec<_> = form.rows().iter().zip(&gamma).map(|(r, e)| grp.power(r, e)).collect();
                    if grp.product(&parts) != h {
                        return Err("internal error: membership witness does not verify".into());
                    }
                    let gamma: Vec<String> = gamma.iter().map(ToString::to_string).collect();
                    Ok(Answer::yes(format!("YES ({})", gamma.join(", "))))
                }
                None => Ok(Answer::no("NO")),
            }
        }
        Command::Subpres { g, generators } => {
            let grp = load_group(&g.group)?;
            let xs = elements(&grp, &generators, g.repr())?;
            let sp = subgroup_presentation(&grp, &xs).map_err(err)?;
            let mut out = String::new();
            for (k, row) in sp.basis.rows().iter().enumerate() {
                writeln!(out, "# a{} = {row}", k + 1).unwrap();
            }
            out.push_str(&sp.presentation.to_text());
            Ok(Answer::yes(out.trim_end()))
        }
        Command::CompressPres { presentation } => {
            let fp = load_finite(&presentation)?;
            let cp = compress_presentation(&fp).map_err(err)?;
            Ok(Answer::yes(cp.presentation.to_text().trim_end()))
        }
        Command::Kernel { hom } => {
            let h = load_hom(&hom)?;
            let phi = Homomorphism::new(&h.source, &h.target, &h.domain, &h.images).map_err(err)?;
            let ki = kernel_and_image(&phi).map_err(err)?;
            Ok(Answer::yes(ki.kernel.to_text().trim_end()))
        }
        Command::Image { hom } => {
            let h = load_hom(&hom)?;
            let phi = Homomorphism::new(&h.source, &h.target, &h.domain, &h.images).map_err(err)?;
            let ki = kernel_and_image(&phi).map_err(err)?;
            Ok(Answer::yes(ki.image.to_text().trim_end()))
        }
        Command::Preimage {
            hom,
            coords,
            slp,
            element: e,
        } => {
            let h = load_hom(&hom)?;
            let repr = GroupArgs {
                group: PathBuf::new(),
                coords,
                slp,
            }
            .repr();
            let target = element(&h.target, &e, repr)?;
            let phi = Homomorphism::new(&h.source, &h.target, &h.domain, &h.images).map_err(err)?;
            let ki = kernel_and_image(&phi).map_err(err)?;
            match preimage(&phi, &ki, &target) {
                Ok(x) => Ok(Answer::yes(format!("YES {x}"))),
                Err(Error::NotInImage) => Ok(Answer::no("NO")),
                Err(e) => Err(err(e)),
            }
        }
        Command::HomCheck { hom } => {
            // Send the subgroup basis through the map, check the relators of
            // the subgroup presentation, then check the induced map agrees
            // with the given images.
            let h = load_hom(&hom)?;
            let phi = Homomorphism::new(&h.source, &h.target, &h.domain, &h.images).map_err(err)?;
            let sp = subgroup_presentation(&h.source, &h.domain).map_err(err)?;
            let basis_images = sp.basis.rows().iter().map(|b| phi.apply(b)).collect::<Result<Vec<_>, _>>().map_err(err)?;
            let induced = |exps: &mut dyn Iterator<Item = (usize, &BigInt)>| {
                let parts: Vec<_> = exps.map(|(k, e)| h.target.power(&basis_images[k], e)).collect();
                h.target.product(&parts)
            };
            for rel in sp.presentation.relators() {
                if !induced(&mut rel.letters().iter().map(|l| (l.generator, &l.exponent))).is_identity() {
                    return Ok(Answer::no(format!("not well-defined: relator {rel} of the domain maps to a nontrivial element")));
                }
            }
            for (k, (d, img)) in h.domain.iter().zip(&h.images).enumerate() {
                let gamma = membership(&h.source, &sp.basis, d).map_err(err)?.ok_or("internal error: generator not in its subgroup")?;
                if &induced(&mut gamma.iter().enumerate()) != img {
                    return Ok(Answer::no(format!("not well-defined: the image of map line {} is inconsistent", k + 1)));
                }
            }
            Ok(Answer::yes("well-defined"))
        }
        Command::Centralizer { g, element: e } => {
            let grp = load_group(&g.group)?;
            let x = element(&grp, &e, g.repr())?;
            let c = ConjugacySolver::new(&grp).centralizer(&x).map_err(err)?;
            Ok(Answer::yes(c.to_text().trim_end()))
        }
        Command::Conjugate { g, first, second } => {
            let grp = load_group(&g.group)?;
            let x = element(&grp, &first, g.repr())?;
            let y = element(&grp, &second, g.repr())?;
            match ConjugacySolver::new(&grp).conjugate(&x, &y).map_err(err)? {
                Some(u) => Ok(Answer::yes(format!("YES u = {}", show(&grp, &u)))),
                None => Ok(Answer::no("NO")),
            }
        }
        Command::WitnessWord {
            class,
            presentation,
            word,
            limit,
        } => {
            let fp = load_finite(&presentation)?;
            let w = parse_named_word(&word, &fp.generators).map_err(|e| format!("word `{word}`: {e}"))?;
            let q = from_finite_presentation(&fp, class).map_err(err)?;
            match q.word_witness(&w, limit).map_err(err)? {
                WordWitness::Trivial(factors) => {
                    let expected = q.free.word_to_coords(&w).map_err(err)?;
                    if q.evaluate_factors(&factors).map_err(err)? != expected {
                        return Err("internal error: word witness does not verify".into());
                    }
                    let mut out = String::from("TRIVIAL");
                    for f in &factors {
                        let sign = if f.inverse { "^-1" } else { "" };
                        let by = f.conjugator.display_with(&fp.generators);
                        write!(out, "\nr{}{sign} by {by}", f.relator + 1).unwrap();
                    }
                    Ok(Answer::yes(out))
                }
                WordWitness::Nontrivial(x) => Ok(Answer::no(format!("NONTRIVIAL {x}"))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(answer) => {
            println!("{}", answer.text);
            if answer.positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {}", msg.lines().next().unwrap_or("failed"));
            ExitCode::from(2)
        }
    }
}
