//! Loading groups, homomorphisms and elements from the command line.

use std::fs;
use std::path::{Path, PathBuf};

use nilpotent::{
    parse_coords, parse_finite_presentation, parse_homomorphism, parse_named_word, parse_presentation, parse_slp,
    slp_to_coords, Coords, FinitePresentation, Group,
};

pub type CliResult<T> = Result<T, String>;

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn load_group(path: &Path) -> CliResult<Group> {
    let text = read(path)?;
    let p = parse_presentation(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(Group::new(p))
}

pub fn load_finite(path: &Path) -> CliResult<FinitePresentation> {
    let text = read(path)?;
    parse_finite_presentation(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// How positional element arguments are to be read.
#[derive(Clone, Copy, Debug)]
pub enum Repr {
    Word,
    Coords,
    Slp,
}

pub fn element(group: &Group, text: &str, repr: Repr) -> CliResult<Coords> {
    let m = group.num_generators();
    let x = match repr {
        Repr::Word => {
            let names = group.presentation().display_names();
            let w = parse_named_word(text, &names).map_err(|e| format!("word `{text}`: {e}"))?;
            group.word_to_coords(&w).map_err(|e| e.to_string())?
        }
        Repr::Coords => {
            let x = parse_coords(text).map_err(|e| format!("coordinates `{text}`: {e}"))?;
            x.check_len(m).map_err(|e| e.to_string())?;
            group.normalize_torsion(&x)
        }
        Repr::Slp => {
            let path = Path::new(text);
            let slp = parse_slp(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
            slp_to_coords(group, &slp).map_err(|e| e.to_string())?
        }
    };
    Ok(x)
}

pub fn elements(group: &Group, texts: &[String], repr: Repr) -> CliResult<Vec<Coords>> {
    texts.iter().map(|t| element(group, t, repr)).collect()
}

/// Normal-form word of `x` with the presentation's generator names.
pub fn show(group: &Group, x: &Coords) -> String {
    let names = group.presentation().display_names();
    let w = x.to_word();
    let text = w.display_with(&names).to_string();
    text
}

/// A homomorphism file with its groups loaded; presentation paths are
/// relative to the file.
pub struct LoadedHom {
    pub source: Group,
    pub target: Group,
    pub domain: Vec<Coords>,
    pub images: Vec<Coords>,
}

pub fn load_hom(path: &Path) -> CliResult<LoadedHom> {
    let spec = parse_homomorphism(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let resolve = |p: &str| -> PathBuf { dir.join(p) };
    let source = load_group(&resolve(&spec.source))?;
    let target = load_group(&resolve(&spec.target))?;
    if spec.maps.is_empty() {
        return Err(format!("{}: no `map` lines", path.display()));
    }
    let mut domain = Vec::new();
    let mut images = Vec::new();
    for (g, h) in &spec.maps {
        domain.push(element(&source, g, Repr::Word)?);
        images.push(element(&target, h, Repr::Word)?);
    }
    Ok(LoadedHom {
        source,
        target,
        domain,
        images,
    })
}
