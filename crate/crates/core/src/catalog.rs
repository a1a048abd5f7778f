//! The shipped group catalog and knot corpus.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::fingrp::{FiniteGroup, GroupError};
use crate::presentation::{GroupPresentation, PresentationError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Group { path: PathBuf, source: GroupError },
    #[error("catalog directory {0} contains no .grp files")]
    Empty(PathBuf),
}

const BUILTIN_GROUPS: &[(&str, &str)] = &[
    ("trivial", include_str!("../catalog/trivial.grp")),
    ("Z2", include_str!("../catalog/Z2.grp")),
    ("Z3", include_str!("../catalog/Z3.grp")),
    ("Z4", include_str!("../catalog/Z4.grp")),
    ("Z2xZ2", include_str!("../catalog/Z2xZ2.grp")),
    ("Z5", include_str!("../catalog/Z5.grp")),
    ("Z6", include_str!("../catalog/Z6.grp")),
    ("S3", include_str!("../catalog/S3.grp")),
    ("D4", include_str!("../catalog/D4.grp")),
    ("Q8", include_str!("../catalog/Q8.grp")),
    ("D5", include_str!("../catalog/D5.grp")),
    ("A4", include_str!("../catalog/A4.grp")),
    ("S4", include_str!("../catalog/S4.grp")),
    ("A5", include_str!("../catalog/A5.grp")),
];

const CORPUS: &[(&str, &str)] = &[
    ("trefoil", include_str!("../corpus/trefoil.pres")),
    ("figure8", include_str!("../corpus/figure8.pres")),
    ("5_2", include_str!("../corpus/5_2.pres")),
    ("6_1", include_str!("../corpus/6_1.pres")),
];

/// Sorts by `(order, name)`, the sweep order.
pub fn sort_catalog(groups: &mut [FiniteGroup]) {
    groups.sort_by(|a, b| (a.order(), &a.name).cmp(&(b.order(), &b.name)));
}

/// All shipped groups, sorted by `(order, name)`.
pub fn builtin_catalog() -> Vec<FiniteGroup> {
    let mut groups: Vec<FiniteGroup> = BUILTIN_GROUPS
        .iter()
        .map(|(name, text)| FiniteGroup::parse(text).unwrap_or_else(|e| panic!("builtin group {name}: {e}")))
        .collect();
    sort_catalog(&mut groups);
    groups
}

pub fn builtin_group(name: &str) -> Option<FiniteGroup> {
    BUILTIN_GROUPS
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, text)| FiniteGroup::parse(text).expect("builtin group parses"))
}

/// Loads every `*.grp` file in `dir`, sorted by `(order, name)`.
pub fn load_catalog_dir(dir: &Path) -> Result<Vec<FiniteGroup>, CatalogError> {
    let io = |source| CatalogError::Io { path: dir.to_path_buf(), source };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "grp"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CatalogError::Empty(dir.to_path_buf()));
    }
    let mut groups = paths.iter().map(|p| load_group_file(p)).collect::<Result<Vec<_>, _>>()?;
    sort_catalog(&mut groups);
    Ok(groups)
}

pub fn load_group_file(path: &Path) -> Result<FiniteGroup, CatalogError> {
    let text = fs::read_to_string(path).map_err(|source| CatalogError::Io { path: path.to_path_buf(), source })?;
    FiniteGroup::parse(&text).map_err(|source| CatalogError::Group { path: path.to_path_buf(), source })
}

/// The shipped knot presentations: trefoil, figure-eight, 5_2, 6_1.
pub fn corpus() -> Vec<(&'static str, GroupPresentation)> {
    CORPUS
        .iter()
        .map(|(name, text)| {
            let pres: Result<GroupPresentation, PresentationError> = GroupPresentation::parse(text);
            (*name, pres.unwrap_or_else(|e| panic!("corpus {name}: {e}")))
        })
        .collect()
}

pub fn corpus_entry(name: &str) -> Option<GroupPresentation> {
    corpus().into_iter().find(|(n, _)| *n == name).map(|(_, p)| p)
}
