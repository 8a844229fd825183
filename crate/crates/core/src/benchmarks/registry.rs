//! Metadata of the real-world constrained problems that are supplied externally.

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub m: usize,
    pub d: usize,
    pub ng: usize,
    pub nh: usize,
    pub mfe: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown problem `{0}`")]
pub struct UnknownProblem(pub String);

macro_rules! rw {
    ($name:literal, $m:literal, $d:literal, $ng:literal, $nh:literal, $mfe:literal) => {
        RegistryEntry {
            name: $name,
            m: $m,
            d: $d,
            ng: $ng,
            nh: $nh,
            mfe: $mfe,
        }
    };
}

/// Name, objectives, variables, inequalities, equalities and evaluation budget.
pub const RWMOP: [RegistryEntry; 35] = [
    rw!("RWMOP1", 2, 4, 2, 2, 20000),
    rw!("RWMOP2", 2, 5, 5, 0, 20000),
    rw!("RWMOP3", 2, 3, 3, 0, 20000),
    rw!("RWMOP4", 2, 4, 4, 0, 20000),
    rw!("RWMOP5", 2, 4, 4, 0, 20000),
    rw!("RWMOP6", 2, 7, 11, 0, 20000),
    rw!("RWMOP7", 2, 4, 1, 0, 20000),
    rw!("RWMOP8", 3, 7, 9, 0, 26250),
    rw!("RWMOP9", 2, 4, 0, 0, 20000),
    rw!("RWMOP10", 2, 2, 2, 0, 20000),
    rw!("RWMOP11", 5, 3, 7, 0, 53000),
    rw!("RWMOP12", 2, 4, 1, 0, 20000),
    rw!("RWMOP13", 3, 7, 11, 0, 20000),
    rw!("RWMOP14", 2, 5, 8, 0, 26250),
    rw!("RWMOP15", 2, 3, 8, 0, 20000),
    rw!("RWMOP16", 2, 2, 2, 0, 20000),
    rw!("RWMOP17", 3, 6, 9, 0, 26250),
    rw!("RWMOP18", 2, 3, 3, 0, 20000),
    rw!("RWMOP19", 3, 10, 10, 0, 26250),
    rw!("RWMOP20", 2, 4, 7, 0, 20000),
    rw!("RWMOP21", 2, 6, 4, 0, 20000),
    rw!("RWMOP22", 2, 9, 2, 4, 20000),
    rw!("RWMOP23", 2, 6, 1, 4, 20000),
    rw!("RWMOP24", 3, 9, 0, 6, 26250),
    rw!("RWMOP25", 2, 2, 2, 0, 20000),
    rw!("RWMOP26", 2, 3, 1, 1, 20000),
    rw!("RWMOP27", 2, 3, 3, 0, 20000),
    rw!("RWMOP28", 2, 7, 4, 4, 20000),
    rw!("RWMOP29", 2, 7, 9, 0, 20000),
    rw!("RWMOP30", 2, 25, 24, 0, 80000),
    rw!("RWMOP31", 2, 25, 24, 0, 80000),
    rw!("RWMOP32", 2, 25, 24, 0, 80000),
    rw!("RWMOP33", 2, 30, 29, 0, 80000),
    rw!("RWMOP34", 2, 30, 29, 0, 80000),
    rw!("RWMOP35", 2, 30, 29, 0, 80000),
];

pub fn registry_lookup(name: &str) -> Result<RegistryEntry, UnknownProblem> {
    RWMOP
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .copied()
        .ok_or_else(|| UnknownProblem(name.to_string()))
}

/// Population size used for a real-world problem with `m` objectives.
pub fn rwmop_population_size(m: usize) -> Option<usize> {
    match m {
        2 => Some(80),
        3 => Some(105),
        4 => Some(143),
        5 => Some(212),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        assert_eq!(
            registry_lookup("RWMOP11").unwrap(),
            rw!("RWMOP11", 5, 3, 7, 0, 53000)
        );
        assert_eq!(
            registry_lookup("RWMOP30").unwrap(),
            rw!("RWMOP30", 2, 25, 24, 0, 80000)
        );
        assert_eq!(
            registry_lookup("RWMOP99"),
            Err(UnknownProblem("RWMOP99".into()))
        );
    }

    #[test]
    fn table_is_complete_and_ordered() {
        for (i, e) in RWMOP.iter().enumerate() {
            assert_eq!(e.name, format!("RWMOP{}", i + 1));
            assert!(rwmop_population_size(e.m).is_some());
        }
    }
}
