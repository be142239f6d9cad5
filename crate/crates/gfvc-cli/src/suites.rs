//! Built-in suites: the shipped example configs, embedded by name.

const SUITES: [(&str, &str); 11] = [
    ("sonin", include_str!("../configs/sonin.toml")),
    ("fundamental", include_str!("../configs/fundamental.toml")),
    ("power-rule", include_str!("../configs/power_rule.toml")),
    ("green", include_str!("../configs/green.toml")),
    ("gauss", include_str!("../configs/gauss.toml")),
    ("stokes", include_str!("../configs/stokes.toml")),
    ("gradient", include_str!("../configs/gradient.toml")),
    ("identities", include_str!("../configs/identities.toml")),
    ("occ", include_str!("../configs/occ.toml")),
    ("continuity", include_str!("../configs/continuity.toml")),
    ("verify-half", include_str!("../configs/verify_half.toml")),
];

pub fn get(name: &str) -> Option<&'static str> {
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}
