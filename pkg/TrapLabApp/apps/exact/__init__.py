from apps.exact.certificates import (
    Certificate,
    kappa,
    lemma_s01_certificate,
    lemma_s01_local_certificate,
    lemma_s03_certificate,
    write_certificates,
)
from apps.exact.distribution import Distribution
from apps.exact.hitting import (
    CapacityPair,
    capacity,
    dirichlet_form,
    equilibrium_hit,
    equilibrium_potential,
    escape_probabilities,
    escape_probability_exact,
    gamma_ell,
    harmonic_measure,
    hit_distribution_exact,
    return_hit_distribution,
    rho_exact,
    rho_forms,
    stationary_nu,
    stationary_pi,
    tree_escape_probability,
)
from apps.exact.mixing import finite_horizon_hit, lazy_transition, mixing_time, tv_profile
from apps.exact.occupation import (
    expected_occupation,
    mean_cycle_length_exact,
    mean_cycle_occupation,
    occupation_identity,
)

__all__ = [
    "CapacityPair",
    "Certificate",
    "Distribution",
    "capacity",
    "dirichlet_form",
    "equilibrium_hit",
    "equilibrium_potential",
    "escape_probabilities",
    "escape_probability_exact",
    "expected_occupation",
    "finite_horizon_hit",
    "gamma_ell",
    "harmonic_measure",
    "hit_distribution_exact",
    "kappa",
    "lazy_transition",
    "lemma_s01_certificate",
    "lemma_s01_local_certificate",
    "lemma_s03_certificate",
    "mean_cycle_length_exact",
    "mean_cycle_occupation",
    "mixing_time",
    "occupation_identity",
    "return_hit_distribution",
    "rho_exact",
    "rho_forms",
    "stationary_nu",
    "stationary_pi",
    "tree_escape_probability",
    "tv_profile",
    "write_certificates",
]
