"""Exact arithmetic statistics of effective 0-cycles on varieties over finite fields.

The entry point is a variety descriptor (Weil polynomials, point counts or a
built-in family) expanded by :func:`build_zeta` into exact count tables.
Everything else (prime number theorem, smoothness, prime multiplicities,
the comparison with random permutations and the Poisson window statistic)
reads those tables.  :mod:`cyclestat.oracle` recomputes the affine-line
case by brute force.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .series import PowerSeries, RationalFunctionRep, euler_product, expand_rational, invert, multiply
from .zeta import (
    AffineSpace,
    EllipticCurve,
    PointCounts,
    ProjectiveSpace,
    WeilPolynomials,
    ZetaExpansion,
    build_zeta,
    closed_point_counts,
    conf_counts,
    descriptor_from_dict,
    descriptor_to_dict,
    load_descriptor,
    pnt_report,
    ring_z_at,
    validate_descriptor,
)
from .smoothness import buchstab_omega, dickman_rho, phi_count, psi_count, smoothness_report, smoothness_table
from .prime_orders import CharPolySpec, charpoly_expectation, charpoly_limit, independence_check, nu_distribution, nu_limit
from .perm_bridge import (
    Partition,
    comparison_check,
    cycle_index,
    g_n_value,
    multichoose_identity_check,
    partitions_of,
    pushforward_probability,
    sn_expectation,
)
from .poisson import (
    PoissonParams,
    addition_perturbation_check,
    draw_profiles,
    mu_r_L,
    omega_moments,
    phi_of,
    poisson_experiment,
    sample_profile,
)
from .oracle import FqPoly, enumerate_monic, exhaustive_stats, factor
