"""Separable two-component Dirac operators: ladder algebras, spectra and
machine verification of their operator identities."""

from .specfun import (EllipticArgs, EllipticDomainError,
                      EllipticDivergenceError, ellipk, jacobi,
                      jacobi_sn_cn_dn)
from .funcs import Fn, const, xvar
from .chanop import (AlgebraClass, SolutionFamily, ChannelOperator,
                     build_h, build_ladder, compose, identity_residual,
                     family_so21, family_so3_trig, family_so3_sphere,
                     family_oscillator, family_from_g2)
from .geometry import (MetricProfile, validate_metric, derive_gauge_potential,
                       hamiltonian_from_metric, flatten_coordinates)
from .discretize import (Grid, DiscreteSpinor, assemble, eigen,
                         physical_levels, convergence_study,
                         rayleigh_quotient)
from .reps import (weight_energy, admissible_weights, WeightState, Multiplet,
                   climb, ladder_recursion, representation_dimension)
from .models import catalog, MODEL_NAMES, btz_check
from .susy import (build_extended, parity_conjugation_report,
                   n2_superalgebra_residuals, n4_superalgebra_residuals,
                   local_subalgebra_residuals, pdm_system)

__version__ = "0.1.0"
