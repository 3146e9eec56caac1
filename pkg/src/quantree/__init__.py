"""Spectra of regular rooted quantum trees with Robin vertex conditions."""

from .errors import CountMismatchError, IntegrationError, NumericalError
from .potential import (DirichletSpectrum, Potential, TransferValues, dirichlet_eigenvalues,
                        dirichlet_spectrum, from_mu, sample_spiral, to_mu, transfer_at)
from .orthopoly import (PolyParams, QuadratureMeasure, leading_coefficients,
                        limiting_root_density, pq_eval, pq_roots, quadrature_measure,
                        ratio_expansion_check)
from .determinants import (DIRICHLET, ROBIN, GraphParams, dd_eval, dd_matrix_det, dd_value,
                           dd_via_pq, secular_at, y_roots, z_roots)
from .spectra import (ClusterSummary, SpectrumReport, TaggedEigenvalue, TreeSpectrum,
                      dirichlet_multiplicity, linear_spectrum, rogue_trajectory, tree_spectrum,
                      width_bound)
from .infinite import (BandStructure, density_of_states, infinite_bands,
                       infinite_point_spectrum)
from .zerosets import (asymptote_errors, component_y_at, component_z_at, mirror_index,
                       rogue_asymptote, strip_membership, trace_all, trace_component)
from .eigenfunctions import (DiscreteEigenvector, edge_function, regime, residual,
                             vertex_values)
from .oracle import decomposition_check, fd_linear, fd_tree

__version__ = "0.1.0"
