"""Spatially consistent geometry-based stochastic channel simulator.

Generates correlated small-scale fading with a sum-of-sinusoids random
field engine and quantifies spatial consistency between users through
angular distances, chordal distance, and covariance similarity.
"""

from .antenna import Array, Pattern, build_upa, element_response, array_phase
from .coeff import (ChannelMatrix, CoefficientMatrix, PolarizationMatrix,
                    assemble_frequency_response, channel_for_paths,
                    path_coefficient, subcarrier_grid)
from .experiment import (ConfigError, ExperimentConfig, SweepRecord,
                         default_config, load_config, run_sweep, write_csv)
from .geometry import (SphericalAngle, Track, bearing, spherical_basis,
                       track_positions, vec3)
from .metrics import (AngularDistanceReport, Covariance,
                      average_angular_distance, azimuth_distance,
                      chordal_distance, cmd_similarity, covariance,
                      elevation_distance)
from .scenario import (Lsps, ScenarioTable, build_lsp_fields, default_table,
                       load_table, lsps_at)
from .smallscale import (Path, PathSet, SsfFieldBank, build_ssf_bank,
                         generate_paths)
from .sosfield import (AcfSpec, SosField, fit_frequencies, map_to_uniform,
                       reseed_phases, target_acf, uncorrelated_field)

__version__ = "0.1.0"
