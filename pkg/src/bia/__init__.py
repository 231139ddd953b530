"""Linear DoF bounds and blind interference alignment schemes for MISO
interference channels with reconfigurable receive antennas."""

from .alignment import (PartitionPlan, construct_partition, minimal_transmitter_count,
                        required_extension, validate_partition)
from .bounds import (BoundResult, downlink_cell_bound, ldof_function, optimal_preset_modes,
                     siso_bound, sweep_bound, uplink_cell_bound)
from .converse import (alignment_efficiency, bound_for_cardinalities, build_converse_lp,
                       check_symmetric_optimality, solve_converse_lp)
from .core_model import (AlignmentSet, AntennaId, CellularConfig, ChannelRealization, Scheme,
                         SystemConfig, dumps_scheme, effective_columns, load_scheme,
                         loads_scheme, save_scheme, validate_scheme)
from .errors import BiaError
from .synth import (golden_example, synthesize, synthesize_circulant_siso, synthesize_matching,
                    synthesize_grouped)
from .verifier import (RankBackend, expected_interference_rank, measure_user_ldof, monte_carlo,
                       rank, sample_channel, verify)

__version__ = "0.1.0"
