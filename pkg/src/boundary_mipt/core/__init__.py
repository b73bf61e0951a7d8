"""Core stabilizer engine, lattice models, estimators and statistical-mechanics mappings."""

from boundary_mipt.core.clifford import (
    SymplecticClosure,
    random_symplectic_gate,
    sample_two_qubit_clifford,
    symplectic_closure,
)
from boundary_mipt.core.experiments import (
    chord_length,
    cross_ratio,
    fraction_region,
    interval_region,
    run_entropy_trace,
    run_mutual_info,
    run_strip_entropy,
    run_two_edge_purification,
)
from boundary_mipt.core.fits import (
    FitError,
    bin_by_eta,
    estimate_pc,
    fit_alpha,
    fit_delta,
    fit_lambda,
    fit_lambda_vs_inverse_lx,
    mutual_info_points,
)
from boundary_mipt.core.gfq import FpMatrix, is_prime, mod_inverse, rank_fp
from boundary_mipt.core.graph_state import (
    WeightedGraph,
    graph_entropy,
    to_tableau,
    z_measure_graph,
)
from boundary_mipt.core.lattice import apply_shallow_clifford, build_graph_state
from boundary_mipt.core.models import (
    CliffordCircuitSpec,
    ExperimentConfig,
    FitResult,
    Geometry,
    LatticeSpec,
    MeasurementPolicy,
    RunRecord,
)
from boundary_mipt.core.oracle import DenseState, DifferentialResult, run_differential
from boundary_mipt.core.rbim import (
    RbimResult,
    binder_crossing,
    flip_probability,
    onsager_coupling,
    rbim_records,
    run_rbim_mc,
    run_rbim_scan,
)
from boundary_mipt.core.statmech import (
    AnsatzError,
    Couplings,
    coupling_jhoriz,
    coupling_jvert,
    effective_couplings,
    plaquette_orbits,
    plaquette_weight,
    weingarten2,
)
from boundary_mipt.core.streaming import stream_clifford_boundary, stream_graph_boundary
from boundary_mipt.core.streams import StreamTag, TrajectoryStreams, keyed_rng
from boundary_mipt.core.tableau import (
    MeasurementOp,
    PauliString,
    StabilizerTableau,
    SymplecticGate,
    apply_cp,
    apply_symplectic,
    entropy_region,
    measure_site,
)

__all__ = [
    "AnsatzError",
    "CliffordCircuitSpec",
    "Couplings",
    "DenseState",
    "DifferentialResult",
    "ExperimentConfig",
    "FitError",
    "FitResult",
    "FpMatrix",
    "Geometry",
    "LatticeSpec",
    "MeasurementOp",
    "MeasurementPolicy",
    "PauliString",
    "RbimResult",
    "RunRecord",
    "StabilizerTableau",
    "StreamTag",
    "SymplecticClosure",
    "SymplecticGate",
    "TrajectoryStreams",
    "WeightedGraph",
    "apply_cp",
    "apply_shallow_clifford",
    "apply_symplectic",
    "bin_by_eta",
    "binder_crossing",
    "build_graph_state",
    "chord_length",
    "coupling_jhoriz",
    "coupling_jvert",
    "cross_ratio",
    "effective_couplings",
    "entropy_region",
    "estimate_pc",
    "fit_alpha",
    "fit_delta",
    "fit_lambda",
    "fit_lambda_vs_inverse_lx",
    "flip_probability",
    "fraction_region",
    "graph_entropy",
    "interval_region",
    "is_prime",
    "keyed_rng",
    "measure_site",
    "mod_inverse",
    "mutual_info_points",
    "onsager_coupling",
    "plaquette_orbits",
    "plaquette_weight",
    "random_symplectic_gate",
    "rank_fp",
    "rbim_records",
    "run_differential",
    "run_entropy_trace",
    "run_mutual_info",
    "run_rbim_mc",
    "run_rbim_scan",
    "run_strip_entropy",
    "run_two_edge_purification",
    "sample_two_qubit_clifford",
    "stream_clifford_boundary",
    "stream_graph_boundary",
    "symplectic_closure",
    "to_tableau",
    "weingarten2",
    "z_measure_graph",
]
