"""Exact cell combinatorics and graded-dimension series for the sheaf-side
Schur and KLR algebras of the projective line."""

from .kclass import (
    DELTA,
    HALF,
    INF_SLOPE,
    Heart,
    KClass,
    Window,
    ZERO,
    d_vec,
    d_vec_inv,
    euler_form,
    heart_positive,
    slope,
    slope_cmp,
    stack_dim,
    tilt_class,
    tilt_class_inv,
    twist_class,
    window_member,
)
from .series import Series
from .hnstrata import (
    BundleType,
    HNType,
    bundle_types,
    coh_series,
    hn_codim,
    hn_dim,
    hn_enumerate,
    quot_fixed_points,
    ss_series,
    torsion_series_newton,
    trunc_series,
)
from .wposet import (
    CMatrix,
    CornerTable,
    HasseDiagram,
    Seq,
    StabilizationResult,
    WindowedCells,
    approx_n0,
    hasse,
    order_leq,
    positive_or_zero,
    seq_enumerate,
    stratum_dim,
    stratum_rank,
    w_enumerate,
    w_enumerate_windowed,
)
from .pbwdiagram import (
    CrossingDiagram,
    PBWSequence,
    PBWStep,
    ShufflePermutation,
    crossing_count,
    partitions_in_box,
    pbw_degree,
    pbw_sequence,
    region_map,
    shuffle_permutation,
)
from .gradedcoh import (
    GenMap,
    PolyrepResult,
    SchurSeriesResult,
    TopSeries,
    compose_genmaps,
    genmap_det,
    identity_genmap,
    phi_transition,
    polyrep_series,
    psi_alpha,
    psi_alpha_n,
    ring_hilbert,
    schur_series,
    stratum_top_series,
)

__version__ = "0.1.0"
