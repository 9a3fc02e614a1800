"""Fuzzy C-Means with fuzzy-inertia validity indices, TSFD/PSFD and Visual TSFD."""

from .core import Centroids, Dataset, MembershipMatrix, grand_mean, squared_euclidean
from .datagen import (
    GaussianSpec,
    NoiseSpec,
    add_skewed_noise,
    gen_e1071,
    gen_gaussian_clusters,
    gen_overlapped,
    ruspini_fixture,
    ruspini_noised,
)
from .errors import (
    DatasetIOError,
    DegenerateCentroidsError,
    DegenerateDataError,
    EmptyClusterError,
    EmptyDatasetError,
    FuzzyTsfdError,
    InsufficientRangeError,
    InvalidArgumentError,
    ParseError,
)
from .fcm import ClusterModel, FcmConfig, fit, initialize_centroids, update_centroids, update_memberships
from .indices import (
    IndexReport,
    InertiaTriple,
    crisp_and_penalized_family,
    index_report,
    inertia,
    sfd_family,
    v_cl,
    v_pc,
    v_xb,
)
from .selection import KSweepResult, SelectionVerdicts, elbow, select_all, select_by_rule, sweep, tsfd_angle, visual_tsfd

__version__ = "0.1.0"
