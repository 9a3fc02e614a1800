"""Fuzzy inertia (FW, FB, FI) and the validity indices computed from it."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .core import Dataset, MembershipMatrix, grand_mean, pairwise_sq_dists
from .errors import DegenerateCentroidsError, DegenerateDataError, InvalidArgumentError
from .fcm import ClusterModel

# orientation of every index over K
MAXIMIZED = ("v_pc", "v_cl", "v_fratio", "v_fch", "tsfd", "psfd")
MINIMIZED = ("v_fs", "v_xb")
INDEX_NAMES = ("v_pc", "v_cl", "v_fratio", "v_fch", "v_fs", "v_xb", "sfd", "tsfd", "psfd")

CENTROID_COINCIDENCE = 1e-12


@dataclass(frozen=True)
class InertiaTriple:
    fw: float
    fb: float
    fi: float

    def huygens_gap(self) -> float:
        """Relative gap |FI - (FW + FB)| / FI."""
        return abs(self.fi - (self.fw + self.fb)) / self.fi


@dataclass(frozen=True)
class IndexReport:
    k: int
    n: int
    v_pc: float
    v_cl: float
    v_fratio: float
    v_fch: float
    v_fs: float
    v_xb: float
    sfd: float
    tsfd: float
    psfd: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def _arrays(data: Dataset | np.ndarray, model: ClusterModel) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = data.points if isinstance(data, Dataset) else np.asarray(data, dtype=float)
    u = model.memberships.values
    c = model.centroids.centers
    if u.shape[0] != x.shape[0]:
        raise InvalidArgumentError("model memberships do not match the dataset size")
    return x, u, c


def inertia(data: Dataset | np.ndarray, model: ClusterModel, m: float) -> InertiaTriple:
    """FW, FB and FI, each summed directly; FI is never taken as FW + FB."""
    if not m > 1.0:
        raise InvalidArgumentError("fuzziness m must be > 1")
    x, u, c = _arrays(data, model)
    xbar = grand_mean(x)
    um = u**m
    fw = float(np.sum(um * pairwise_sq_dists(x, c)))
    fb = float(np.sum(um.sum(axis=0) * pairwise_sq_dists(c, xbar[None, :])[:, 0]))
    fi = float(np.sum(um.sum(axis=1) * pairwise_sq_dists(x, xbar[None, :])[:, 0]))
    return InertiaTriple(fw, fb, fi)


def _u(memberships: MembershipMatrix | np.ndarray) -> np.ndarray:
    if isinstance(memberships, MembershipMatrix):
        return memberships.values
    return MembershipMatrix(memberships).values


def v_pc(memberships: MembershipMatrix | np.ndarray) -> float:
    """Partition coefficient, mean over points of sum_k u_ik^2. Lies in [1/K, 1]."""
    u = _u(memberships)
    return float(np.sum(u * u) / u.shape[0])


def v_cl(memberships: MembershipMatrix | np.ndarray) -> float:
    """Chen-Linkens index: mean max membership minus mean pairwise overlap.

    The overlap term averages ``mean_i min(u_ik, u_ij)`` over the
    K(K-1)/2 unordered cluster pairs.
    """
    u = _u(memberships)
    n, k = u.shape
    compact = float(u.max(axis=1).sum() / n)
    kk, jj = np.triu_indices(k, 1)
    overlap = np.minimum(u[:, kk], u[:, jj]).sum(axis=0) / n
    pairs = k * (k - 1) / 2
    return compact - float(overlap.sum()) / pairs


def crisp_and_penalized_family(tri: InertiaTriple, n: int, k: int) -> tuple[float, float, float]:
    """(V_FRatio, V_FCH, V_FS). Ratio forms are ``inf`` when FW is 0."""
    if not 2 <= k < n:
        raise InvalidArgumentError(f"need 2 <= K < n, got K={k}, n={n}")
    fratio = tri.fb / tri.fw if tri.fw > 0.0 else math.inf
    fch = fratio * ((n - k) / (k - 1))
    return fratio, fch, tri.fw - tri.fb


def v_xb(data: Dataset | np.ndarray, model: ClusterModel, m: float) -> float:
    x, u, c = _arrays(data, model)
    num = float(np.sum((u**m) * pairwise_sq_dists(x, c)))
    sep = pairwise_sq_dists(c, c)
    sep = sep[np.triu_indices(c.shape[0], 1)].min()
    if sep < CENTROID_COINCIDENCE:
        raise DegenerateCentroidsError(f"closest centroids are {sep:.3g} apart (squared)")
    return num / (x.shape[0] * float(sep))


def sfd_family(tri: InertiaTriple, n: int, k: int) -> tuple[float, float, float]:
    """(SFD, TSFD, PSFD).

    SFD = (FB - FW) / FI lies in [-1, 1]; TSFD = (1 + SFD) / 2, which equals
    FB / FI at weighted-mean centroids; PSFD = TSFD * (n - K) / (K - 1).
    """
    if not 2 <= k < n:
        raise InvalidArgumentError(f"need 2 <= K < n, got K={k}, n={n}")
    if not tri.fi > 0.0:
        raise DegenerateDataError("FI is 0: all points coincide")
    sfd = (tri.fb - tri.fw) / tri.fi
    tsfd = (1.0 + sfd) / 2.0
    return sfd, tsfd, tsfd * ((n - k) / (k - 1))


def index_report(data: Dataset | np.ndarray, model: ClusterModel, m: float, tri: InertiaTriple | None = None) -> IndexReport:
    """Every index for one fitted model, all derived from the same fit."""
    x, _, _ = _arrays(data, model)
    n, k = x.shape[0], model.k
    tri = tri or inertia(x, model, m)
    fratio, fch, fs = crisp_and_penalized_family(tri, n, k)
    sfd, tsfd, psfd = sfd_family(tri, n, k)
    return IndexReport(
        k=k,
        n=n,
        v_pc=v_pc(model.memberships),
        v_cl=v_cl(model.memberships),
        v_fratio=fratio,
        v_fch=fch,
        v_fs=fs,
        v_xb=v_xb(x, model, m),
        sfd=sfd,
        tsfd=tsfd,
        psfd=psfd,
    )
