"""Score field, cosine-pruned medial axis, and connectivity enforcement.

The score field averages medial-axis indicator images over a stack of
DCT low-pass reconstructions of the shape: points on structural branches
persist across smoothing levels and score high, points on noise-induced
branches appear only at high frequencies and score low.  Thresholding
the field at tau gives the pruned skeleton; disconnected pieces are then
joined along minimum-energy paths over the foreground lattice.
"""

import heapq
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .distfield import edt
from .errors import DomainError, ParameterError
from .skeleton import MedialAxisTransform, mat_indicator, neighbor_offsets
from .transform import DEFAULT_BIN_THRESHOLD, dct_forward, lowpass_reconstruct

DEFAULT_TAU = 0.47


@dataclass(frozen=True)
class CpmaConfig:
    """Knobs of the cosine pruning pipeline.

    tau          -- score threshold in (0, 1); 0.47 by default
    max_freq     -- number of low-pass reconstructions aggregated; when
                    None, half the largest axis extent (rounded up)
    bin_threshold -- binarization level applied after each inverse DCT
    max_connect_iters -- cap on path insertions during connection
    """

    tau: float = DEFAULT_TAU
    max_freq: int | None = None
    bin_threshold: float = DEFAULT_BIN_THRESHOLD
    max_connect_iters: int = 200

    def __post_init__(self):
        if not 0 < self.tau < 1:
            raise ParameterError(f"tau must be in (0, 1), got {self.tau}")
        if self.max_freq is not None and self.max_freq < 1:
            raise ParameterError(f"max_freq must be >= 1, got {self.max_freq}")
        if self.max_connect_iters < 1:
            raise ParameterError("max_connect_iters must be >= 1")

    def resolved_max_freq(self, dims):
        m = max(dims)
        mf = self.max_freq if self.max_freq is not None else (m + 1) // 2
        return min(mf, m)


def score_function(grid, cfg=None):
    """Per-cell average of MAT indicators over low-pass reconstructions.

    With max_freq = m the reconstructions at i = 1..m-1 frequencies are
    aggregated and the sum divided by m, so values lie in [0, 1).
    """
    cfg = cfg or CpmaConfig()
    if not grid.data.any():
        raise DomainError("score function needs a nonempty foreground")
    mf = cfg.resolved_max_freq(grid.dims)
    spec = dct_forward(grid)
    acc = np.zeros(grid.dims, dtype=np.float64)
    for i in range(1, mf):
        rec = lowpass_reconstruct(spec, i, cfg.bin_threshold)
        acc += mat_indicator(rec.data)
    return acc / mf


def extract_cpma(grid, cfg=None):
    """Threshold the score field; returns (skeleton, score field).

    Skeleton points are the foreground cells with score > tau; their
    radii come from the original grid's distance transform.
    """
    cfg = cfg or CpmaConfig()
    field = score_function(grid, cfg)
    df = edt(grid)
    mask = (field > cfg.tau) & grid.data
    mat = MedialAxisTransform.from_mask(mask, df.dist)
    return mat, field


class LatticeGraph:
    """Energy-weighted graph over foreground lattice points.

    Nodes are the foreground cells; edges join 8-connected (2D) or
    26-connected (3D) foreground pairs with weight
    1 - (F(x) + F(y)) / 2, so paths prefer high-score cells.
    """

    def __init__(self, grid, field):
        field = np.asarray(field, dtype=np.float64)
        if field.shape != grid.dims:
            raise ParameterError("score field dims do not match grid dims")
        self.fg = grid.data
        self.field = field
        self.offsets = neighbor_offsets(grid.ndim)

    def weight(self, x, y):
        return 1.0 - (self.field[tuple(x)] + self.field[tuple(y)]) / 2.0

    def edges(self):
        """Yield each (x, y, weight) edge once, deterministic order."""
        dims = np.asarray(self.fg.shape)
        pts = np.argwhere(self.fg)
        for p in pts:
            for off in self.offsets:
                q = p + off
                if (q < 0).any() or (q >= dims).any():
                    continue
                if tuple(q) <= tuple(p) or not self.fg[tuple(q)]:
                    continue
                yield tuple(p), tuple(q), self.weight(p, q)


def build_lattice(grid, field):
    return LatticeGraph(grid, field)


def _min_energy_path(graph, sources, targets):
    """Multi-source Dijkstra over the lattice; returns the best path.

    ``sources``/``targets`` are boolean masks over the grid.  Node cost
    accumulates edge energies; ties resolve by flat node index, making
    the result deterministic.  Returns a list of flat indices from a
    source to the first settled target, or None if unreachable.
    """
    fg = graph.fg
    shape = fg.shape
    fgf = fg.ravel()
    half = 1.0 - graph.field.ravel() / 2.0  # per-node half-energy
    strides = np.array([int(np.prod(shape[ax + 1 :])) for ax in range(len(shape))])
    flat_offs = (graph.offsets * strides).sum(axis=1)
    coords_offs = graph.offsets
    dims = np.asarray(shape)

    dist = np.full(fgf.shape, np.inf)
    pred = np.full(fgf.shape, -1, dtype=np.int64)
    targets_f = targets.ravel()
    heap = []
    for s in np.flatnonzero(sources.ravel()):
        dist[s] = 0.0
        heapq.heappush(heap, (0.0, int(s)))
    settled = np.zeros(fgf.shape, dtype=bool)
    while heap:
        d, node = heapq.heappop(heap)
        if settled[node] or d > dist[node]:
            continue
        settled[node] = True
        if targets_f[node]:
            path = [node]
            while pred[node] >= 0:
                node = pred[node]
                path.append(node)
            return path[::-1]
        pc = np.unravel_index(node, shape)
        for k in range(len(flat_offs)):
            q = node + flat_offs[k]
            qc = coords_offs[k] + pc
            if (qc < 0).any() or (qc >= dims).any():
                continue
            if not fgf[q] or settled[q]:
                continue
            # half[p] = 1 - F(p)/2, so half[x] + half[y] - 1 is the edge energy.
            nd = d + half[node] + half[q] - 1.0
            if nd < dist[q] - 1e-15:
                dist[q] = nd
                pred[q] = node
                heapq.heappush(heap, (nd, int(q)))
    return None


@dataclass(frozen=True)
class ConnectResult:
    """Outcome of connectivity enforcement.

    connected    -- each foreground component's skeleton is now a single
                    piece (pieces in different foreground components can
                    never be joined and do not count against this)
    cap_reached  -- the iteration cap stopped the process early
    n_components -- skeleton component count in the output
    """

    mat: MedialAxisTransform
    connected: bool
    cap_reached: bool
    iterations: int
    n_components: int


def connect_cpma(cpma, field, grid, cfg=None):
    """Join disconnected skeleton pieces along minimum-energy paths.

    Repeatedly connects the two largest components (ties by smallest
    flat index) of the skeleton that share a foreground component, until
    a single component per foreground component remains or the iteration
    cap is hit.  Added path cells get radii from the grid's EDT.
    """
    cfg = cfg or CpmaConfig()
    fg = grid.data
    mask = cpma.as_mask()
    if (mask & ~fg).any():
        raise ParameterError("skeleton points must lie inside the foreground")
    graph = LatticeGraph(grid, field)
    structure = np.ones((3,) * grid.ndim, dtype=bool)
    fg_labels, _ = ndimage.label(fg, structure=structure)

    iterations = 0
    cap_reached = False
    stuck = False
    while True:
        labels, ncomp = ndimage.label(mask, structure=structure)
        if ncomp <= 1:
            break
        # Group skeleton components by the foreground component they sit in.
        comp_info = []
        flat_labels = labels.ravel()
        for c in range(1, ncomp + 1):
            idx = np.flatnonzero(flat_labels == c)
            host = fg_labels.ravel()[idx[0]]
            comp_info.append((host, len(idx), int(idx[0]), c, idx))
        by_host = {}
        for host, size, first, c, idx in comp_info:
            by_host.setdefault(host, []).append((-size, first, c, idx))
        pair = None
        for host in sorted(by_host):
            comps = sorted(by_host[host])
            if len(comps) >= 2:
                pair = (comps[0], comps[1])
                break
        if pair is None:
            stuck = True  # pieces live in different foreground components
            break
        if iterations >= cfg.max_connect_iters:
            cap_reached = True
            break
        src = np.zeros(mask.shape, dtype=bool)
        tgt = np.zeros(mask.shape, dtype=bool)
        src.ravel()[pair[0][3]] = True
        tgt.ravel()[pair[1][3]] = True
        path = _min_energy_path(graph, src, tgt)
        if path is None:
            stuck = True
            break
        mask.ravel()[path] = True
        iterations += 1

    df = edt(grid)
    out = MedialAxisTransform.from_mask(mask, df.dist)
    labels, ncomp = ndimage.label(mask, structure=structure)
    hosts = len(np.unique(fg_labels[mask])) if mask.any() else 0
    connected = ncomp <= max(hosts, 1) and not cap_reached
    return ConnectResult(
        mat=out,
        connected=connected,
        cap_reached=cap_reached,
        iterations=iterations,
        n_components=ncomp,
    )
