"""Grid-search oracle for the 3-item Bradley-Terry MLE.

Independent of the MM recursion under test: evaluates the log-likelihood on
refined grids over the open simplex, on each boundary face (one strength
pinned to a floor, a 1-D search), and at the vertices, then returns the best
candidate. Faces matter because items that never win push the MLE onto the
simplex boundary, where a centre-and-shrink interior search loses the ridge.

The log-likelihood is linear in the six ordered-pair counts, so the coarse
pass over each fixed level-0 grid is a single matrix-vector product against
feature tables built once at import time. Only the small refinement grids
are evaluated per instance.
"""

import numpy as np

FLOOR = 1e-9

_PAIRS = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]


def win_matrix_3(judgements, items):
    index = {item: i for i, item in enumerate(items)}
    w = np.zeros((3, 3))
    for winner, loser in judgements:
        w[index[winner], index[loser]] += 1.0
    return w


def _counts(w: np.ndarray) -> np.ndarray:
    return np.array([w[i, j] for i, j in _PAIRS])


def _features(points: np.ndarray) -> np.ndarray:
    """Per-point column ln p_i - ln(p_i + p_j) for each ordered pair."""
    log_p = np.log(points)
    cols = [
        log_p[:, i] - np.log(points[:, i] + points[:, j]) for i, j in _PAIRS
    ]
    return np.stack(cols, axis=1)


def log_likelihood(w: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Vectorised ll over rows of `points`; zero-count pairs contribute nothing."""
    return _features(np.maximum(points, FLOOR)) @ _counts(w)


def _interior_grid(step: float) -> np.ndarray:
    g = np.arange(FLOOR, 1.0, step)
    p1, p2 = np.meshgrid(g, g, indexing="ij")
    p1, p2 = p1.ravel(), p2.ravel()
    p3 = 1.0 - p1 - p2
    keep = p3 >= FLOOR
    return np.stack([p1[keep], p2[keep], p3[keep]], axis=1)


def _face_points(pinned: int, ts: np.ndarray) -> np.ndarray:
    free = [k for k in range(3) if k != pinned]
    points = np.empty((ts.size, 3))
    points[:, pinned] = FLOOR
    points[:, free[0]] = ts
    points[:, free[1]] = 1.0 - FLOOR - ts
    return points


_L0_STEP = 0.004
_INTERIOR_POINTS = _interior_grid(_L0_STEP)
_INTERIOR_FEATURES = _features(_INTERIOR_POINTS)
_FACE_TS = np.linspace(FLOOR, 1.0 - 2.0 * FLOOR, 2001)
_FACE_POINTS = [_face_points(pinned, _FACE_TS) for pinned in range(3)]
_FACE_FEATURES = [_features(points) for points in _FACE_POINTS]


def _interior_candidate(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    best = _INTERIOR_POINTS[np.argmax(_INTERIOR_FEATURES @ v)]
    step = _L0_STEP
    for _ in range(3):
        span = 3.0 * step
        step /= 5.0
        g1 = np.arange(max(best[0] - span, FLOOR), min(best[0] + span, 1.0), step)
        g2 = np.arange(max(best[1] - span, FLOOR), min(best[1] + span, 1.0), step)
        p1, p2 = np.meshgrid(g1, g2, indexing="ij")
        p1, p2 = p1.ravel(), p2.ravel()
        p3 = 1.0 - p1 - p2
        keep = p3 >= FLOOR
        points = np.stack([p1[keep], p2[keep], p3[keep]], axis=1)
        best = points[np.argmax(log_likelihood(w, points))]
    return best


def _face_candidate(w: np.ndarray, v: np.ndarray, pinned: int) -> np.ndarray:
    best_t = _FACE_TS[np.argmax(_FACE_FEATURES[pinned] @ v)]
    width = _FACE_TS[1] - _FACE_TS[0]
    for _ in range(3):
        lo = max(best_t - width, FLOOR)
        hi = min(best_t + width, 1.0 - 2.0 * FLOOR)
        ts = np.linspace(lo, hi, 401)
        best_t = ts[np.argmax(log_likelihood(w, _face_points(pinned, ts)))]
        width = ts[1] - ts[0]
    return _face_points(pinned, np.array([best_t]))[0]


def grid_search_btm_3(judgements, items) -> np.ndarray:
    """Best strengths over interior, face and vertex candidates, normalised."""
    w = win_matrix_3(judgements, items)
    v = _counts(w)
    candidates = [_interior_candidate(w, v)]
    for pinned in range(3):
        candidates.append(_face_candidate(w, v, pinned))
    for peak in range(3):
        vertex = np.full(3, FLOOR)
        vertex[peak] = 1.0 - 2.0 * FLOOR
        candidates.append(vertex)
    stacked = np.stack(candidates)
    best = stacked[np.argmax(log_likelihood(w, stacked))]
    return best / best.sum()


def unique_maximiser(w: np.ndarray) -> bool:
    """True when the likelihood has a single maximiser on the closed simplex.

    Strength ratios inside a strongly connected block of the beats digraph
    are pinned by the data, and every block reachable from the top block is
    forced to zero mass in the normalised limit. Two top blocks with no
    directed path between them could split the unit mass arbitrarily, so the
    maximiser is unique exactly when the condensation has a single source.
    """
    beats = w > 0
    reach = beats | np.eye(3, dtype=bool)
    for k in range(3):
        reach |= np.outer(reach[:, k], reach[k, :])
    sources = set()
    for i in range(3):
        comp = frozenset(j for j in range(3) if reach[i, j] and reach[j, i])
        incoming = any(
            beats[k, j] for j in comp for k in range(3) if k not in comp
        )
        if not incoming:
            sources.add(comp)
    return len(sources) == 1
