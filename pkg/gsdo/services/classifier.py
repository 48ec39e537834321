"""Classification constraint g_c: nearest-neighbor class scores over the archive."""

import logging
from typing import Callable

import numpy as np
from sklearn.neighbors import KNeighborsClassifier

from gsdo.models import GcParams, PointClass
from gsdo.services.archive import Archive

logger = logging.getLogger(__name__)

# F and I are pooled as "good"
_LABELS = {
    PointClass.F: 0,
    PointClass.I: 0,
    PointClass.S: 1,
    PointClass.U: 2,
    PointClass.H: 3,
}
_N_LABELS = 4


def sufficient_data(archive: Archive) -> bool:
    """Enough good points and enough bad points to train on."""
    good = archive.size(PointClass.F) > 2 or archive.size(PointClass.I) > 2
    bad = (
        archive.size(PointClass.H) > 2
        or archive.size(PointClass.U) > 2
        or archive.size(PointClass.S) > 2
    )
    return good and bad


class ClassificationConstraint:
    """
    Vectorized g_c over normalized coordinates, built from an archive snapshot.

    Returns c1 everywhere when the archive fails the data-sufficiency test;
    otherwise the score of the majority class among the k nearest archived
    points. Ties go to the tied class with the nearest member.
    """

    def __init__(self, archive: Archive, params: GcParams):
        self.params = params
        self._scores = np.array([params.c1, params.c2, params.c3, params.c4])
        self.active = sufficient_data(archive)
        self._model = None
        if self.active:
            labels = np.array([_LABELS[cls] for cls in archive.classes])
            k = min(params.k_neighbors, len(labels))
            self._labels = labels
            self._model = KNeighborsClassifier(n_neighbors=k).fit(archive.Z.copy(), labels)
            logger.debug(f"g_c active with k={k} over {len(labels)} points")

    def classify(self, Z) -> np.ndarray:
        """Pooled class label for every row of ``Z``."""
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        if not self.active:
            return np.zeros(Z.shape[0], dtype=int)
        if Z.shape[0] == 0:
            return np.empty(0, dtype=int)

        neighbors = self._model.kneighbors(Z, return_distance=False)
        neighbor_labels = self._labels[neighbors]
        counts = np.stack(
            [(neighbor_labels == lab).sum(axis=1) for lab in range(_N_LABELS)], axis=1
        )
        tied = counts == counts.max(axis=1, keepdims=True)
        # first neighbor, in distance order, whose class is among the tied ones
        in_tie = np.take_along_axis(tied, neighbor_labels, axis=1)
        first = np.argmax(in_tie, axis=1)
        return neighbor_labels[np.arange(len(first)), first]

    def __call__(self, Z) -> np.ndarray:
        return self._scores[self.classify(Z)]


def g_c(archive: Archive, x, params: GcParams) -> float:
    """Score of a single raw-coordinate point."""
    z = archive.problem.normalize(x)
    return float(ClassificationConstraint(archive, params)(z)[0])


GcFunction = Callable[[np.ndarray], np.ndarray]


def constant_gc(value: float) -> GcFunction:
    """A g_c that returns ``value`` everywhere."""

    def gc(Z) -> np.ndarray:
        return np.full(np.atleast_2d(Z).shape[0], float(value))

    return gc
