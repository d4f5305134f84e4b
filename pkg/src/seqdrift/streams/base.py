from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional

import numpy as np


class StreamSample(NamedTuple):
    x: np.ndarray
    true_label: Optional[int]
    index: int


@dataclass
class StreamMeta:
    dim: int
    label_names: list[str] = field(default_factory=list)
    drift_points: list[int] = field(default_factory=list)


@dataclass
class Stream:
    """A finite block of samples held as arrays.

    ``labels`` is ``None`` for unlabeled streams.  ``concept`` holds the
    weight of the post-drift concept per sample (0 or 1, fractional for
    incremental drift) when the stream is synthetic.
    """

    X: np.ndarray
    labels: Optional[np.ndarray] = None
    concept: Optional[np.ndarray] = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        if self.X.ndim != 2:
            raise ValueError(f"stream samples must be 2-D, got shape {self.X.shape}")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if len(self.labels) != len(self.X):
                raise ValueError("labels and samples differ in length")

    def __len__(self) -> int:
        return len(self.X)

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    def __iter__(self) -> Iterator[StreamSample]:
        for i, x in enumerate(self.X):
            yield StreamSample(x, None if self.labels is None else int(self.labels[i]), i)
