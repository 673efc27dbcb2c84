"""scikit-learn style wrappers: ``fit`` takes a parity-check matrix, ``predict`` takes LLR rows."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .codes import ConvCode, QcCode
from .cone import build_polytope
from .lpdecode import lp_decode
from .mpi import DEFAULT_CLIP, DEFAULT_MAX_ITER, TannerGraph, decode_batch, sliding_window_decode


def _as_matrix(H) -> np.ndarray:
    if isinstance(H, QcCode):
        return H.H
    H = np.asarray(H, dtype=np.uint8)
    if H.ndim != 2:
        raise ValueError("parity-check matrix must be 2-D")
    if not np.isin(H, (0, 1)).all():
        raise ValueError("parity-check matrix must be binary")
    return H


class _BlockDecoder(BaseEstimator):
    def fit(self, H, y=None):
        self.H_ = _as_matrix(H)
        self.n_features_in_ = self.H_.shape[1]
        self._setup()
        return self

    def _setup(self):
        pass

    def _check(self, llr) -> np.ndarray:
        if not hasattr(self, "H_"):
            raise RuntimeError(f"{type(self).__name__} is not fitted; call fit(H) first")
        X = np.atleast_2d(np.asarray(llr, dtype=float))
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} LLRs per row, got {X.shape[1]}")
        return X

    def score(self, llr, codewords) -> float:
        """Fraction of rows decoded exactly to the given codewords."""
        pred = self.predict(llr)
        return float(np.mean((pred == np.atleast_2d(codewords)).all(axis=1)))


class _MessagePassing(_BlockDecoder):
    algo = "sp"

    def _setup(self):
        self.graph_ = TannerGraph(self.H_)

    def predict(self, llr) -> np.ndarray:
        X = self._check(llr)
        hard, self.iterations_, self.converged_, _ = decode_batch(self.graph_, X, self.algo, self.max_iter,
                                                                  self.clip)
        return hard


class SumProductDecoder(_MessagePassing):
    algo = "sp"

    def __init__(self, max_iter: int = DEFAULT_MAX_ITER, clip: float = DEFAULT_CLIP):
        self.max_iter = max_iter
        self.clip = clip


class MinSumDecoder(_MessagePassing):
    algo = "ms"

    def __init__(self, max_iter: int = DEFAULT_MAX_ITER, clip: float = np.inf):
        self.max_iter = max_iter
        self.clip = clip


class LPDecoder(_BlockDecoder):
    """Exact LP decoder; ``predict`` returns hard decisions, ``decode`` the full results."""

    def __init__(self, precision=None, lexicographic: bool = True):
        self.precision = precision
        self.lexicographic = lexicographic

    def _setup(self):
        self.polytope_ = build_polytope(self.H_)

    def decode(self, llr) -> list:
        X = self._check(llr)
        return [lp_decode(self.H_, row, self.precision, self.polytope_, self.lexicographic) for row in X]

    def predict(self, llr) -> np.ndarray:
        res = self.decode(llr)
        self.integral_ = np.array([r.integral for r in res])
        return np.array([r.hard for r in res])


class SlidingWindowDecoder(BaseEstimator):
    """``fit`` takes a :class:`ConvCode`; ``predict`` takes terminated LLR streams."""

    def __init__(self, window=None, max_iter: int = DEFAULT_MAX_ITER, algo: str = "sp",
                 clip: float = DEFAULT_CLIP):
        self.window = window
        self.max_iter = max_iter
        self.algo = algo
        self.clip = clip

    def fit(self, code, y=None):
        if not isinstance(code, ConvCode):
            raise ValueError("SlidingWindowDecoder.fit expects a ConvCode")
        self.code_ = code
        self.window_ = self.window or 2 * (code.ms + 1)
        return self

    def predict(self, llr) -> np.ndarray:
        if not hasattr(self, "code_"):
            raise RuntimeError("SlidingWindowDecoder is not fitted; call fit(code) first")
        out = sliding_window_decode(self.code_, llr, self.window_, self.max_iter, self.algo, self.clip)
        self.block_converged_ = out.block_converged
        return out.hard
