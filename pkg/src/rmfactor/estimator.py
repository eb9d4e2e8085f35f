"""scikit-learn compatible wrapper around the factoring methods.

``Factorizer`` carries no learned state; ``fit`` only validates its
parameters, so it can sit in pipelines and parameter searches next to other
estimators.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_naturals
from .bench import factor_all
from .factor import DEFAULT_SAFETY_CAP, Method, MethodConfig, Verdict

_DEFAULT_M = {Method.RM: 120, Method.SM: 480}


class Factorizer(TransformerMixin, BaseEstimator):
    """Factor a column of integers with one of the Fermat-family methods.

    Parameters
    ----------
    method : {"rm", "sm", "lehman", "fermat", "trial"}, default="rm"
    m : int or None, default=None
        Multiplier. None picks 120 for RM and 480 for SM.
    sieve : bool, default=True
        Skip repeated multipliers in RM.
    depth : int or None, default=None
        Force the RM recursion depth.
    safety_cap : int, default=10**9
        Maximum square tests per number before giving up.
    n_jobs : int, default=1
        Worker processes used by ``predict`` and ``transform``.

    Attributes
    ----------
    config_ : MethodConfig
    outcomes_ : list of FactorOutcome
        Outcomes of the most recent ``predict``/``transform`` call.
    """

    def __init__(self, method="rm", m=None, sieve=True, depth=None,
                 safety_cap=DEFAULT_SAFETY_CAP, n_jobs=1):
        self.method = method
        self.m = m
        self.sieve = sieve
        self.depth = depth
        self.safety_cap = safety_cap
        self.n_jobs = n_jobs

    def fit(self, X=None, y=None):
        method = Method(self.method)
        m = self.m if self.m is not None else _DEFAULT_M.get(method, 1)
        self.config_ = MethodConfig(
            method=method,
            multiplier_m=m,
            sieve_enabled=self.sieve,
            depth_override=self.depth,
            safety_cap=self.safety_cap,
        )
        if X is not None:
            check_naturals(X)
        self.n_features_in_ = 1
        return self

    def _outcomes(self, X):
        check_is_fitted(self, "config_")
        ns = check_naturals(X)
        self.outcomes_ = factor_all(ns, self.config_, self.n_jobs)
        return self.outcomes_

    def predict(self, X):
        """Smallest found factor per input (object array; 0 where none was found)."""
        return np.array(
            [o.factor if o.verdict is Verdict.FACTORED else 0 for o in self._outcomes(X)],
            dtype=object,
        )

    def transform(self, X):
        """Square-test counts per input as an ``(n_samples, 1)`` int64 array."""
        its = [o.iterations for o in self._outcomes(X)]
        return np.asarray(its, dtype=np.int64).reshape(-1, 1)

    def score(self, X, y):
        """Fraction of inputs whose returned factor is one of the given pair ``y[i]``."""
        pred = self.predict(X)
        hits = sum(1 for f, pair in zip(pred, y) if f in tuple(int(v) for v in pair))
        return hits / len(pred)
