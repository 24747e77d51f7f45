"""scikit-learn style front end.

An approval profile is an ``(n_voters, n_candidates)`` 0/1 matrix, so picking
a justifying group is column selection: the selectors below follow the
``SelectorMixin`` contract (``fit``, ``get_support``, ``transform``) and work
inside pipelines and with ``get_params``/``set_params``/``clone``.
"""

from __future__ import annotations

from numbers import Integral

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .committee import FillPolicy, committee_both_genders, extend_to_committee, imbalance, min_imbalance_heuristic
from .election import ApprovalElection, GenderAssignment, is_justifying
from .exact import DEFAULT_NODE_BUDGET, exact_min_justifying, quasi_poly_min
from .greedy import greedy_candidate, greedy_cc

METHODS = {
    "greedy_cc": greedy_cc,
    "greedy_candidate": greedy_candidate,
    "quasi": quasi_poly_min,
}


def check_approval_matrix(X) -> np.ndarray:
    """Validate an approval matrix and return it as a boolean array.

    Entries must be 0/1 (or booleans); at least one voter and one candidate.
    """
    X = check_array(X, dtype=None, ensure_2d=True, ensure_min_samples=1, ensure_min_features=1)
    if X.dtype != bool:
        if not np.isin(X, (0, 1)).all():
            raise ValueError("approval matrix entries must be 0 or 1")
        X = X.astype(bool)
    return X


def check_committee_size(k, n_candidates: int) -> int:
    if not isinstance(k, Integral) or isinstance(k, bool):
        raise TypeError(f"k must be an integer, got {type(k).__name__}")
    if not 1 <= k <= n_candidates:
        raise ValueError(f"k must lie in [1, {n_candidates}], got {k}")
    return int(k)


def _genders(genders, m: int) -> GenderAssignment | None:
    if genders is None:
        return None
    if not isinstance(genders, str):
        genders = "".join(genders)
    if len(genders) != m:
        raise ValueError(f"expected {m} gender labels, got {len(genders)}")
    return GenderAssignment(genders)


class JustifyingGroupSelector(SelectorMixin, BaseEstimator):
    """Select a small n/k-justifying group of candidates (columns).

    Parameters
    ----------
    k : int
        Target committee size defining the ``ceil(n/k)`` cohesion threshold.
    method : {"greedy_candidate", "greedy_cc", "exact", "quasi"}
        Algorithm used in :meth:`fit`.
    node_budget : int
        Search budget when ``method="exact"``.

    Attributes
    ----------
    group_ : tuple of int
        Selected candidate indices.
    election_ : ApprovalElection
        The profile seen in :meth:`fit`.
    n_features_in_ : int
    """

    def __init__(self, k=10, method="greedy_candidate", node_budget=DEFAULT_NODE_BUDGET):
        self.k = k
        self.method = method
        self.node_budget = node_budget

    def fit(self, X, y=None):
        X = check_approval_matrix(X)
        k = check_committee_size(self.k, X.shape[1])
        e = ApprovalElection.from_matrix(X, k)
        if self.method == "exact":
            group = exact_min_justifying(e, self.node_budget)
        elif self.method in METHODS:
            group = METHODS[self.method](e)
        else:
            raise ValueError(f"unknown method {self.method!r}")
        self.election_ = e
        self.group_ = group
        self.n_features_in_ = X.shape[1]
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "group_")
        mask = np.zeros(self.n_features_in_, dtype=bool)
        mask[list(self.group_)] = True
        return mask

    def score(self, X, y=None) -> float:
        """1.0 if the fitted group is justifying for ``X`` (same ``k``), else 0.0."""
        check_is_fitted(self, "group_")
        X = check_approval_matrix(X)
        e = ApprovalElection.from_matrix(X, check_committee_size(self.k, X.shape[1]))
        return float(is_justifying(e, self.group_))

    def _more_tags(self):
        return {"requires_y": False}


class JRCommitteeSelector(SelectorMixin, BaseEstimator):
    """Select a size-``k`` JR committee, optionally gender-aware.

    ``strategy="extend"`` pads the smaller greedy justifying group with the
    lowest-index candidates; ``"min_imbalance"`` pads it to minimize gender
    imbalance; ``"both_genders"`` guarantees one member of each gender.
    ``genders`` is a length-``m`` sequence of ``'M'``/``'F'``.
    """

    def __init__(self, k=10, strategy="extend", genders=None):
        self.k = k
        self.strategy = strategy
        self.genders = genders

    def fit(self, X, y=None):
        X = check_approval_matrix(X)
        k = check_committee_size(self.k, X.shape[1])
        genders = _genders(self.genders, X.shape[1])
        e = ApprovalElection.from_matrix(X, k, genders)
        if self.strategy == "extend":
            by_cc, by_cand = greedy_cc(e), greedy_candidate(e)
            g = by_cc if len(by_cc) < len(by_cand) else by_cand
            committee = extend_to_committee(e, g, FillPolicy.LOWEST_INDEX)
        elif self.strategy == "min_imbalance":
            committee = min_imbalance_heuristic(e, genders)
        elif self.strategy == "both_genders":
            committee = committee_both_genders(e, genders)
        else:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        self.election_ = e
        self.committee_ = committee
        self.imbalance_ = imbalance(committee, genders) if genders is not None else None
        self.n_features_in_ = X.shape[1]
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "committee_")
        mask = np.zeros(self.n_features_in_, dtype=bool)
        mask[list(self.committee_)] = True
        return mask
