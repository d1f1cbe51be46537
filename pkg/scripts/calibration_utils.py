"""
calibration_utils.py

Voltage → force calibration: the weight-set collection protocol, polynomial
least squares on a Vandermonde design matrix, shuffled k-fold
cross-validation and order selection by mean testing RMSE.

Author: Satvik Praveen
Project: TactileSensePro
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .exceptions import DataError, SingularFitError, UnderdeterminedFitError, UsageError
from .units_utils import check_finite, gw_to_newtons, rmse

logger = logging.getLogger(__name__)

SIGNAL_UNITS = ("volts", "adc_counts")
SELECTION_TOLERANCE = 1e-9

SeedLike = Union[None, int, np.random.Generator]


# ✅ Data types
@dataclass(frozen=True)
class PolynomialModel:
    """Order-n force model f(v) = a0 + a1·v + … + an·vⁿ."""

    coefficients: Tuple[float, ...]
    signal_units: str = "volts"
    metadata: Dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if len(coeffs) < 2:
            raise UsageError("❌ a polynomial model needs order >= 1 (at least 2 coefficients)")
        if not np.all(np.isfinite(coeffs)):
            raise DataError("❌ model coefficients must be finite")
        if self.signal_units not in SIGNAL_UNITS:
            raise UsageError(f"❌ unknown signal units {self.signal_units!r}")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1


@dataclass(frozen=True)
class CalibrationDataset:
    """(signal, force) pairs with optional fold assignment and source weights."""

    signals: np.ndarray
    forces: np.ndarray
    fold_ids: Optional[np.ndarray] = None
    weights_gw: Optional[np.ndarray] = None

    def __post_init__(self):
        signals = check_finite(self.signals, "signal").ravel()
        forces = check_finite(self.forces, "force").ravel()
        if signals.size != forces.size:
            raise DataError("❌ signals and forces must have the same length")
        if signals.size == 0:
            raise DataError("❌ a calibration dataset needs at least one sample")
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "forces", forces)
        if self.weights_gw is not None:
            object.__setattr__(self, "weights_gw", np.asarray(self.weights_gw, dtype=np.float64))

    def __len__(self) -> int:
        return int(self.signals.size)

    def with_folds(self, k: int = 5, seed: SeedLike = None) -> "CalibrationDataset":
        """Copy of the dataset carrying a shuffled k-fold assignment."""
        return replace(self, fold_ids=kfold_split(self, k, seed))

    def to_frame(self) -> pd.DataFrame:
        df = pd.DataFrame({"v": self.signals, "force_n": self.forces})
        if self.weights_gw is not None:
            df["weight_gw"] = self.weights_gw
        return df


@dataclass(frozen=True)
class FitReport:
    """Per-order mean train/test RMSE over all repeats and folds."""

    orders: Tuple[int, ...]
    train_rmse: np.ndarray
    test_rmse: np.ndarray
    selected_order: int
    repeats: int
    k: int
    seed: SeedLike = None
    strict_paper_cv: bool = False
    models: Dict[int, PolynomialModel] = field(default_factory=dict)

    @property
    def model(self) -> Optional[PolynomialModel]:
        """Full-dataset fit at the selected order."""
        return self.models.get(self.selected_order)

    def to_frame(self) -> pd.DataFrame:
        """One row per order: order, full-data formula, mean train/test RMSE."""
        return pd.DataFrame(
            {
                "order": list(self.orders),
                "model": [
                    describe_model(self.models[o]) if o in self.models else ""
                    for o in self.orders
                ],
                "train_rmse_n": self.train_rmse,
                "test_rmse_n": self.test_rmse,
                "selected": [o == self.selected_order for o in self.orders],
            }
        )


# ✅ Published models and their (train, test) RMSE
PUBLISHED_MODELS: Dict[int, PolynomialModel] = {
    1: PolynomialModel((-0.0650, 0.0889)),
    2: PolynomialModel((-0.0301, 0.0737, 0.0012)),
    3: PolynomialModel((0.0653, -0.0047, 0.0169, -0.000863)),
    4: PolynomialModel((0.0924, -0.0405, 0.0295, -0.0025, 0.0000675)),
    5: PolynomialModel((0.0603, 0.0189, -0.0015, 0.0041, -0.000539, 0.00002)),
}
PUBLISHED_ERRORS: Dict[int, Tuple[float, float]] = {
    1: (0.0985, 0.1010),
    2: (0.0974, 0.1028),
    3: (0.0950, 0.0984),
    4: (0.0945, 0.1005),
    5: (0.0944, 0.1014),
}


# ✅ Collection protocol
def protocol_weights() -> List[Tuple[float, int]]:
    """
    Weight set and repetition counts of the collection protocol (100 samples).

    Nine weights are measured 8 times, 20 and 100 gw 9 times, 50 gw 10 times.
    """
    counts = {5: 8, 10: 8, 20: 9, 25: 8, 35: 8, 45: 8, 50: 10, 55: 8, 65: 8, 75: 8, 85: 8, 100: 9}
    return [(float(w), n) for w, n in counts.items()]


def protocol_forces() -> np.ndarray:
    """The 100 protocol forces in newtons, weight by weight."""
    weights = np.repeat([w for w, _ in protocol_weights()], [n for _, n in protocol_weights()])
    return gw_to_newtons(weights)


def synthetic_dataset(
    model: PolynomialModel,
    signals: Sequence[float],
    noise_sigma: float = 0.0,
    seed: SeedLike = None,
) -> CalibrationDataset:
    """
    Dataset whose forces are ``model`` at ``signals`` plus N(0, σ) noise.
    """
    if noise_sigma < 0:
        raise UsageError("❌ noise_sigma must be >= 0")
    v = check_finite(signals, "signal")
    forces = np.atleast_1d(evaluate_model(model, v))
    if noise_sigma > 0:
        forces = forces + np.random.default_rng(seed).normal(0.0, noise_sigma, size=forces.shape)
    return CalibrationDataset(signals=v, forces=forces)


# ✅ Least squares
def build_design_matrix(signals: Sequence[float], order: int) -> np.ndarray:
    """
    Vandermonde matrix with rows [1, v, v², …, vⁿ].

    Any number of rows is accepted; solvability is checked by
    :func:`least_squares_fit`.
    """
    if order < 1:
        raise UsageError(f"❌ polynomial order must be >= 1, got {order}")
    v = np.atleast_1d(check_finite(signals, "signal")).ravel()
    return np.vander(v, order + 1, increasing=True)


def least_squares_fit(A: np.ndarray, y: Sequence[float]) -> np.ndarray:
    """
    Minimise ‖Ax − y‖₂ with an orthogonal-factorisation solve.

    Columns are equilibrated before the solve so high orders stay well
    conditioned; the solution equals (AᵀA)⁻¹Aᵀy.

    Raises
    ------
    UnderdeterminedFitError
        If A has fewer rows than columns.
    SingularFitError
        If A does not have full column rank.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64).ravel()
    order = A.shape[1] - 1
    if A.shape[0] != y.size:
        raise UsageError(f"❌ design matrix has {A.shape[0]} rows but y has {y.size}")
    if A.shape[0] < A.shape[1]:
        raise UnderdeterminedFitError(
            f"❌ order {order} needs at least {order + 1} samples, got {A.shape[0]}"
        )
    scale = np.linalg.norm(A, axis=0)
    if np.any(scale == 0):
        raise SingularFitError(f"❌ order {order} fit has an all-zero column", order=order)
    As = A / scale
    if np.linalg.matrix_rank(As) < A.shape[1]:
        raise SingularFitError(
            f"❌ order {order} fit is rank deficient: need {order + 1} distinct signal values",
            order=order,
        )
    try:
        xs, *_ = np.linalg.lstsq(As, y, rcond=None)
    except np.linalg.LinAlgError as exc:
        raise SingularFitError(f"❌ order {order} fit failed: {exc}", order=order)
    return xs / scale


def fit_polynomial(
    signals: Sequence[float],
    forces: Sequence[float],
    order: int,
    signal_units: str = "volts",
) -> PolynomialModel:
    """Fits an order-``order`` model to (signal, force) pairs."""
    A = build_design_matrix(signals, order)
    return PolynomialModel(tuple(least_squares_fit(A, forces)), signal_units=signal_units)


def evaluate_model(model: PolynomialModel, v):
    """Horner evaluation of Σ a_i vⁱ."""
    v = np.asarray(v, dtype=np.float64)
    out = np.zeros_like(v)
    for a in reversed(model.coefficients):
        out = out * v + a
    return float(out) if out.ndim == 0 else out


def describe_model(model: PolynomialModel, digits: int = 4) -> str:
    """Formula string with ``digits`` significant digits, e.g. ``f=-0.065+0.0889v``."""
    terms = []
    for i, a in enumerate(model.coefficients):
        power = "" if i == 0 else ("v" if i == 1 else f"v^{i}")
        text = np.format_float_positional(a, precision=digits, fractional=False, trim="-")
        if terms and not text.startswith("-"):
            text = "+" + text
        terms.append(text + power)
    return "f=" + "".join(terms)


# ✅ Cross-validation
def kfold_split(
    dataset: Union[int, CalibrationDataset], k: int = 5, seed: SeedLike = None
) -> np.ndarray:
    """
    Shuffled fold assignment: array of fold ids in [0, k), sizes differ by <= 1.

    Parameters
    ----------
    dataset : CalibrationDataset or int
        The dataset to split, or just its sample count.

    Raises
    ------
    UsageError
        If k < 2 or there are fewer samples than folds.
    """
    n_samples = len(dataset) if isinstance(dataset, CalibrationDataset) else int(dataset)
    if k < 2:
        raise UsageError(f"❌ k-fold needs k >= 2, got {k}")
    if n_samples < k:
        raise UsageError(f"❌ cannot split {n_samples} samples into {k} folds")
    perm = np.random.default_rng(seed).permutation(n_samples)
    folds = np.empty(n_samples, dtype=np.int64)
    folds[perm] = np.arange(n_samples) % k
    return folds


def _parse_orders(orders: Sequence[int]) -> Tuple[int, ...]:
    orders = tuple(sorted(set(int(o) for o in orders)))
    if not orders or orders[0] < 1:
        raise UsageError(f"❌ orders must be positive integers, got {orders}")
    return orders


def cross_validate(
    dataset: CalibrationDataset,
    orders: Sequence[int] = (1, 2, 3, 4, 5),
    repeats: int = 20,
    k: int = 5,
    seed: SeedLike = None,
    strict_paper_cv: bool = False,
    signal_units: str = "volts",
) -> FitReport:
    """
    Repeated k-fold cross-validation over polynomial orders.

    Each repeat reshuffles the folds; the same split is shared by every order
    so training errors stay nested. With ``strict_paper_cv`` only fold 0 is
    used as the test fold, otherwise every fold is rotated. The selected order
    (lowest order within 1e-9 N of the minimum mean test RMSE) is refit on the
    full dataset and attached as ``FitReport.model``.
    """
    orders = _parse_orders(orders)
    if repeats < 1:
        raise UsageError(f"❌ repeats must be >= 1, got {repeats}")
    too_high = [o for o in orders if o + 1 > len(dataset)]
    if too_high:
        raise UnderdeterminedFitError(
            f"❌ {len(dataset)} samples cannot determine order(s) {too_high}"
        )

    rng = np.random.default_rng(seed)
    train = {o: [] for o in orders}
    test = {o: [] for o in orders}
    for r in range(repeats):
        folds = dataset.with_folds(k, rng).fold_ids
        test_folds = [0] if strict_paper_cv else range(k)
        for fold in test_folds:
            is_test = folds == fold
            v_tr, f_tr = dataset.signals[~is_test], dataset.forces[~is_test]
            v_te, f_te = dataset.signals[is_test], dataset.forces[is_test]
            for o in orders:
                try:
                    model = fit_polynomial(v_tr, f_tr, o, signal_units)
                except SingularFitError as exc:
                    raise SingularFitError(f"{exc} (repeat {r}, test fold {fold})", order=o) from exc
                except UnderdeterminedFitError as exc:
                    raise UnderdeterminedFitError(f"{exc} (repeat {r}, test fold {fold})") from exc
                train[o].append(rmse(evaluate_model(model, v_tr), f_tr))
                test[o].append(rmse(evaluate_model(model, v_te), f_te))
                logger.debug("repeat %d fold %d order %d: train %.5f test %.5f",
                             r, fold, o, train[o][-1], test[o][-1])

    train_mean = np.array([np.mean(train[o]) for o in orders])
    test_mean = np.array([np.mean(test[o]) for o in orders])
    best = next(o for o, e in zip(orders, test_mean) if e <= test_mean.min() + SELECTION_TOLERANCE)
    for o, tr, te in zip(orders, train_mean, test_mean):
        logger.info("order %d: mean train RMSE %.4f N, mean test RMSE %.4f N", o, tr, te)
    logger.info("selected order %d", best)

    models = {o: fit_polynomial(dataset.signals, dataset.forces, o, signal_units) for o in orders}
    return FitReport(
        orders=orders,
        train_rmse=train_mean,
        test_rmse=test_mean,
        selected_order=best,
        repeats=repeats,
        k=k,
        seed=seed,
        strict_paper_cv=strict_paper_cv,
        models=models,
    )


def format_fit_report(report: FitReport) -> str:
    """Plain-text report: one row per order with its full-data formula."""
    df = report.to_frame()
    df["selected"] = df["selected"].map({True: "*", False: ""})
    header = (
        f"k={report.k} repeats={report.repeats} seed={report.seed} "
        f"strict_paper_cv={report.strict_paper_cv}"
    )
    table = df.to_string(index=False, float_format="{:.4f}".format)
    return f"{header}\n{table}\n"
