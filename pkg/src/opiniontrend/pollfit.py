"""Poll normalization, trailing-window smoothing, delayed affine alignment,
window sweeps, and the 7-day-ahead forecast with its two baselines.

All RMSE figures are expressed in percentage points of the poll share.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from .series import DailySeries


class InsufficientOverlapError(Exception):
    pass


class ForecastLeadError(Exception):
    pass


@dataclass
class PollSeries:
    """Two-candidate normalized poll shares; y_a + y_b = 1 by construction."""

    candidates: tuple[str, str]
    y_a: DailySeries

    def y_b(self) -> DailySeries:
        return DailySeries(self.y_a.start_day, 1.0 - self.y_a.values)


def load_polls_csv(path) -> PollSeries:
    """Read a poll CSV with columns day, share_a, share_b[, share_other] and
    normalize to the two-candidate share."""
    mapping: dict[date, float] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        names = tuple(h[len("share_"):] for h in header[1:3]) if len(header) >= 3 else ("a", "b")
        for row in reader:
            if not row:
                continue
            a, b = float(row[1]), float(row[2])
            if a + b <= 0:
                continue
            mapping[date.fromisoformat(row[0])] = a / (a + b)
    if not mapping:
        raise ValueError(f"{path}: no usable poll rows")
    return PollSeries(candidates=names, y_a=DailySeries.from_mapping(mapping))


def write_polls_csv(path, polls: PollSeries, share_other: float = 0.0) -> None:
    a_name, b_name = polls.candidates
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["day", f"share_{a_name}", f"share_{b_name}", "share_other"])
        scale = 1.0 - share_other
        for i, v in enumerate(polls.y_a.values):
            if math.isnan(v):
                continue
            w.writerow(
                [
                    polls.y_a.day_at(i).isoformat(),
                    repr(float(v * scale)),
                    repr(float((1.0 - v) * scale)),
                    repr(float(share_other)),
                ]
            )


def backward_moving_average(series: DailySeries, w: int) -> DailySeries:
    """Trailing mean over the window [i-w+1, i], taken over present samples
    only; no data from later days is used."""
    if w < 1:
        raise ValueError("window must be >= 1")
    vals = series.values
    out = np.full(len(vals), np.nan)
    for i in range(len(vals)):
        window = vals[max(0, i - w + 1) : i + 1]
        present = window[~np.isnan(window)]
        if len(present):
            out[i] = present.mean()
    return DailySeries(series.start_day, out)


def centered_moving_average(series: DailySeries, w: int) -> DailySeries:
    """Symmetric mean over [i-(w-1)/2, i+(w-1)/2]; w must be odd. Used to
    verify the half-window shift identity of the backward average."""
    if w < 1 or w % 2 == 0:
        raise ValueError("window must be odd and >= 1")
    h = (w - 1) // 2
    vals = series.values
    out = np.full(len(vals), np.nan)
    for i in range(len(vals)):
        window = vals[max(0, i - h) : i + h + 1]
        present = window[~np.isnan(window)]
        if len(present):
            out[i] = present.mean()
    return DailySeries(series.start_day, out)


def pearson_rmse(x, y) -> tuple[float | None, float]:
    """Pearson correlation (None when a side has zero variance) and RMSE in
    percentage points, over jointly defined entries."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) != len(y):
        raise ValueError("length mismatch")
    mask = ~(np.isnan(x) | np.isnan(y))
    x, y = x[mask], y[mask]
    if len(x) < 3:
        raise ValueError("need at least 3 overlapping defined points")
    rmse = float(np.sqrt(np.mean((x - y) ** 2)) * 100.0)
    sx = x - x.mean()
    sy = y - y.mean()
    denom = math.sqrt(float(np.dot(sx, sx) * np.dot(sy, sy)))
    if denom == 0.0:
        return None, rmse
    return float(np.dot(sx, sy) / denom), rmse


@dataclass
class AlignedFit:
    w: int
    A: float
    b: float
    t_d: int
    pearson_r: float | None
    rmse_pp: float
    n_days: int
    degenerate: bool = False

    @property
    def T_d(self) -> int:
        return self.t_d + (self.w - 1) // 2

    def complementary(self) -> tuple[float, float]:
        """(A, b) for the complementary candidate: A_b = A, b_b = 1 - b - A."""
        return self.A, 1.0 - self.b - self.A

    def as_dict(self) -> dict:
        return {
            "w": self.w, "A": self.A, "b": self.b, "t_d": self.t_d, "T_d": self.T_d,
            "pearson_r": self.pearson_r, "rmse_pp": self.rmse_pp,
            "n_days": self.n_days, "degenerate": self.degenerate,
        }


def _aligned_pairs(smoothed: DailySeries, polls_y: DailySeries, t_d: int):
    """Arrays (x, y) of smoothed twitter at day i - t_d against polls at i."""
    xs, ys = [], []
    for i in range(len(polls_y)):
        y = polls_y.values[i]
        if math.isnan(y):
            continue
        day = polls_y.day_at(i) - timedelta(days=t_d)
        x = smoothed.value_on(day)
        if math.isnan(x):
            continue
        xs.append(x)
        ys.append(y)
    return np.array(xs), np.array(ys)


def fit_affine_delay(
    smoothed: DailySeries,
    polls_y: DailySeries,
    w: int,
    t_d_range=range(0, 31),
    min_overlap: int = 30,
) -> AlignedFit:
    """Closed-form least squares of polls against the delayed smoothed ratio
    for every integer delay in range; keeps the delay with the smallest MSE.

    A constant twitter series is rank-deficient: the fit degenerates to
    (A=0, b=mean) and is flagged.
    """
    best: AlignedFit | None = None
    best_mse = math.inf
    for t_d in t_d_range:
        x, y = _aligned_pairs(smoothed, polls_y, t_d)
        if len(x) < min_overlap:
            continue
        var_x = float(np.var(x))
        degenerate = var_x == 0.0
        if degenerate:
            a_hat = 0.0
            b_hat = float(np.mean(y))
        else:
            a_hat = float(np.cov(x, y, bias=True)[0, 1] / var_x)
            b_hat = float(np.mean(y) - a_hat * np.mean(x))
        resid = y - (a_hat * x + b_hat)
        mse = float(np.mean(resid**2))
        if mse < best_mse:
            r, _ = pearson_rmse(x, y)
            best = AlignedFit(
                w=w,
                A=a_hat,
                b=b_hat,
                t_d=t_d,
                pearson_r=r,
                rmse_pp=float(np.sqrt(mse) * 100.0),
                n_days=len(x),
                degenerate=degenerate,
            )
            best_mse = mse
    if best is None:
        raise InsufficientOverlapError(
            f"no delay in {t_d_range!r} leaves >= {min_overlap} overlapping days"
        )
    return best


def fit_smoothed(
    twitter_raw: DailySeries,
    polls_y: DailySeries,
    w: int,
    t_d_range=range(0, 31),
    min_overlap: int = 30,
) -> AlignedFit:
    """Smooth the raw daily ratio with the backward average, then fit."""
    return fit_affine_delay(
        backward_moving_average(twitter_raw, w), polls_y, w, t_d_range, min_overlap
    )


def sweep_window(
    twitter_raw: DailySeries,
    polls_y: DailySeries,
    w_grid,
    t_d_range=range(0, 31),
    min_overlap: int = 30,
) -> list[AlignedFit]:
    fits = []
    for w in w_grid:
        if w < 1 or w % 2 == 0:
            raise ValueError(f"window lengths must be odd positive integers, got {w}")
        fits.append(fit_smoothed(twitter_raw, polls_y, w, t_d_range, min_overlap))
    return fits


def write_sweep_csv(path, fits) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["w", "A", "b", "t_d", "T_d", "pearson_r", "rmse_pp", "n_days"])
        for f in fits:
            w.writerow([f.w, repr(f.A), repr(f.b), f.t_d, f.T_d,
                        "" if f.pearson_r is None else repr(f.pearson_r),
                        repr(f.rmse_pp), f.n_days])


def baseline_linear_extrapolation(
    polls_y: DailySeries, h: int, window: int = 21
) -> DailySeries:
    """Per-day OLS line over the trailing ``window`` days of the polls,
    evaluated ``h`` days ahead; the prediction for target day i+h uses poll
    data up to day i only."""
    n = len(polls_y)
    preds: dict[date, float] = {}
    for i in range(n):
        lo = max(0, i - window + 1)
        xs, ys = [], []
        for j in range(lo, i + 1):
            v = polls_y.values[j]
            if not math.isnan(v):
                xs.append(j)
                ys.append(v)
        if len(xs) < 2:
            continue
        xs_arr = np.array(xs, dtype=float)
        ys_arr = np.array(ys, dtype=float)
        var = float(np.var(xs_arr))
        if var == 0.0:
            slope = 0.0
        else:
            slope = float(np.cov(xs_arr, ys_arr, bias=True)[0, 1] / var)
        intercept = float(ys_arr.mean() - slope * xs_arr.mean())
        preds[polls_y.day_at(i + h)] = slope * (i + h) + intercept
    if not preds:
        raise ValueError("not enough poll history for linear extrapolation")
    return DailySeries.from_mapping(preds)


@dataclass
class ForecastReport:
    horizon: int
    days: list[date]
    actual: list[float]
    pred_twitter: list[float]
    pred_linear: list[float]
    pred_constant: list[float]
    rmse_twitter: float
    rmse_linear: float
    rmse_constant: float

    def as_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "rmse_twitter_pp": self.rmse_twitter,
            "rmse_linear_pp": self.rmse_linear,
            "rmse_constant_pp": self.rmse_constant,
            "n_days": len(self.days),
        }

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["day", "actual", "pred_twitter", "pred_linear", "pred_constant"])
            for i, d in enumerate(self.days):
                w.writerow([d.isoformat(), repr(self.actual[i]), repr(self.pred_twitter[i]),
                            repr(self.pred_linear[i]), repr(self.pred_constant[i])])

    def save_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.as_dict(), fh, sort_keys=True, indent=1)


def forecast(
    twitter_raw: DailySeries,
    polls_y: DailySeries,
    fit: AlignedFit,
    horizon: int,
    train_until: date,
    linear_window: int = 21,
) -> ForecastReport:
    """Predict polls ``horizon`` days ahead with fit parameters frozen on the
    training period (days <= train_until).

    For target day j the issue day is i = j - horizon; the twitter path reads
    raw data up to day i only (enforced by slicing), the linear baseline
    extrapolates the trailing poll window at day i, and the constant baseline
    is the training-period poll mean.
    """
    if horizon > fit.t_d:
        raise ForecastLeadError(
            f"horizon {horizon} exceeds available lead: t_d = T_d - (w-1)/2 = {fit.t_d}; "
            "the smoothed twitter value needed would lie after the issue day"
        )
    train_vals = [
        v
        for i, v in enumerate(polls_y.values)
        if not math.isnan(v) and polls_y.day_at(i) <= train_until
    ]
    if not train_vals:
        raise ValueError("no poll data in the training period")
    const_pred = float(np.mean(train_vals))
    linear = baseline_linear_extrapolation(polls_y, horizon, window=linear_window)

    days: list[date] = []
    actual, pred_tw, pred_lin, pred_const = [], [], [], []
    for i in range(len(polls_y)):
        target_day = polls_y.day_at(i)
        if target_day <= train_until:
            continue
        y = polls_y.values[i]
        if math.isnan(y):
            continue
        issue_day = target_day - timedelta(days=horizon)
        causal = twitter_raw.slice_until(issue_day)
        if len(causal) == 0:
            continue
        smoothed = backward_moving_average(causal, fit.w)
        x = smoothed.value_on(target_day - timedelta(days=fit.t_d))
        lin = linear.value_on(target_day)
        if math.isnan(x) or math.isnan(lin):
            continue
        days.append(target_day)
        actual.append(float(y))
        pred_tw.append(fit.A * x + fit.b)
        pred_lin.append(float(lin))
        pred_const.append(const_pred)
    if not days:
        raise InsufficientOverlapError("no forecastable days in the test period")

    def rmse(pred):
        a = np.array(actual)
        p = np.array(pred)
        return float(np.sqrt(np.mean((a - p) ** 2)) * 100.0)

    return ForecastReport(
        horizon=horizon,
        days=days,
        actual=actual,
        pred_twitter=pred_tw,
        pred_linear=pred_lin,
        pred_constant=pred_const,
        rmse_twitter=rmse(pred_tw),
        rmse_linear=rmse(pred_lin),
        rmse_constant=rmse(pred_const),
    )
