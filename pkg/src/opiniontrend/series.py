"""Calendar-aligned daily value series with explicit missing days (NaN)."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np


@dataclass
class DailySeries:
    start_day: date
    values: np.ndarray  # float array, NaN marks a missing day

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end_day(self) -> date:
        return self.start_day + timedelta(days=len(self.values) - 1)

    def index_of(self, day: date) -> int:
        return (day - self.start_day).days

    def day_at(self, i: int) -> date:
        return self.start_day + timedelta(days=i)

    def value_on(self, day: date) -> float:
        i = self.index_of(day)
        if 0 <= i < len(self.values):
            return float(self.values[i])
        return math.nan

    def defined_days(self) -> list[date]:
        return [self.day_at(i) for i in np.nonzero(~np.isnan(self.values))[0]]

    def slice_until(self, day: date) -> "DailySeries":
        """Series truncated to days <= day (for causal access)."""
        i = self.index_of(day)
        if i < 0:
            return DailySeries(self.start_day, np.zeros(0))
        return DailySeries(self.start_day, self.values[: i + 1].copy())

    @classmethod
    def from_mapping(cls, mapping: dict[date, float]) -> "DailySeries":
        if not mapping:
            raise ValueError("empty mapping")
        start = min(mapping)
        end = max(mapping)
        n = (end - start).days + 1
        vals = np.full(n, np.nan)
        for d, v in mapping.items():
            vals[(d - start).days] = v
        return cls(start, vals)

    def to_mapping(self) -> dict[date, float]:
        return {
            self.day_at(i): float(v) for i, v in enumerate(self.values) if not math.isnan(v)
        }

    def write_csv(self, path, value_name: str = "value") -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["day", value_name])
            for i, v in enumerate(self.values):
                w.writerow([self.day_at(i).isoformat(), "" if math.isnan(v) else repr(float(v))])

    @classmethod
    def read_csv(cls, path) -> "DailySeries":
        mapping: dict[date, float] = {}
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            next(reader)  # header
            for row in reader:
                if not row:
                    continue
                mapping[date.fromisoformat(row[0])] = (
                    float(row[1]) if row[1] != "" else math.nan
                )
        return cls.from_mapping(mapping)
