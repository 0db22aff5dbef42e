"""Datasets behind the published figures.

Each figure is a list of :class:`Curve` objects; a curve knows how to
evaluate itself on its default grid (or any other grid) and returns plain
record dictionaries ready for CSV/JSON output.  Figures 2-4 and 7-9 are
time traces, 5-6 and 10-11 steady-state sweeps.

Caption parameters shared by all figures: gamma = 1, xi = 5, Delta T = 0,
and a dephasing slope eta = 0.005 so that chi = 0.01 T_m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import analytic
from .analytic import Regime
from .exceptions import ParameterError
from .model import DimerParams, effective_rates, eigensystem

__all__ = ["Curve", "FIGURE_IDS", "figure_curves", "time_records", "TIME_COLUMNS"]

XI = 5.0
GAMMA = 1.0
ETA = 0.005
T_MAX = 10.0
N_TIME = 501
N_STEADY = 201
PI = math.pi

TIME_COLUMNS = ("t", "P", "C", "s11", "s22", "s33", "s44", "re_s32", "im_s32")
FIGURE_IDS = tuple(range(2, 12))


def dimer(theta: float, t_mean: float, t_diff: float = 0.0) -> DimerParams:
    return DimerParams.from_mean_temperature(xi=XI, t_mean=t_mean, t_diff=t_diff,
                                             gamma=GAMMA, eta=ETA, theta=theta)


def time_records(params: DimerParams, times) -> list:
    """Closed-form time trace from |eg>: P, C and the eigenbasis moments."""
    times = np.asarray(times, dtype=float)
    eig = eigensystem(params)
    rates = effective_rates(params, eig)
    sigma = analytic.bloch_transient(analytic.eg_sigma(eig.theta), rates, eig, times)
    p = analytic.transfer_probability(times, params)
    c = analytic.concurrence_transient(times, params)
    cols = (times, p, c, sigma.s11, sigma.s22, sigma.s33, sigma.s44,
            np.real(sigma.s32), np.imag(sigma.s32))
    return [dict(zip(TIME_COLUMNS, map(float, row))) for row in zip(*cols)]


@dataclass
class Curve:
    """One line of a figure.

    ``value`` is the plotted closed form as a function of the x variable
    (time for transient figures, T_m or theta for steady-state ones).
    """

    figure: int
    label: str
    kind: str  # "time" or "steady"
    x_name: str
    grid: np.ndarray
    value: Callable
    params: Optional[DimerParams] = None
    metadata: dict = field(default_factory=dict)

    def records(self, grid=None) -> list:
        grid = self.grid if grid is None else np.asarray(grid, dtype=float)
        if self.kind == "time":
            rows = time_records(self.params, grid)
            values = np.atleast_1d(self.value(grid))
            for row, v in zip(rows, values):
                row["figure_value"] = float(v)
            return rows
        return [dict(zip((self.x_name, "P_ss", "C_ss", "figure_value"), map(float, row)))
                for row in self.value(grid)]

    @property
    def columns(self) -> tuple:
        if self.kind == "time":
            return TIME_COLUMNS + ("figure_value",)
        return (self.x_name, "P_ss", "C_ss", "figure_value")


def _time_curve(fig, label, params, fn, **meta) -> Curve:
    return Curve(fig, label, "time", "t", np.linspace(0.0, T_MAX, N_TIME),
                 lambda t, p=params: fn(t, p), params, dict(meta))


def _steady_vs_tm(fig, theta, label, which, **meta) -> Curve:
    def evaluate(tms, theta=theta):
        rows = []
        for tm in np.atleast_1d(tms):
            p = dimer(theta, float(tm))
            ps = analytic.steady_transfer_probability(p)
            cs = analytic.steady_concurrence(p)
            rows.append((tm, ps, cs, ps if which == "P" else cs))
        return rows
    return Curve(fig, label, "steady", "T_m", np.linspace(0.0, 100.0, N_STEADY),
                 evaluate, None, dict(theta=theta, **meta))


def _steady_vs_theta(fig, tm, label, which) -> Curve:
    def evaluate(thetas, tm=tm):
        rows = []
        for th in np.atleast_1d(thetas):
            p = dimer(float(th), tm)
            ps = analytic.steady_transfer_probability(p)
            cs = analytic.steady_concurrence(p)
            rows.append((th, ps, cs, ps if which == "P" else cs))
        return rows
    return Curve(fig, label, "steady", "theta", np.linspace(0.1 * PI, 0.9 * PI, N_STEADY),
                 evaluate, None, dict(T_m=tm))


def _limit(regime, quantity):
    fn = (analytic.transfer_probability_limit if quantity == "P"
          else analytic.concurrence_limit)
    return lambda t, p: fn(regime, t, p)


def figure_curves(fig_id: int) -> list:
    """Curves of figure ``fig_id`` (2-11) with caption parameters."""
    if fig_id == 2:
        return [_time_curve(2, f"Tm{tm:g}", dimer(PI / 2, tm), _limit(Regime.RESONANT, "P"),
                            quantity="P_res", T_m=tm) for tm in (0.1, 10.0, 100.0)]
    if fig_id == 3:
        return [_time_curve(3, f"theta{k:g}pi", dimer(k * PI, 100.0),
                            _limit(Regime.HIGH_TEMPERATURE, "P"),
                            quantity="P_htl", theta=k * PI, T_m=100.0)
                for k in (0.6, 0.8, 0.9)]
    if fig_id == 4:
        note = ("caption labels T_m=1 as the low-temperature limit; the P column is "
                "the general closed form at T_m=1, figure_value the T=0 limit form")
        return [_time_curve(4, f"theta{k:g}pi", dimer(k * PI, 1.0),
                            _limit(Regime.LOW_TEMPERATURE, "P"),
                            quantity="P_ltl", theta=k * PI, T_m=1.0, note=note)
                for k in (0.1, 0.4, 0.6, 0.9)]
    if fig_id == 5:
        note = "caption gives theta=0.5 without pi; used verbatim as 0.5 rad"
        return [_steady_vs_tm(5, 0.1 * PI, "theta0.1pi", "P", quantity="P_ss"),
                _steady_vs_tm(5, 0.5, "theta0.5rad", "P", quantity="P_ss", note=note),
                _steady_vs_tm(5, 0.9 * PI, "theta0.9pi", "P", quantity="P_ss")]
    if fig_id == 6:
        return [_steady_vs_theta(6, tm, f"Tm{tm:g}", "P") for tm in (0.1, 10.0, 100.0)]
    if fig_id == 7:
        return [_time_curve(7, f"Tm{tm:g}", dimer(PI / 2, tm), _limit(Regime.RESONANT, "C"),
                            quantity="C_res", T_m=tm) for tm in (0.1, 10.0, 100.0)]
    if fig_id == 8:
        return [_time_curve(8, f"theta{k:g}pi", dimer(k * PI, 100.0),
                            _limit(Regime.HIGH_TEMPERATURE, "C"),
                            quantity="C_htl", theta=k * PI, T_m=100.0)
                for k in (0.1, 0.3, 0.5)]
    if fig_id == 9:
        return [_time_curve(9, f"theta{k:g}pi", dimer(k * PI, 0.01),
                            _limit(Regime.LOW_TEMPERATURE, "C"),
                            quantity="C_ltl", theta=k * PI, T_m=0.01)
                for k in (0.1, 0.3, 0.5)]
    if fig_id == 10:
        note = "caption gives theta=0.3 without pi; used verbatim as 0.3 rad"
        return [_steady_vs_tm(10, 0.1 * PI, "theta0.1pi", "C", quantity="C_ss"),
                _steady_vs_tm(10, 0.3, "theta0.3rad", "C", quantity="C_ss", note=note),
                _steady_vs_tm(10, 0.5 * PI, "theta0.5pi", "C", quantity="C_ss")]
    if fig_id == 11:
        return [_steady_vs_theta(11, tm, f"Tm{tm:g}", "C") for tm in (0.1, 10.0, 100.0)]
    raise ParameterError(f"unknown figure id {fig_id}; expected one of {FIGURE_IDS}")
