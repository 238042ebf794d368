"""Closed-form reference spectra and autocorrelations.

Where a model's diffraction decomposes into a known pure point part and a
known absolutely continuous density, both are collected in an
AnalyticSpectrum.  Singular continuous components carry no closed form and
are assessed only through size scaling (see analysis.peak_scaling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .sequences import TwoLetterWeights

__all__ = [
    "AnalyticSpectrum",
    "analytic_bernoulli_spectrum",
    "analytic_rs_spectrum",
    "analytic_ising_pp",
    "ice_bragg",
    "bernoulli_ice_background",
    "ice_autocorrelation_analytic",
    "analytic_ice_spectrum",
]


@dataclass(frozen=True)
class AnalyticSpectrum:
    """Reference diffraction: Bragg weights plus an optional diffuse density.

    `pp` maps wavevectors inside one period of the Bragg lattice to their
    weights; `period` is the repeat per axis (Bragg peaks sit on the
    wavevectors pp-key + period * integers).  `ac` is the density g(k) of
    the absolutely continuous part, or None when no closed form exists.
    """

    model: str
    dimension: int
    pp: dict
    period: tuple
    ac: Callable | None = None

    def bragg_weight(self, k) -> float:
        """Weight of the Bragg peak at wavevector k (0 when k is not a peak)."""
        kk = np.atleast_1d(np.asarray(k, dtype=float))
        reduced = tuple(np.round(np.mod(kk, self.period), 9) % self.period)
        for key, weight in self.pp.items():
            key_arr = np.atleast_1d(np.asarray(key, dtype=float))
            if np.allclose(reduced, np.mod(key_arr, self.period), atol=1e-9):
                return float(weight)
        return 0.0

    def ac_value(self, k) -> float:
        if self.ac is None:
            raise ValueError(f"model '{self.model}' has no closed-form background")
        return float(self.ac(np.asarray(k, dtype=float)))


def analytic_bernoulli_spectrum(w: TwoLetterWeights) -> AnalyticSpectrum:
    """Lattice gas with i.i.d. two-valued weights: uniform Bragg comb on the
    integers with weight |<h>|^2, plus a flat background Var(h)."""
    pp_weight = abs(w.mean) ** 2
    var = w.variance
    return AnalyticSpectrum(
        model="bernoulli",
        dimension=1,
        pp={0.0: pp_weight},
        period=(1.0,),
        ac=lambda k: var,
    )


def analytic_rs_spectrum() -> AnalyticSpectrum:
    """Rudin-Shapiro chain with 0/1 weights: Bragg weight 1/4 on the integers
    and a flat background 1/4.

    Identical to analytic_bernoulli_spectrum(TwoLetterWeights(1, 0, 1/2, 1/2)):
    the deterministic chain and the coin-flip chain are homometric.
    """
    return AnalyticSpectrum(
        model="rudin-shapiro",
        dimension=1,
        pp={0.0: 0.25},
        period=(1.0,),
        ac=lambda k: 0.25,
    )


def analytic_ising_pp(below_tc: bool, rho: float = 0.5) -> AnalyticSpectrum:
    """Pure point part of the Ising lattice gas: weight 1/4 on the integer
    lattice at and above the transition, rho^2 below it.

    The diffuse background of this model is absolutely continuous but has no
    simple closed form here, so ac is None.
    """
    if below_tc:
        if not 0.5 <= rho <= 1.0:
            raise ValueError("below the transition rho must lie in [1/2, 1]")
        weight = rho * rho
    else:
        weight = 0.25
    return AnalyticSpectrum(
        model="ising-lattice-gas",
        dimension=2,
        pp={(0.0, 0.0): weight},
        period=(1.0, 1.0),
        ac=None,
    )


def ice_bragg(k, h_o: float, h_h: float) -> float:
    """Bragg weight of the square-ice / independent-hydrogen models at integer k.

    Both models share the same averaged occupations, hence the same pure
    point part: (h_O + h_H (cos(2 pi k1 / 3) + cos(2 pi k2 / 3)))^2.  For
    h_O = h_H this vanishes at (1,1), (1,2), (2,1), (2,2) modulo 3.
    """
    k1, k2 = (int(round(c)) for c in np.atleast_1d(np.asarray(k)).ravel())
    form = h_o + h_h * (math.cos(2 * math.pi * k1 / 3) + math.cos(2 * math.pi * k2 / 3))
    return form * form


def bernoulli_ice_background(k, h_h: float) -> float:
    """Diffuse background of the independent-hydrogen model,
    g(k) = h_H^2 (sin^2(pi k1 / 3) + sin^2(pi k2 / 3)); independent of h_O."""
    k1, k2 = np.atleast_1d(np.asarray(k, dtype=float)).ravel()
    return h_h * h_h * (math.sin(math.pi * k1 / 3) ** 2 + math.sin(math.pi * k2 / 3) ** 2)


_THIRD_OFFSETS = (-1.0 / 3.0, 0.0, 1.0 / 3.0)


def ice_autocorrelation_analytic(z, h_o: float, h_h: float) -> float:
    """Autocorrelation coefficient of the independent-hydrogen model at z.

    The support is the square lattice translated by third-integer offsets.
    Writing z = n + r with n integer and r in {-1/3, 0, 1/3}^2:

        r = (0, 0):          h_O^2 + h_H^2   (plus h_H^2 exactly at z = 0)
        r = (+-1/3, +-1/3):  h_H^2 / 2
        r on one axis only:  h_O h_H + h_H^2 / 4
                             (minus h_H^2 / 4 exactly at z = (+-1/3, 0), (0, +-1/3))

    Unsupported z returns 0.
    """
    zz = np.atleast_1d(np.asarray(z, dtype=float)).ravel()
    if zz.shape != (2,):
        raise ValueError("z must be a 2D difference vector")
    n = np.rint(zz)
    r = zz - n
    on_axis = []
    for comp in r:
        match = None
        for cand in _THIRD_OFFSETS:
            if abs(comp - cand) < 1e-9:
                match = cand
                break
        if match is None:
            return 0.0
        on_axis.append(match)
    rx, ry = on_axis
    at_origin = abs(zz[0]) < 1e-9 and abs(zz[1]) < 1e-9
    if rx == 0.0 and ry == 0.0:
        value = h_o * h_o + h_h * h_h
        if at_origin:
            value += h_h * h_h
        return value
    if rx != 0.0 and ry != 0.0:
        return h_h * h_h / 2.0
    value = h_o * h_h + h_h * h_h / 4.0
    # the non-periodic correction hits only the four offsets next to the origin
    if (abs(n[0]) < 1e-9 and abs(n[1]) < 1e-9):
        value -= h_h * h_h / 4.0
    return value


def analytic_ice_spectrum(h_o: float, h_h: float, hydrogen_disorder: str = "ice") -> AnalyticSpectrum:
    """Reference spectrum shared by square ice and its independent-hydrogen twin.

    The pure point part is identical for both.  Only the independent model
    has a closed-form background; for 'ice' the ac field stays None and the
    background must be measured numerically.
    """
    if hydrogen_disorder not in ("ice", "bernoulli"):
        raise ValueError("hydrogen_disorder must be 'ice' or 'bernoulli'")
    pp = {}
    for k1 in range(3):
        for k2 in range(3):
            pp[(float(k1), float(k2))] = ice_bragg((k1, k2), h_o, h_h)
    ac = None
    if hydrogen_disorder == "bernoulli":
        ac = lambda k: bernoulli_ice_background(k, h_h)
    return AnalyticSpectrum(
        model=f"square-ice-{hydrogen_disorder}",
        dimension=2,
        pp=pp,
        period=(3.0, 3.0),
        ac=ac,
    )
