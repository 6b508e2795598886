"""Metastability toolkit: hitting times, Eyring-Kramers predictions and checks."""

from ._core import (
    AllCensored,
    HittingTimes,
    RatePrediction,
    arrhenius_fit,
    capacity,
    carleman_det_2d,
    committor,
    counterterm_trace,
    ek_allen_cahn_1d,
    ek_allen_cahn_2d,
    ek_quartic,
    fredholm_closed_form,
    fredholm_det_1d,
    mean_hitting_time_pde,
    ou_density,
    rate_functional_quartic,
    rescaled_walks,
    sample_ac_hitting_times,
    sample_quartic_hitting_times,
    simulate_ac_1d,
)

__all__ = [
    "AllCensored",
    "HittingTimes",
    "RatePrediction",
    "arrhenius_fit",
    "capacity",
    "carleman_det_2d",
    "committor",
    "counterterm_trace",
    "ek_allen_cahn_1d",
    "ek_allen_cahn_2d",
    "ek_quartic",
    "fredholm_closed_form",
    "fredholm_det_1d",
    "mean_hitting_time_pde",
    "ou_density",
    "rate_functional_quartic",
    "rescaled_walks",
    "sample_ac_hitting_times",
    "sample_quartic_hitting_times",
    "simulate_ac_1d",
]
