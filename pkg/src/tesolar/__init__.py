"""Intra-hour solar irradiance forecasting with triple exponential smoothing
on the clearness index against a Bird clear-sky model."""

__version__ = "0.1.0"
