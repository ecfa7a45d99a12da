#!/usr/bin/env python3
"""Regenerate crates/core/data/standard_atmosphere_275_325ghz.txt.

Simplified two-line water-vapour absorption model valid in 275-400 GHz:
k(f) = y1 + y2 + g with Lorentz-like lines at 10.835 and 12.664 cm^-1 and a
cubic continuum, driven by the water-vapour volume mixing ratio.
Standard atmosphere: 25 C, 50 % relative humidity, 1013.25 hPa.
"""
import math
import sys

C = 299_792_458.0


def mixing_ratio(temp_c=25.0, rel_humidity=50.0, pressure_hpa=1013.25):
    p_w = 6.1121 * (1.0007 + 3.46e-6 * pressure_hpa) * math.exp(
        17.502 * temp_c / (temp_c + 240.97)
    )
    return rel_humidity / 100.0 * p_w / pressure_hpa


def absorption(f_hz, mu):
    wn = f_hz / (100.0 * C)
    a = 0.2205 * mu * (0.1303 * mu + 0.0294)
    b = (0.4093 * mu + 0.0925) ** 2
    c = 2.014 * mu * (0.1702 * mu + 0.0303)
    d = (0.537 * mu + 0.0956) ** 2
    y1 = a / (b + (wn - 10.835) ** 2)
    y2 = c / (d + (wn - 12.664) ** 2)
    g = 5.54e-37 * f_hz**3 - 3.94e-25 * f_hz**2 + 9.06e-14 * f_hz - 6.36e-3
    return y1 + y2 + g


def main(out):
    mu = mixing_ratio()
    lines = [
        "# Molecular absorption coefficient, standard atmosphere",
        "# (25 C, 50 % RH, 1013.25 hPa), simplified water-vapour model 275-400 GHz.",
        f"# water-vapour mixing ratio = {mu:.6e}",
        "# frequency_Hz k_per_m",
    ]
    for step in range(0, 101):
        f = 275e9 + step * 0.5e9
        lines.append(f"{f:.6e} {max(absorption(f, mu), 0.0):.6e}")
    out.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.stdout)
