"""Exact critical values of Rankin-Selberg type L-values at level one and their denominators.

Modules, bottom up: ``fields`` (cyclotomic and quadratic arithmetic, prime
valuations), ``characters``, ``bernoulli``, ``qexp`` (level-one forms and Hecke
operators), ``nearly`` (holomorphic projection anchor), ``modsym`` (period
polynomials), ``siegel`` (degree-2 Siegel Eisenstein coefficients), ``lab``
(scans and verdicts), ``report`` and ``cli``.
"""

__version__ = "0.1.0"
