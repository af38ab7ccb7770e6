"""Orbifold Euler characteristics of cotangent line bundles on genus-one moduli spaces.

``chi(n, hodge, exps)`` returns the Euler characteristic of
``H**hodge (x) L_1**exps[0] (x) ... (x) L_n**exps[n-1]`` on the moduli
stack of stable genus-one curves with ``n`` marked points.
"""

__version__ = "0.1.0"
