"""Default profiles for the speed law psi and the slowdown factor g.

All coefficients are in s = rho / rho_max, lowest degree first.
"""

DEFAULT_PROFILES = [
    {
        "id": "linear",
        "name": "Linear",
        "coefficients": [1.0, -1.0],
        "description": "1 - rho/rho_max; the speed law of both worked examples",
        "aliases": ["1-rho", "1 - rho"],
    },
    {
        "id": "quadratic",
        "name": "Quadratic",
        "coefficients": [1.0, 0.0, -1.0],
        "description": "1 - (rho/rho_max)^2",
        "aliases": ["1-rho^2", "1 - rho^2"],
    },
    {
        "id": "squared",
        "name": "Squared linear",
        "coefficients": [1.0, -2.0, 1.0],
        "description": "(1 - rho/rho_max)^2",
        "aliases": ["(1-rho)^2", "(1 - rho)^2"],
    },
    {
        "id": "constant",
        "name": "Constant",
        "coefficients": [1.0],
        "description": "1; admissible for psi only since g must vanish at rho_max",
        "aliases": ["1"],
    },
]

# g may follow whatever psi is configured.
FOLLOW_PSI = "psi"
