"""Experiments shipped with roughroad.

The two examples share the datum 0.9 on [-0.5, 1.5] and 0.1 elsewhere, the
speed law psi = 1 - rho, the linear look-ahead kernel and the road
[-3, 5]. Case I is a fast road followed by a slow one (k_l = 3, k_r = 1);
Case II is the reverse. ``published`` holds the reference values the
results are compared against; ``desk`` lists the lighter resolutions used
when a run is asked for at desk scale.
"""

EXAMPLE_DATUM = {"breakpoints": [-0.5, 1.5], "values": [0.1, 0.9, 0.1]}
EXAMPLE_DOMAIN = [-3.0, 5.0]

CASE_SPEEDS = {
    "I": {"k_l": 3.0, "k_r": 1.0},
    "II": {"k_l": 1.0, "k_r": 3.0},
}


def _model(case):
    return {**CASE_SPEEDS[case], "psi": "linear", "g": "linear", "rho_max": 1.0}


DEFAULT_EXPERIMENTS = [
    {
        "id": "example1-case1",
        "title": "Queue behind a slowdown",
        "example": "example1",
        "case": "I",
        "description": "Stationary shock at x = 0 and a queue travelling backward; L1 errors and EOA at T = 2",
        "model": _model("I"),
        "kernel": {"kind": "linear-decreasing", "eta": 0.4},
        "initial": EXAMPLE_DATUM,
        "domain": EXAMPLE_DOMAIN,
        "t_final": 2.0,
        "resolutions": ["1/40", "1/80", "1/160", "1/320", "1/640"],
        "reference_dx": "1/1280",
        "snapshot_times": [0.5, 1.0, 1.5, 2.0],
        "snapshot_dx": "1/320",
        "published": {"errors": {"1/40": 5.7e-2, "1/80": 2.8e-2, "1/160": 1.4e-2, "1/320": 6.5e-3, "1/640": 2.4e-3}},
        "desk": {
            "resolutions": ["1/40", "1/80", "1/160", "1/320"],
            "reference_dx": "1/640",
        },
    },
    {
        "id": "example1-case2",
        "title": "Release onto a faster road",
        "example": "example1",
        "case": "II",
        "description": "Rarefaction right of x = 0 with the density dropping on the left; L1 errors and EOA at T = 2",
        "model": _model("II"),
        "kernel": {"kind": "linear-decreasing", "eta": 0.4},
        "initial": EXAMPLE_DATUM,
        "domain": EXAMPLE_DOMAIN,
        "t_final": 2.0,
        "resolutions": ["1/40", "1/80", "1/160", "1/320", "1/640"],
        "reference_dx": "1/1280",
        "snapshot_times": [1.0, 2.0],
        "snapshot_dx": "1/320",
        "published": {"errors": {"1/40": 9.8e-2, "1/80": 5.0e-2, "1/160": 2.3e-2, "1/320": 1.1e-2, "1/640": 5.0e-3}},
        "desk": {
            "resolutions": ["1/40", "1/80", "1/160", "1/320"],
            "reference_dx": "1/640",
        },
    },
    {
        "id": "example2-case1",
        "title": "Local limit, slowdown",
        "example": "example2",
        "case": "I",
        "description": "L1 distance to the local Godunov solution as eta -> 0 at T = 2",
        "model": _model("I"),
        "kernel": {"kind": "linear-decreasing", "eta": 0.1},
        "initial": EXAMPLE_DATUM,
        "domain": EXAMPLE_DOMAIN,
        "t_final": 2.0,
        "resolutions": ["1/1600"],
        "etas": [0.1, 0.02, 0.005],
        "figure": {"t_final": 0.7, "dx": "1/3200"},
        "published": {"distances": {"0.1": 7.4e-2, "0.02": 2.2e-2, "0.005": 6.3e-3}},
        "desk": {
            "resolutions": ["1/400"],
            "etas": [0.1, 0.02, 0.01],
            "figure": {"t_final": 0.7, "dx": "1/800"},
        },
    },
    {
        "id": "example2-case2",
        "title": "Local limit, speed-up",
        "example": "example2",
        "case": "II",
        "description": "L1 distance to the local Godunov solution as eta -> 0 at T = 2",
        "model": _model("II"),
        "kernel": {"kind": "linear-decreasing", "eta": 0.1},
        "initial": EXAMPLE_DATUM,
        "domain": EXAMPLE_DOMAIN,
        "t_final": 2.0,
        "resolutions": ["1/1600"],
        "etas": [0.1, 0.02, 0.005],
        "figure": {"t_final": 0.7, "dx": "1/3200"},
        "published": {"distances": {"0.1": 8.4e-2, "0.02": 2.8e-2, "0.005": 7.8e-3}},
        "desk": {
            "resolutions": ["1/400"],
            "etas": [0.1, 0.02, 0.01],
            "figure": {"t_final": 0.7, "dx": "1/800"},
        },
    },
    {
        "id": "custom",
        "title": "Custom problem",
        "example": "custom",
        "case": None,
        "description": "Any piecewise-constant datum (Riemann problems included) on a configurable road",
        "model": {"k_l": 1.0, "k_r": 1.0, "psi": "linear", "g": "linear", "rho_max": 1.0},
        "kernel": {"kind": "linear-decreasing", "eta": 0.1},
        "initial": {"breakpoints": [0.5], "values": [0.9, 0.1]},
        "domain": [-1.0, 2.0],
        "t_final": 0.5,
        "resolutions": ["1/100"],
        "snapshot_times": [],
    },
]
