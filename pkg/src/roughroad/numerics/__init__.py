from .scheme import StepRecord, advance, extend, ghost_values, numerical_flux, run, step
from .godunov import (
    LocalFlux,
    LocalFluxPair,
    godunov_cfl_dt,
    godunov_interface_flux,
    godunov_step,
    run_godunov,
)
