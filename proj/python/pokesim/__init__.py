from ._core import (
    ConfigError,
    DomainError,
    IdentificationError,
    RunConfig,
    SolverError,
    analytic,
    dephasing_eta,
    load_config,
    noise_report,
    parse_config,
    solve,
    sweep,
    sweepable_parameters,
    t_phi,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "IdentificationError",
    "RunConfig",
    "SolverError",
    "analytic",
    "dephasing_eta",
    "load_config",
    "noise_report",
    "parse_config",
    "solve",
    "sweep",
    "sweepable_parameters",
    "t_phi",
]
