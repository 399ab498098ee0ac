"""
Inverse scattering, long-time asymptotics and a numerical Riemann-Hilbert
oracle for the reverse space-time nonlocal Hirota equation

    i q_t + alpha (q_xx - 2 q^2 q(-x, -t)) + i beta (q_xxx - 6 q q(-x, -t) q_x) = 0.

Modules
-------
specfun      complex Gamma, parabolic cylinder functions, branch-cut powers
scattering   Jost solutions, scattering matrix and reflection coefficients
phase        phase function, stationary points and steepest-descent legs
deltafun     scalar delta factor and its stationary-point data
asymptotics  leading-order long-time asymptotics
modelrh      closed-form parabolic-cylinder model problem
rhoracle     numerical Riemann-Hilbert solver
cli          command-line driver
"""
from .errors import (
    BranchTrackingError,
    CollocationError,
    ConfigError,
    DomainError,
    NlHirotaError,
    NumericalError,
    SectorError,
    WindingError,
)
from .scattering import Profile, ScatteringData, reflection_coefficients
from .phase import geometry
from .asymptotics import leading_q
from .rhoracle import oracle_q

__version__ = "0.1.0"

__all__ = [
    "BranchTrackingError",
    "CollocationError",
    "ConfigError",
    "DomainError",
    "NlHirotaError",
    "NumericalError",
    "SectorError",
    "WindingError",
    "Profile",
    "ScatteringData",
    "reflection_coefficients",
    "geometry",
    "leading_q",
    "oracle_q",
]
