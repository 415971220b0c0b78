"""Robust secure beamforming for an active-IRS-assisted UAV downlink.

Subpackages/modules:

- ``geometry_channel``: node geometry, steering vectors, Rician synthesis
- ``jitter_uncertainty``: bounded angle-jitter channel-error model
- ``conic_solver``: dense interior-point solver for cone programs
- ``robust_beamforming``: robust LMIs and the alternating optimization
- ``evaluation``: exact rate/secrecy evaluation and constraint audits
- ``experiment_cli``: configuration-driven Monte-Carlo parameter sweeps
"""

__version__ = "0.1.0"
