"""ifnetlab: executable capacity machinery for single-hop interference
networks in the strong-interference regime.

Modules:
  netmodel  - topologies, discrete/Gaussian channels, message-group plans
  infocalc  - joint pmfs, simplex-grid families, exact information measures
  ratepoly  - H-polytopes, Fourier-Motzkin projection, support sweeps
  regimes   - condition catalog (discrete + Gaussian) and lemma verifiers
  regions   - rate-region templates, split-rate inner bound, sum rates
  boundsgen - unified outer-bound enumeration, specializations, evaluation
  cli       - command-line front end
"""

from .config import Caps, RunConfig

__all__ = ["Caps", "RunConfig"]
__version__ = "0.1.0"
