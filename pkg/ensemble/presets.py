"""
Experimental platform constants.
"""
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

# Free-electron-like gyromagnetic ratio of the NV and P1 spins, rad/s/T
ELECTRON_GAMMA = 2 * np.pi * 28.024951e9


class PlatformPreset(BaseModel):
    """Dipolar coupling scale, coherence and state-preparation figures of one platform."""

    model_config = ConfigDict(frozen=True)

    name: str
    f_dd_hz: float
    t2_s: float
    init_fidelity: float
    readout_fidelity: float
    stretch: Optional[float] = None
    interaction_model: str = 'dipolar-spin-half'

    @property
    def coherence_ratio(self) -> float:
        """f_dd * T2, the number of coupling periods per coherence time."""
        return self.f_dd_hz * self.t2_s


PLATFORM_PRESETS = {
    'nv-ensemble': PlatformPreset(
        name='nv-ensemble',
        f_dd_hz=35e3,
        t2_s=7.9e-6,
        init_fidelity=0.975,
        readout_fidelity=0.975,
        # measured range 2-4
        stretch=2.0,
        interaction_model='nv-effective',
    ),
    'p1-centers': PlatformPreset(
        name='p1-centers',
        f_dd_hz=0.92e6,
        t2_s=4.4e-6,
        init_fidelity=0.95,
        readout_fidelity=0.95,
    ),
    'rare-earth': PlatformPreset(
        name='rare-earth',
        f_dd_hz=1.96e6,
        t2_s=2.5e-6,
        init_fidelity=0.97,
        readout_fidelity=0.946,
        stretch=2.4,
    ),
    'cold-molecules': PlatformPreset(
        name='cold-molecules',
        f_dd_hz=52.0,
        t2_s=80e-3,
        init_fidelity=0.97,
        readout_fidelity=0.97,
        interaction_model='cold-molecule',
    ),
}
