"""LoRa waveforms, cross-correlation and BER under LEO-satellite Doppler for two ground devices."""

__version__ = "0.1.0"

from .config import (
    ConfigError,
    GroundDevice,
    OrbitConfig,
    PhysicalConstants,
    RadioConfig,
    ScenarioConfig,
    load_scenario,
    preset_scenario,
)
from .geometry import PassGeometry
from .visibility import VisibilityWindow, scenario_windows, shared_window, single_window
from .doppler import DopplerLinearModel, differential_doppler, linearize_continuous, linearize_discrete
from .waveform import synthesize_continuous, synthesize_discrete
from .xcorr import (
    DopplerTable,
    XcorrMatrix,
    aggregate_matrix,
    cfo_sweep,
    xcorr_analytic_continuous,
    xcorr_analytic_discrete,
    xcorr_defining_continuous,
    xcorr_defining_discrete,
)
from .ber import BerConfig, BerCurve, demodulate, run_ber, tolerable_threshold
