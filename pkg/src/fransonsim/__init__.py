"""Two-photon interference simulator for a polarization-based Franson interferometer.

The package computes coincidence probabilities of polarization-entangled
photon pairs in a pair of unbalanced polarizing-beamsplitter interferometers
from first-principles amplitude enumeration, validates them against the
factorized fringe law, generates Poissonian counting datasets, and recovers
fringe visibilities, beat frequency, and compensation shifts by fitting.
"""

from .coincidence import (AnalyzerSettings, BiphotonSource, InterferenceReport,
                          analytic_probability, carrier_phase,
                          check_interference_conditions,
                          coincidence_probability, polarization_correlation)
from .counts import (BeatEstimate, CountingConfig, CountRecord,
                     EnvelopeEstimate, FitModel, VisibilityEstimate,
                     estimate_beat_frequency, estimate_visibility,
                     fit_envelope_center, sample_counts)
from .errors import (EngineError, FeatureOutOfWindow, FitDiverged, FitError,
                     GridTooCoarse, InsufficientData, InvalidState,
                     NoBeatDetected, NormalizationFailure, ProtocolViolation,
                     QuadratureNotConverged, SchemaError)
from .optics import (Element, ElementKind, PathAmplitude, PolarizationVector,
                     StateTerm, TwoPhotonInput, delay_segment, entangled_input,
                     enumerate_paths, half_wave_plate, jones_matrix, pbs,
                     phase_shift, polarizer, quarter_wave_plate, transfer)
from .scenarios import (DelaySet, Preset, ScanResult, ScanSpec, StageConfig,
                        analytic_scan, franson_paths, preset_scan, run_scan,
                        stage_to_delays)
from .spectral import (SpectralKind, SpectralModel, coherence_support,
                       correlation_envelope, envelope_numeric,
                       spectral_density)

__version__ = "0.1.0"
