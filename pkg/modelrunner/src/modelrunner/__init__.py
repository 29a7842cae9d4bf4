"""Engine adapters turning raw audio into utterance-level record files."""

__version__ = "0.1.0"

from .audio import AudioClip, AudioError, clip_audio
from .engines import (AcousticsEngine, AlignerEngine, AsrEngine, EngineError,
                      ScoredWord, make_engine)
from .runner import ConfigError, EngineConfig, load_engine_config, run_engines

__all__ = [
    "__version__",
    "AudioClip", "AudioError", "clip_audio",
    "AsrEngine", "AlignerEngine", "AcousticsEngine", "EngineError",
    "ScoredWord", "make_engine",
    "EngineConfig", "ConfigError", "load_engine_config", "run_engines",
]
