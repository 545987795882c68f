"""Next-location prediction with blended global/personal Markov models."""

try:
    from ._core import Model, Store, evaluate, load_records, synthesize, train
except ImportError:  # running against a build tree, where _core is top-level
    from _core import Model, Store, evaluate, load_records, synthesize, train

__all__ = ["Model", "Store", "evaluate", "load_records", "synthesize", "train"]
