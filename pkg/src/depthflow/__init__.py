"""depthflow: monocular depth estimation for obstacle detection.

A fully-convolutional encoder-decoder predicting per-pixel metric depth from
a single image or from an image concatenated with dense optical flow, plus
the synthetic-scene data generator, evaluation metrics, and robustness
tooling needed to train and benchmark it end to end on a CPU.
"""

__version__ = "0.1.0"
