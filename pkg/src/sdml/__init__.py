"""Model checking, translation and game solving for definable link deletion."""

__version__ = "0.1.0"
