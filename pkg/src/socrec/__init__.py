"""Social recommender engine for online marketplaces."""

__version__ = "0.1.0"
