"""mtlens: scoring, bias/toxicity/robustness evaluation, and comparison
of pre-generated machine translations."""

__version__ = "0.1.0"
