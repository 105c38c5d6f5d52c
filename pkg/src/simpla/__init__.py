"""Term-modal epistemic logic on impure simplicial complexes."""
__version__ = "0.1.0"
