"""HTTP service wrapping the library: handlers, schemas, FastAPI app."""
from .handlers import (handle_bench, handle_bmo_report, handle_default_config,
                       handle_dilation, handle_eig, handle_markov,
                       handle_verify)

__all__ = [
    "handle_bench", "handle_bmo_report", "handle_default_config",
    "handle_dilation", "handle_eig", "handle_markov", "handle_verify",
]
