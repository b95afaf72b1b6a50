"""Scalability assessment from short benchmark runs of parallel applications.

The typical flow is ingest -> metrics -> fitting -> analysis::

    records = ingest.parse_runs(fh, "runs-csv")
    series = ingest.aggregate(records, "throughput")
    capacity = metrics.scaleup(series, base_n=1)
    fit = fitting.fit_powerlaw(capacity)
    sat = analysis.detect_saturation(capacity, fit)
"""

from scalefit.errors import FitError, InputError

__version__ = "0.1.0"

__all__ = ["FitError", "InputError", "__version__"]
