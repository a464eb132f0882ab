"""Prometheus metrics for verification runs.

The collectors are process-local; nothing here starts an exporter.
"""

from prometheus_client import Counter, Gauge, Histogram

# Check outcomes
checks_total = Counter(
    "revcurv_checks_total",
    "Verification checks evaluated",
    labelnames=["outcome"],
)

# Suite timings
suite_duration = Histogram(
    "revcurv_suite_duration_seconds",
    "Wall time spent in one verification suite",
    labelnames=["suite"],
)

last_report_passed = Gauge(
    "revcurv_last_report_passed",
    "1 if the most recent report passed every check, else 0",
)
