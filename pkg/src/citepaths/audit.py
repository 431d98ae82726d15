"""Validation options and the ingestion audit record."""
import json
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

FORWARD_POLICIES = ("drop", "reject")


@dataclass
class IngestAudit:
    """Anomaly counters filled in by the parsers and the graph builder.

    Each input row lands in exactly one bucket, so for each file
    ``accepted + sum(rejections) == rows``.
    """

    metadata_rows: int = 0
    metadata_accepted: int = 0
    malformed_metadata: int = 0
    missing_journal: int = 0
    year_out_of_range: int = 0
    citation_rows: int = 0
    citations_parsed: int = 0
    malformed_citations: int = 0
    unresolvable: int = 0
    self_loops: int = 0
    forward_citations: int = 0
    duplicates: int = 0
    accepted_edges: int = 0

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


@dataclass
class ValidationOptions:
    """How the builder treats questionable citations.

    ``forward_citation_policy`` is ``"drop"`` (default: remove and count) or
    ``"reject"`` (raise). A citation is *forward* when the cited paper is
    strictly younger than the citing one; with ``allow_same_year=False``
    same-year citations are treated as forward too.
    """

    forward_citation_policy: str = "drop"
    allow_same_year: bool = True
    year_range: Optional[Tuple[int, int]] = None
    report_sink: Optional[IngestAudit] = None

    def __post_init__(self):
        if self.forward_citation_policy not in FORWARD_POLICIES:
            raise ValueError(
                f"forward_citation_policy must be one of {FORWARD_POLICIES}, "
                f"got {self.forward_citation_policy!r}")
        if self.year_range is not None:
            lo, hi = self.year_range
            if lo > hi:
                raise ValueError(f"empty year range {self.year_range}")

    def sink(self):
        if self.report_sink is None:
            self.report_sink = IngestAudit()
        return self.report_sink
