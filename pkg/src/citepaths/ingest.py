"""Streaming TSV parsers, corpus loading and summary statistics.

Input formats (UTF-8, one header line, tab separated)::

    metadata:   paper_id <TAB> journal <TAB> year
    citations:  citing_id <TAB> cited_id

Bad rows are counted in an :class:`~citepaths.audit.IngestAudit` rather than
raising, so a run over a dirty dump finishes and reports what it skipped.
"""
import io
from array import array
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .audit import FORWARD_POLICIES, IngestAudit, ValidationOptions  # noqa: F401
from .errors import EmptyCorpusError, IngestError
from .graph import CitationEdge, PaperRecord, build_paper_graph

METADATA_HEADER = ("paper_id", "journal", "year")
CITATION_HEADER = ("citing_id", "cited_id")
DEFAULT_CHUNK = 1 << 20


def _open(source):
    if isinstance(source, (str, Path)):
        try:
            return open(source, "rb"), True
        except OSError as exc:
            raise IngestError(f"cannot read {source}: {exc.strerror}") from exc
    if isinstance(source, (bytes, bytearray)):
        return io.BytesIO(source), True
    return source, False


def iter_lines(stream, chunk_size=DEFAULT_CHUNK):
    """Yield raw lines (without terminator) from a binary stream.

    Reads ``chunk_size`` bytes at a time; output does not depend on it.
    """
    pending = b""
    while True:
        chunk = stream.read(chunk_size)
        if not chunk:
            break
        if isinstance(chunk, str):
            chunk = chunk.encode("utf-8")
        pending += chunk
        lines = pending.split(b"\n")
        pending = lines.pop()
        for line in lines:
            yield line.rstrip(b"\r")
    if pending:
        yield pending.rstrip(b"\r")


def _rows(source, header, chunk_size):
    """Split lines into fields, check the header, skip blank lines."""
    stream, owned = _open(source)
    try:
        lines = iter_lines(stream, chunk_size)
        for first in lines:
            if first.strip():
                break
        else:
            return
        fields = tuple(f.strip().lower() for f in first.decode("utf-8", "replace").split("\t"))
        if fields != header:
            raise IngestError(
                f"expected header {'<TAB>'.join(header)!r}, got {first[:80]!r}")
        for line in lines:
            if not line.strip():
                continue
            try:
                yield line.decode("utf-8").split("\t")
            except UnicodeDecodeError:
                yield None
    finally:
        if owned:
            stream.close()


@dataclass
class MetadataTable:
    """Columnar parse result of a metadata file; iterates as PaperRecords."""

    paper_ids: list
    journal: np.ndarray
    year: np.ndarray
    journal_names: list
    index: dict

    def __len__(self):
        return len(self.paper_ids)

    def __iter__(self):
        for i, (j, y) in enumerate(zip(self.journal.tolist(), self.year.tolist())):
            yield PaperRecord(i, j, y)

    @property
    def n_journals(self):
        return len(self.journal_names)


@dataclass
class EdgeTable:
    """Columnar parse result of a citation file; iterates as CitationEdges."""

    citing: np.ndarray
    cited: np.ndarray

    def __len__(self):
        return len(self.citing)

    def __iter__(self):
        for a, b in zip(self.citing.tolist(), self.cited.tolist()):
            yield CitationEdge(a, b)


def parse_metadata(source, fmt="tsv", options=None, chunk_size=DEFAULT_CHUNK):
    """Parse ``paper_id, journal, year`` rows into a :class:`MetadataTable`.

    Papers and journals are interned in order of first appearance. Rows with
    the wrong field count, an empty id, or a non-integer year are counted as
    malformed; rows with an empty journal as ``missing_journal``; rows outside
    ``options.year_range`` as ``year_out_of_range``. A repeated paper id is an
    error. No accepted rows raises :class:`EmptyCorpusError`.
    """
    if fmt != "tsv":
        raise ValueError(f"unsupported metadata format {fmt!r}")
    options = options or ValidationOptions()
    audit = options.sink()
    year_range = options.year_range

    paper_ids = []
    index = {}
    journals = {}
    journal_col = array("i")
    year_col = array("i")
    for fields in _rows(source, METADATA_HEADER, chunk_size):
        audit.metadata_rows += 1
        if fields is None or len(fields) != 3:
            audit.malformed_metadata += 1
            continue
        pid, jname, ystr = (f.strip() for f in fields)
        try:
            year = int(ystr)
        except ValueError:
            audit.malformed_metadata += 1
            continue
        if not pid:
            audit.malformed_metadata += 1
            continue
        if not jname:
            audit.missing_journal += 1
            continue
        if year_range is not None and not year_range[0] <= year <= year_range[1]:
            audit.year_out_of_range += 1
            continue
        if pid in index:
            raise IngestError(f"duplicate paper id {pid!r} in metadata "
                              f"(row {audit.metadata_rows})")
        index[pid] = len(paper_ids)
        paper_ids.append(pid)
        journal_col.append(journals.setdefault(jname, len(journals)))
        year_col.append(year)
        audit.metadata_accepted += 1

    if not paper_ids:
        raise EmptyCorpusError("metadata file contains no usable rows")
    return MetadataTable(
        paper_ids=paper_ids,
        journal=np.frombuffer(journal_col, dtype=np.int32).copy(),
        year=np.frombuffer(year_col, dtype=np.int32).copy(),
        journal_names=list(journals),
        index=index,
    )


def parse_citations(source, index, fmt="tsv", options=None, chunk_size=DEFAULT_CHUNK):
    """Parse ``citing_id, cited_id`` rows, resolving ids through ``index``.

    ``index`` maps external paper ids to dense handles (``MetadataTable.index``
    or a MetadataTable itself). Rows naming an unknown paper are counted as
    ``unresolvable``; rows with the wrong field count as malformed.
    """
    if fmt != "tsv":
        raise ValueError(f"unsupported citation format {fmt!r}")
    if isinstance(index, MetadataTable):
        index = index.index
    options = options or ValidationOptions()
    audit = options.sink()
    citing = array("q")
    cited = array("q")
    lookup = index.get
    for fields in _rows(source, CITATION_HEADER, chunk_size):
        audit.citation_rows += 1
        if fields is None or len(fields) != 2:
            audit.malformed_citations += 1
            continue
        a = lookup(fields[0].strip())
        b = lookup(fields[1].strip())
        if a is None or b is None:
            audit.unresolvable += 1
            continue
        citing.append(a)
        cited.append(b)
        audit.citations_parsed += 1
    return EdgeTable(np.frombuffer(citing, dtype=np.int64).copy(),
                     np.frombuffer(cited, dtype=np.int64).copy())


def load_corpus(metadata, citations, options=None, chunk_size=DEFAULT_CHUNK):
    """Parse both files and build the :class:`~citepaths.graph.PaperGraph`.

    The returned graph carries the filled-in audit as ``graph.audit``.
    """
    options = options or ValidationOptions()
    options.sink()
    meta = parse_metadata(metadata, options=options, chunk_size=chunk_size)
    edges = parse_citations(citations, meta, options=options, chunk_size=chunk_size)
    return build_paper_graph(meta, edges, options=options)


# -- statistics ---------------------------------------------------------------

def ccdf(values):
    """[(threshold, fraction of values >= threshold)], thresholds from 0 up.

    Thresholds are 0 and every distinct positive value.
    """
    values = np.asarray(values)
    if len(values) == 0:
        return [(0, 1.0)]
    thresholds = np.unique(np.concatenate([[0], values[values > 0]]))
    sorted_vals = np.sort(values)
    at_least = len(values) - np.searchsorted(sorted_vals, thresholds, side="left")
    return [(int(t), float(c) / len(values)) for t, c in zip(thresholds, at_least)]


@dataclass
class CorpusStats:
    n_papers: int
    n_journals: int
    n_citations: int
    papers_per_journal: np.ndarray
    in_citations: np.ndarray
    out_citations: np.ndarray

    @property
    def ccdf_papers(self):
        return ccdf(self.papers_per_journal)

    @property
    def ccdf_in(self):
        return ccdf(self.in_citations)

    @property
    def ccdf_out(self):
        return ccdf(self.out_citations)

    def to_dict(self):
        return {
            "n_papers": self.n_papers,
            "n_journals": self.n_journals,
            "n_citations": self.n_citations,
            "ccdf": {"papers": self.ccdf_papers, "in_citations": self.ccdf_in,
                     "out_citations": self.ccdf_out},
        }


def corpus_stats(g):
    """Per-journal paper, in-citation and out-citation counts of ``g``.

    Citations between two papers of the same journal count on both sides.
    """
    J = g.n_journals
    src, dst = g.edges()
    jsrc = g.journal[src]
    jdst = g.journal[dst]
    return CorpusStats(
        n_papers=g.n_papers,
        n_journals=J,
        n_citations=g.n_edges,
        papers_per_journal=np.bincount(g.journal, minlength=J).astype(np.int64),
        in_citations=np.bincount(jdst, minlength=J).astype(np.int64),
        out_citations=np.bincount(jsrc, minlength=J).astype(np.int64),
    )
