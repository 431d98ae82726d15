"""Papers, journals, citations and the immutable paper citation graph.

Papers and journals are interned to dense integer handles (``0..N-1`` and
``0..J-1``); the original identifiers are kept in lookup tables. Adjacency is
stored twice in compressed index-offset (CSR) form: forward (citing -> cited)
and reverse (cited -> citing), both with rows sorted ascending.
"""
import struct
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _backend
from .audit import ValidationOptions
from .errors import CacheFormatError, IngestError


@dataclass(frozen=True)
class PaperRecord:
    id: int
    journal: int
    year: int


@dataclass(frozen=True)
class CitationEdge:
    """A citation ``citing -> cited``; knowledge flows the other way."""

    citing: int
    cited: int


def _readonly(a):
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def _csr(primary, secondary, n):
    """CSR arrays for edges already ordered by (primary, secondary)."""
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(primary, minlength=n), out=indptr[1:])
    return indptr, secondary.astype(np.int32)


class PaperGraph:
    """Time-annotated citation DAG over papers with journal membership.

    Build with :func:`build_paper_graph` or :meth:`from_arrays`; load a cache
    with :meth:`load`. All arrays are read-only.
    """

    def __init__(self, journal, year, out_indptr, out_indices,
                 paper_ids=None, journal_names=None, n_journals=None, audit=None):
        n = len(journal)
        journal = np.asarray(journal, dtype=np.int32)
        if n_journals is None:
            n_journals = len(journal_names) if journal_names is not None else (
                int(journal.max()) + 1 if n else 0)
        self.n_papers = n
        self.n_journals = int(n_journals)
        self.journal = _readonly(journal)
        self.year = _readonly(np.asarray(year, dtype=np.int32))
        self.out_indptr = _readonly(np.asarray(out_indptr, dtype=np.int64))
        self.out_indices = _readonly(np.asarray(out_indices, dtype=np.int32))

        src = np.repeat(np.arange(n, dtype=np.int64), np.diff(self.out_indptr))
        dst = self.out_indices.astype(np.int64)
        order = _backend.kernels.radix_argsort_pairs(dst, src, max(n, 1))
        in_indptr, in_indices = _csr(dst[order], src[order], n)
        self.in_indptr = _readonly(in_indptr)
        self.in_indices = _readonly(in_indices)

        order = np.argsort(self.journal, kind="stable")
        jptr, members = _csr(self.journal[order], order, self.n_journals)
        self.journal_indptr = _readonly(jptr)
        self.journal_papers = _readonly(members)

        self.paper_ids = list(paper_ids) if paper_ids is not None else [str(i) for i in range(n)]
        self.journal_names = (list(journal_names) if journal_names is not None
                              else [str(j) for j in range(self.n_journals)])
        if len(self.paper_ids) != n or len(self.journal_names) != self.n_journals:
            raise IngestError("identifier tables do not match graph dimensions")
        self.audit = audit
        self._paper_index = None
        self._journal_index = None

    # -- construction ---------------------------------------------------

    @classmethod
    def from_arrays(cls, journal, year, citing, cited, options=None,
                    paper_ids=None, journal_names=None, n_journals=None):
        """Validate an edge list and build the graph.

        Self-citations and duplicate edges are removed, forward-in-time
        citations are dropped or rejected per ``options``; every removal is
        counted in ``options.report_sink``.
        """
        options = options or ValidationOptions()
        audit = options.sink()
        journal = np.asarray(journal, dtype=np.int32)
        year = np.asarray(year, dtype=np.int32)
        n = len(journal)
        citing = np.asarray(citing, dtype=np.int64)
        cited = np.asarray(cited, dtype=np.int64)
        if len(citing) != len(cited):
            raise IngestError("citing and cited arrays differ in length")

        bad = (citing < 0) | (citing >= n) | (cited < 0) | (cited >= n)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise IngestError(
                f"edge #{i} ({int(citing[i])} -> {int(cited[i])}) references an "
                f"unknown paper (valid ids are 0..{n - 1})")

        loops = citing == cited
        audit.self_loops += int(loops.sum())
        keep = ~loops

        if n:
            yc, yd = year[citing], year[cited]
            forward = (yd > yc) if options.allow_same_year else (yd >= yc)
            forward &= keep
        else:
            forward = np.zeros(len(citing), dtype=bool)
        if forward.any():
            if options.forward_citation_policy == "reject":
                i = int(np.flatnonzero(forward)[0])
                raise IngestError(
                    f"forward citation in edge #{i}: paper {int(citing[i])} "
                    f"({int(year[citing[i]])}) cites paper {int(cited[i])} "
                    f"({int(year[cited[i]])})")
            audit.forward_citations += int(forward.sum())
            keep &= ~forward

        citing, cited = citing[keep], cited[keep]
        order = _backend.kernels.radix_argsort_pairs(citing, cited, max(n, 1))
        citing, cited = citing[order], cited[order]
        if len(citing):
            first = np.ones(len(citing), dtype=bool)
            first[1:] = (citing[1:] != citing[:-1]) | (cited[1:] != cited[:-1])
            audit.duplicates += int(len(citing) - first.sum())
            citing, cited = citing[first], cited[first]
        audit.accepted_edges += len(citing)

        indptr, indices = _csr(citing, cited, n)
        return cls(journal, year, indptr, indices, paper_ids=paper_ids,
                   journal_names=journal_names, n_journals=n_journals, audit=audit)

    # -- accessors ------------------------------------------------------

    @property
    def n_edges(self):
        return len(self.out_indices)

    @property
    def out_degree(self):
        return np.diff(self.out_indptr)

    @property
    def in_degree(self):
        return np.diff(self.in_indptr)

    @property
    def journal_sizes(self):
        return np.diff(self.journal_indptr)

    def edges(self):
        """(citing, cited) int64 arrays in (citing, cited) order."""
        src = np.repeat(np.arange(self.n_papers, dtype=np.int64), self.out_degree)
        return src, self.out_indices.astype(np.int64)

    def cites(self, p):
        return self.out_indices[self.out_indptr[p]:self.out_indptr[p + 1]]

    def cited_by(self, p):
        return self.in_indices[self.in_indptr[p]:self.in_indptr[p + 1]]

    def papers_of(self, j):
        return self.journal_papers[self.journal_indptr[j]:self.journal_indptr[j + 1]]

    def paper_index(self, external_id):
        if self._paper_index is None:
            self._paper_index = {pid: i for i, pid in enumerate(self.paper_ids)}
        return self._paper_index[external_id]

    def journal_index(self, name):
        if self._journal_index is None:
            self._journal_index = {nm: j for j, nm in enumerate(self.journal_names)}
        return self._journal_index[name]

    def is_acyclic(self):
        return not has_cycle(self.out_indptr, self.out_indices)

    def __repr__(self):
        return (f"PaperGraph(n_papers={self.n_papers}, n_journals={self.n_journals}, "
                f"n_edges={self.n_edges})")

    def __eq__(self, other):
        if not isinstance(other, PaperGraph):
            return NotImplemented
        return self.to_bytes() == other.to_bytes()

    __hash__ = None

    # -- cache ----------------------------------------------------------

    def to_bytes(self):
        return _encode(self)

    def save(self, path):
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path):
        return _decode(Path(path).read_bytes())

    @classmethod
    def from_bytes(cls, data):
        return _decode(data)


def build_paper_graph(records, edges, options=None, paper_ids=None, journal_names=None):
    """Build a :class:`PaperGraph` from records and citation edges.

    ``records`` is a sequence of :class:`PaperRecord` whose ids cover
    ``0..N-1`` exactly once; ``edges`` a sequence of :class:`CitationEdge`.
    Columnar tables from :mod:`citepaths.ingest` are accepted as well.
    """
    journal, year, n_journals = _record_arrays(records)
    if journal_names is None:
        journal_names = getattr(records, "journal_names", None)
    if paper_ids is None:
        paper_ids = getattr(records, "paper_ids", None)
    if hasattr(edges, "citing"):
        citing, cited = edges.citing, edges.cited
    else:
        edges = list(edges)
        citing = np.fromiter((e.citing for e in edges), dtype=np.int64, count=len(edges))
        cited = np.fromiter((e.cited for e in edges), dtype=np.int64, count=len(edges))
    if journal_names is not None:
        n_journals = len(journal_names)
    return PaperGraph.from_arrays(journal, year, citing, cited, options=options,
                                  paper_ids=paper_ids, journal_names=journal_names,
                                  n_journals=n_journals)


def _record_arrays(records):
    if hasattr(records, "journal") and hasattr(records, "year"):
        journal = np.asarray(records.journal, dtype=np.int32)
        return journal, np.asarray(records.year, dtype=np.int32), None
    records = list(records)
    n = len(records)
    ids = np.fromiter((r.id for r in records), dtype=np.int64, count=n)
    seen = np.zeros(n, dtype=bool)
    for r, i in zip(records, ids):
        if i < 0 or i >= n:
            raise IngestError(f"paper id {int(i)} outside dense range 0..{n - 1}")
        if seen[i]:
            raise IngestError(f"duplicate paper record id {int(i)}")
        seen[i] = True
    journal = np.empty(n, dtype=np.int32)
    year = np.empty(n, dtype=np.int32)
    journal[ids] = [r.journal for r in records]
    year[ids] = [r.year for r in records]
    return journal, year, None


def journal_of(g, p):
    """Journal handle of paper ``p``; raises ``IndexError`` when out of range."""
    if not 0 <= p < g.n_papers:
        raise IndexError(f"paper id {p} out of range 0..{g.n_papers - 1}")
    return int(g.journal[p])


def has_cycle(indptr, indices):
    """True if the directed graph given in CSR form contains a cycle (Kahn)."""
    n = len(indptr) - 1
    indeg = np.bincount(np.asarray(indices, dtype=np.int64), minlength=n).tolist()
    ptr = indptr.tolist()
    idx = indices.tolist()
    queue = deque(i for i in range(n) if indeg[i] == 0)
    seen = 0
    while queue:
        u = queue.popleft()
        seen += 1
        for k in range(ptr[u], ptr[u + 1]):
            v = idx[k]
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return seen < n


# --------------------------------------------------------------------------
# Binary cache.
#
#   offset  size  field
#   0       4     magic b"CPGR"
#   4       1     version (1)
#   5       3     reserved, zero
#   8       8     N  (u64 little-endian)
#   16      8     J
#   24      8     E
#   32      ...   sections, each zero-padded to a multiple of 8 bytes:
#                 out_indptr  int64[N+1]
#                 out_indices int32[E]
#                 in_indptr   int64[N+1]
#                 in_indices  int32[E]
#                 journal     int32[N]
#                 year        int32[N]
#                 paper id table, journal name table; each table is
#                 int64[count+1] byte offsets followed by the UTF-8 blob.
# --------------------------------------------------------------------------

MAGIC = b"CPGR"
VERSION = 1
_HEADER = struct.Struct("<4sB3xQQQ")


def _pad(b):
    return b + b"\0" * (-len(b) % 8)


def _strings_section(strings):
    encoded = [s.encode("utf-8") for s in strings]
    offsets = np.zeros(len(encoded) + 1, dtype="<i8")
    np.cumsum([len(e) for e in encoded], out=offsets[1:])
    return _pad(offsets.tobytes()) + _pad(b"".join(encoded))


def _encode(g):
    parts = [_HEADER.pack(MAGIC, VERSION, g.n_papers, g.n_journals, g.n_edges)]
    for arr, dt in ((g.out_indptr, "<i8"), (g.out_indices, "<i4"),
                    (g.in_indptr, "<i8"), (g.in_indices, "<i4"),
                    (g.journal, "<i4"), (g.year, "<i4")):
        parts.append(_pad(np.asarray(arr, dtype=dt).tobytes()))
    parts.append(_strings_section(g.paper_ids))
    parts.append(_strings_section(g.journal_names))
    return b"".join(parts)


class _Reader:
    def __init__(self, data):
        self.data = data
        self.pos = _HEADER.size

    def array(self, dtype, count):
        nbytes = np.dtype(dtype).itemsize * count
        if self.pos + nbytes > len(self.data):
            raise CacheFormatError("graph cache truncated")
        a = np.frombuffer(self.data, dtype=dtype, count=count, offset=self.pos)
        self.pos += nbytes + (-nbytes % 8)
        return a

    def strings(self, count):
        offsets = self.array("<i8", count + 1).tolist()
        blob_len = offsets[-1]
        start = self.pos
        if start + blob_len > len(self.data):
            raise CacheFormatError("graph cache truncated")
        raw = bytes(self.data[start:start + blob_len])
        self.pos += blob_len + (-blob_len % 8)
        return [raw[a:b].decode("utf-8") for a, b in zip(offsets[:-1], offsets[1:])]


def _decode(data):
    if len(data) < _HEADER.size:
        raise CacheFormatError("graph cache truncated")
    magic, version, n, j, e = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CacheFormatError("not a citepaths graph cache (bad magic)")
    if version != VERSION:
        raise CacheFormatError(f"unsupported graph cache version {version}")
    r = _Reader(data)
    out_indptr = r.array("<i8", n + 1)
    out_indices = r.array("<i4", e)
    in_indptr = r.array("<i8", n + 1)
    in_indices = r.array("<i4", e)
    journal = r.array("<i4", n)
    year = r.array("<i4", n)
    paper_ids = r.strings(n)
    journal_names = r.strings(j)

    g = PaperGraph.__new__(PaperGraph)
    g.n_papers, g.n_journals = n, j
    g.journal = _readonly(journal.astype(np.int32))
    g.year = _readonly(year.astype(np.int32))
    g.out_indptr = _readonly(out_indptr.astype(np.int64))
    g.out_indices = _readonly(out_indices.astype(np.int32))
    g.in_indptr = _readonly(in_indptr.astype(np.int64))
    g.in_indices = _readonly(in_indices.astype(np.int32))
    order = np.argsort(g.journal, kind="stable")
    jptr, members = _csr(g.journal[order], order, j)
    g.journal_indptr = _readonly(jptr)
    g.journal_papers = _readonly(members)
    g.paper_ids = paper_ids
    g.journal_names = journal_names
    g.audit = None
    g._paper_index = None
    g._journal_index = None
    return g
